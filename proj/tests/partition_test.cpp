#include "doctest.h"

#include "kernelsched/oracle.hpp"
#include "kernelsched/partition.hpp"
#include "test_instances.hpp"

using namespace kernelsched;
using namespace kstest;

TEST_CASE("initial configuration of i2") {
    Instance inst = i2();
    Configuration cfg = preprocess(inst);
    REQUIRE(cfg.kernels.size() == 1);
    CHECK(cfg.tag[I2_L] == JobTag::Critical);
    CHECK(cfg.tag[I2_A] == JobTag::Displaced);
    CHECK(cfg.tag[I2_B] == JobTag::Atomic);
    CHECK(cfg.nu() == 2);
    CHECK(cfg.backbone.entries == std::vector<Entry>{{I2_B, 4}});
    CHECK(cfg.backbone.makespan() == 14);
}

TEST_CASE("initial configuration of i1") {
    Instance inst = i1();
    Configuration cfg = preprocess(inst);
    REQUIRE(cfg.kernels.size() == 1);
    CHECK(cfg.tag[0] == JobTag::Critical);
    CHECK(cfg.tag[1] == JobTag::Atomic);
    CHECK(cfg.tag[2] == JobTag::Atomic);
    CHECK(cfg.nu() == 1);
    CHECK(cfg.backbone.entries == std::vector<Entry>{{1, 1}, {2, 3}});
    CHECK(cfg.backbone.makespan() == 13);
}

TEST_CASE("no-conflict instances keep every job free") {
    Instance inst = parse_instance("3\n0 2 5\n1 2 5\n4 3 5\n");  // equal deliveries
    REQUIRE(analyze(inst, ldt(inst)).conflicts.empty());
    Configuration cfg = preprocess(inst);
    CHECK(cfg.nu() == 0);
    for (JobId j = 0; j < inst.size(); ++j) CHECK(!is_critical(cfg.tag[static_cast<size_t>(j)]));
    CHECK(cfg.backbone.size() == inst.jobs.size());
}

TEST_CASE("configuration invariants on random instances") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        int n = 1 + static_cast<int>(seed % 9);
        Instance inst = random_instance(n, seed * 53 + 101);
        Time opt = brute_force(inst).opt_makespan;
        Configuration cfg = preprocess(inst);

        // Backbone holds exactly the non-critical jobs, is feasible, and its
        // makespan is a lower bound on the optimum.
        CHECK(validate_schedule(cfg.backbone).ok());
        CHECK(static_cast<int>(cfg.backbone.size()) + cfg.nu() == n);
        for (const Entry& e : cfg.backbone.entries)
            CHECK(!is_critical(cfg.tag[static_cast<size_t>(e.job)]));
        if (!cfg.backbone.entries.empty()) CHECK(cfg.backbone.makespan() <= opt);

        // Decomposition bounds hold for every kernel.
        for (const KernelRec& k : cfg.kernels) CHECK(k.decomp.lb_value <= opt);

        // No kernel of the backbone retains a delaying emerging job.
        if (!cfg.backbone.entries.empty()) {
            ScheduleAnalysis an = analyze(inst, cfg.backbone);
            for (const KernelReport& k : an.kernels) CHECK(!k.delaying.has_value());
        }

        // Owners exist where required.
        for (JobId j = 0; j < n; ++j) {
            JobTag t = cfg.tag[static_cast<size_t>(j)];
            if (t == JobTag::Displaced || t == JobTag::LateEmerging || t == JobTag::Atomic ||
                t == JobTag::Satellite)
                CHECK(cfg.kernel(cfg.kernel_of[static_cast<size_t>(j)]) != nullptr);
        }

        // Kernel component spans are pairwise disjoint and time-ordered.
        Time prev_end = kNoTime;
        for (const KernelRec& k : cfg.kernels) {
            for (const Component& c : k.decomp.components) {
                CHECK(c.start() >= prev_end);
                prev_end = c.jobs.back().start + inst.job(c.jobs.back().job).processing;
            }
        }

        // Free jobs keep their initial-schedule intervals.
        for (const Entry& e : cfg.backbone.entries)
            if (cfg.tag[static_cast<size_t>(e.job)] == JobTag::Free)
                CHECK(e.start == *cfg.sigma0.start_of(e.job));
    }
}

TEST_CASE("iterative step reports no change when nothing new surfaced") {
    Instance inst = i2();
    Configuration cfg = preprocess(inst);
    RelabelInfo info = iterative_step(cfg, cfg.backbone);
    CHECK(!info.changed);

    // A schedule whose kernel consists of component and critical jobs only is
    // secondary, not new.
    Schedule s = make_schedule(inst, {{I2_L, 0}, {I2_B, 10}, {I2_A, 12}});
    CHECK(!iterative_step(cfg, s).changed);
}
