#include "doctest.h"

#include "kernelsched/iea.hpp"
#include "kernelsched/oracle.hpp"
#include "test_instances.hpp"

using namespace kernelsched;
using namespace kstest;

TEST_CASE("solve i1 to optimality") {
    Instance inst = i1();
    SolveResult r = solve(inst);
    CHECK(r.best.makespan() == 13);
    CHECK(r.certificate.kind == Certificate::Optimal);
    CHECK(r.stats.nu == 1);
    CHECK(r.stats.permutations == 1);
    CHECK(validate_schedule(r.best).ok());
}

TEST_CASE("solve i2 to optimality") {
    Instance inst = i2();
    SolveResult r = solve(inst);
    CHECK(r.best.makespan() == 17);
    CHECK(r.certificate.kind == Certificate::Optimal);
    CHECK(r.stats.nu == 2);
    CHECK(validate_schedule(r.best).ok());
}

TEST_CASE("steady order of i2 and its schedule") {
    Instance inst = i2();
    Configuration cfg = preprocess(inst);
    auto [order, sched] = steady_permutation(cfg);
    CHECK(order.jobs == std::vector<JobId>{I2_L, I2_A});
    CHECK(sched.entries == std::vector<Entry>{{I2_L, 0}, {I2_B, 10}, {I2_A, 12}});
    CHECK(sched.makespan() == 21);
}

TEST_CASE("steady order of i1 raises the whole backbone") {
    Instance inst = i1();
    Configuration cfg = preprocess(inst);
    auto [order, sched] = steady_permutation(cfg);
    CHECK(order.jobs == std::vector<JobId>{0});
    CHECK(sched.entries == std::vector<Entry>{{0, 0}, {1, 5}, {2, 7}});
    CHECK(sched.makespan() == 17);
}

TEST_CASE("insertion reproduces the steady schedule") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Instance inst = random_instance(2 + static_cast<int>(seed % 7), seed * 61 + 3);
        Configuration cfg = preprocess(inst);
        if (cfg.nu() == 0) continue;
        auto [order, sched] = steady_permutation(cfg);
        InsertOutcome ins = insert_permutation(cfg, order);
        if (ins.kind == InsertOutcome::Complete) CHECK(ins.schedule.entries == sched.entries);
    }
}

TEST_CASE("insertion of the two i2 orders") {
    Instance inst = i2();
    Configuration cfg = preprocess(inst);

    CriticalOrder la;
    la.jobs = {I2_L, I2_A};
    InsertOutcome r1 = insert_permutation(cfg, la);
    REQUIRE(r1.kind == InsertOutcome::Complete);
    CHECK(r1.schedule.makespan() == 21);

    CriticalOrder al;
    al.jobs = {I2_A, I2_L};
    InsertOutcome r2 = insert_permutation(cfg, al);
    REQUIRE(r2.kind == InsertOutcome::Complete);
    CHECK(r2.schedule.entries == std::vector<Entry>{{I2_A, 2}, {I2_B, 5}, {I2_L, 7}});
    CHECK(r2.schedule.makespan() == 17);
}

TEST_CASE("consistency rules on a synthetic configuration") {
    // Three critical jobs of one kernel: displaced, late-emerging, displaced.
    Instance toy = parse_instance("3\n0 1 0\n0 1 0\n0 1 0\n");
    Configuration syn;
    syn.instance = &toy;
    syn.tag = {JobTag::Displaced, JobTag::LateEmerging, JobTag::Displaced};
    syn.kernel_of = {0, 0, 0};
    syn.critical_assoc.assign(3, {});
    KernelRec rec;
    rec.id = 0;
    syn.kernels.push_back(rec);
    CHECK(!consistency_violation(syn, {0, 2, 1}).has_value());
    CHECK(!consistency_violation(syn, {1, 0, 2}).has_value());
    auto bad = consistency_violation(syn, {0, 1, 2});
    REQUIRE(bad.has_value());
    CHECK(*bad == 2);  // the trailing displaced job exposes the sandwich
}

TEST_CASE("cross-kernel order violations") {
    Instance toy = parse_instance("2\n0 1 0\n0 1 0\n");
    Configuration syn;
    syn.instance = &toy;
    syn.tag = {JobTag::Displaced, JobTag::Displaced};
    syn.kernel_of = {0, 1};
    syn.critical_assoc.assign(2, {});
    KernelRec k0, k1;
    k0.id = 0;
    k1.id = 1;
    Component c0, c1;
    c0.jobs = {{0, 0}};
    c1.jobs = {{1, 5}};
    k0.decomp.components = {c0};
    k1.decomp.components = {c1};
    syn.kernels = {k0, k1};
    CHECK(is_consistent(syn, {0, 1}));
    CHECK(!is_consistent(syn, {1, 0}));
}

TEST_CASE("offspring enumerates anchored interleavings") {
    Instance toy = parse_instance("5\n0 1 0\n0 1 0\n0 1 0\n0 1 0\n0 1 0\n");
    Configuration syn;
    syn.instance = &toy;
    syn.tag.assign(5, JobTag::Critical);
    syn.kernel_of.assign(5, -1);
    syn.critical_assoc.assign(5, {});
    KernelRec rec;
    rec.id = 0;
    syn.kernels.push_back(rec);

    // Parent order (0, 1); jobs 2 and 3 become displaced, job 4 late-emerging.
    syn.tag[2] = JobTag::Displaced;
    syn.tag[3] = JobTag::Displaced;
    syn.tag[4] = JobTag::LateEmerging;
    syn.kernel_of[2] = syn.kernel_of[3] = syn.kernel_of[4] = 0;

    CriticalOrder parent;
    parent.jobs = {0, 1};
    RelabelInfo info;
    info.changed = true;
    info.kernel_id = 0;
    info.new_displaced = {2, 3};
    info.new_late = {4};
    info.trigger_first_start = 10;
    Schedule trig(toy);
    trig.entries = {{0, 0}, {1, 20}};  // job 0 before the kernel, job 1 after

    auto kids = offspring(syn, parent, info, trig);
    // 2! displaced block orders x the late job before or after the block.
    REQUIRE(kids.size() == 4);
    for (const auto& k : kids) {
        CHECK(k.jobs.size() == 5);
        CHECK(k.jobs.front() == 0);
        CHECK(k.jobs.back() == 1);
        CHECK(is_consistent(syn, k.jobs));
        size_t p2 = 0, p3 = 0, p4 = 0;
        for (size_t i = 0; i < k.jobs.size(); ++i) {
            if (k.jobs[i] == 2) p2 = i;
            if (k.jobs[i] == 3) p3 = i;
            if (k.jobs[i] == 4) p4 = i;
        }
        CHECK((p4 < std::min(p2, p3) || p4 > std::max(p2, p3)));
    }
    for (size_t i = 1; i < kids.size(); ++i) CHECK(kids[i - 1].jobs < kids[i].jobs);
}

TEST_CASE("offspring with no new jobs returns the parent") {
    Instance toy = parse_instance("2\n0 1 0\n0 1 0\n");
    Configuration syn;
    syn.instance = &toy;
    syn.tag.assign(2, JobTag::Critical);
    syn.kernel_of.assign(2, -1);
    syn.critical_assoc.assign(2, {});
    CriticalOrder parent;
    parent.jobs = {1, 0};
    RelabelInfo info;
    info.changed = true;
    Schedule trig(toy);
    trig.entries = {{1, 0}, {0, 5}};
    auto kids = offspring(syn, parent, info, trig);
    REQUIRE(kids.size() == 1);
    CHECK(kids[0].jobs == parent.jobs);
}

TEST_CASE("neighbour generation follows the swap rule") {
    Instance inst = i2();
    Configuration cfg = preprocess(inst);
    PermSearchState st;
    sync_generation(st, cfg);
    CriticalOrder last;
    last.jobs = {I2_L, I2_A};
    st.mark_visited(last.jobs);
    // Blame the activated job a (delivery 6): l precedes it with delivery 0.
    auto next = next_permutation(st, cfg, last, Blame{I2_A});
    REQUIRE(next.has_value());
    CHECK(next->jobs == std::vector<JobId>{I2_A, I2_L});
    CHECK(next->provenance == CriticalOrder::Provenance::Neighbor);
    // Everything is visited now.
    CHECK(!next_permutation(st, cfg, last, std::nullopt).has_value());
}

TEST_CASE("single critical job: no further orders") {
    Instance inst = i1();
    Configuration cfg = preprocess(inst);
    PermSearchState st;
    sync_generation(st, cfg);
    CriticalOrder only;
    only.jobs = {0};
    st.mark_visited(only.jobs);
    CHECK(!next_permutation(st, cfg, only, std::nullopt).has_value());
}

TEST_CASE("exactness against the oracle on random instances") {
    for (std::uint64_t seed = 0; seed < 600; ++seed) {
        int n = 1 + static_cast<int>(seed % 7);
        Instance inst = random_instance(n, seed * 71 + 17);
        Time opt = brute_force(inst).opt_makespan;
        SolveResult r = solve(inst);
        CAPTURE(seed);
        CAPTURE(serialize_instance(inst));
        REQUIRE(validate_schedule(r.best).ok());
        CHECK(r.best.is_complete());
        CHECK(r.best.makespan() == opt);
        CHECK(r.best.makespan() >= lower_bound(inst));
    }
}

TEST_CASE("dominance filtering never changes the result") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        Instance inst = random_instance(n, seed * 73 + 23);
        SolveResult with = solve(inst, SolverOptions{.dominance = true});
        SolveResult without = solve(inst, SolverOptions{.dominance = false});
        CAPTURE(seed);
        CHECK(with.best.makespan() == without.best.makespan());
        CHECK(without.stats.discarded_dominated == 0);
    }
}

TEST_CASE("every schedule respects its order's critical sequence") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Instance inst = random_instance(3 + static_cast<int>(seed % 6), seed * 79 + 5);
        Configuration cfg = preprocess(inst);
        if (cfg.nu() < 2) continue;
        PermSearchState st;
        sync_generation(st, cfg);
        CriticalOrder last;
        int looked = 0;
        for (auto ord = next_permutation(st, cfg, last, std::nullopt);
             ord && looked < 12; ord = next_permutation(st, cfg, last, std::nullopt)) {
            ++looked;
            last = *ord;
            InsertOutcome ins = insert_permutation(cfg, *ord);
            if (ins.kind != InsertOutcome::Complete) continue;
            Time prev = kNoTime;
            for (JobId j : ord->jobs) {
                auto st_j = ins.schedule.start_of(j);
                REQUIRE(st_j.has_value());
                CHECK(*st_j > prev);
                prev = *st_j;
            }
        }
    }
}
