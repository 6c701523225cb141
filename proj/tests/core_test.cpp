#include "doctest.h"

#include "kernelsched/core.hpp"
#include "kernelsched/oracle.hpp"
#include "test_instances.hpp"

using namespace kernelsched;
using namespace kstest;

TEST_CASE("parse_instance reads jobs in file order") {
    Instance inst = parse_instance("3\n0 5 0\n1 2 10\n3 1 9");
    REQUIRE(inst.size() == 3);
    CHECK(inst.job(0).release == 0);
    CHECK(inst.job(0).processing == 5);
    CHECK(inst.job(0).delivery == 0);
    CHECK(inst.job(1).release == 1);
    CHECK(inst.job(2).delivery == 9);
}

TEST_CASE("parse_instance accepts a single unit job") {
    Instance inst = parse_instance("1\n0 1 0");
    REQUIRE(inst.size() == 1);
    CHECK(inst.job(0).processing == 1);
}

TEST_CASE("parse_instance reports the offending line") {
    CHECK_THROWS_WITH_AS(parse_instance("2\n0 1 -1\n0 1 0"),
                         "line 2: negative delivery", ParseError);
    CHECK_THROWS_AS(parse_instance("2\n0 1 0"), ParseError);
    CHECK_THROWS_AS(parse_instance("1\n0 x 0"), ParseError);
    CHECK_THROWS_AS(parse_instance("1\n0 0 0"), ParseError);  // processing >= 1
    CHECK_THROWS_AS(parse_instance("0\n"), ParseError);
    CHECK_THROWS_AS(parse_instance("1\n0 1 0 7"), ParseError);
}

TEST_CASE("serializer round-trips through the parser") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Instance inst = random_instance(1 + static_cast<int>(seed % 9), seed);
        Instance again = parse_instance(serialize_instance(inst));
        REQUIRE(again.size() == inst.size());
        for (int i = 0; i < inst.size(); ++i) {
            CHECK(again.job(i).release == inst.job(i).release);
            CHECK(again.job(i).processing == inst.job(i).processing);
            CHECK(again.job(i).delivery == inst.job(i).delivery);
        }
        CHECK(serialize_instance(again) == serialize_instance(inst));
    }
}

TEST_CASE("validate_schedule accepts a feasible schedule and computes makespan") {
    Instance inst = i1();
    Schedule s = make_schedule(inst, {{0, 0}, {1, 5}, {2, 7}});
    CHECK(validate_schedule(s).ok());
    CHECK(s.makespan() == 17);
}

TEST_CASE("validate_schedule reports start before release") {
    Instance inst = i1();
    Schedule s = make_schedule(inst, {{1, 0}});
    auto rep = validate_schedule(s);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == Violation::StartBeforeRelease);
}

TEST_CASE("validate_schedule reports overlap") {
    Instance inst = i1();
    Schedule s = make_schedule(inst, {{0, 0}, {1, 3}});
    auto rep = validate_schedule(s);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == Violation::Overlap);
}

TEST_CASE("validate_schedule reports duplicates and unknown ids") {
    Instance inst = i1();
    Schedule s = make_schedule(inst, {{0, 0}, {0, 6}, {7, 20}});
    auto rep = validate_schedule(s);
    REQUIRE(rep.violations.size() == 2);
    CHECK(rep.violations[0].kind == Violation::DuplicateJob);
    CHECK(rep.violations[1].kind == Violation::UnknownJob);
}

TEST_CASE("lower_bound on the worked instances") {
    CHECK(lower_bound(i1()) == 13);
    CHECK(lower_bound(i2()) == 15);
    Instance single = parse_instance("1\n7 3 2");
    CHECK(lower_bound(single) == 12);
}

TEST_CASE("lower_bound never exceeds the oracle optimum") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Instance inst = random_instance(1 + static_cast<int>(seed % 7), seed * 31 + 1);
        CHECK(lower_bound(inst) <= brute_force(inst).opt_makespan);
    }
}

TEST_CASE("split_short_long tags by the exact rational threshold") {
    SizeClass sc = split_short_long(i2(), 2);
    CHECK(sc.lb == 15);
    CHECK(sc.long_job(I2_L));      // 10 > 15/2
    CHECK(!sc.long_job(I2_A));
    CHECK(!sc.long_job(I2_B));
    CHECK(sc.long_count() == 1);

    SizeClass sc1 = split_short_long(i1(), 2);
    CHECK(sc1.long_count() == 0);  // threshold 6.5, max p = 5
}

TEST_CASE("boundary processing time classifies as short") {
    // LB = 12, k = 2: threshold exactly 6, and p = 6 must stay short.
    Instance inst = parse_instance("2\n0 6 0\n0 6 0");
    SizeClass sc = split_short_long(inst, 2);
    CHECK(sc.lb == 12);
    CHECK(sc.long_count() == 0);
}

TEST_CASE("threshold at or above the largest processing time makes every job short") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Instance inst = random_instance(4 + static_cast<int>(seed % 5), seed + 500, 4, 4, 4);
        Time pmax = 0;
        for (const Job& j : inst.jobs) pmax = std::max(pmax, j.processing);
        Time lb = lower_bound(inst);
        for (Time k = 2; checked_mul(k, pmax) <= lb && k <= 8; ++k)
            CHECK(split_short_long(inst, k).long_count() == 0);
    }
}

TEST_CASE("long job count stays below k") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Instance inst = random_instance(1 + static_cast<int>(seed % 9), seed * 7 + 3, 20, 20, 20);
        for (Time k = 2; k <= 6; ++k) CHECK(split_short_long(inst, k).long_count() < k);
    }
}
