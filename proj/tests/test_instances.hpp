#pragma once

// Shared fixtures and generators for the test suites.

#include <random>

#include "kernelsched/core.hpp"

namespace kstest {

using namespace kernelsched;

// Three jobs: j0(0,5,0), j1(1,2,10), j2(3,1,9). LDT runs j0 first and delays
// the urgent pair; the optimum is 13.
inline Instance i1() {
    return parse_instance("3\n0 5 0\n1 2 10\n3 1 9\n");
}

// l(0,10,0), a(2,3,6), b(4,2,8): one long low-urgency job covering the two
// urgent ones; the optimum is 17.
inline Instance i2() {
    return parse_instance("3\n0 10 0\n2 3 6\n4 2 8\n");
}

constexpr kernelsched::JobId I2_L = 0;
constexpr kernelsched::JobId I2_A = 1;
constexpr kernelsched::JobId I2_B = 2;

/// Deterministic uniform instance: r in [0, rmax], p in [1, pmax], q in [0, qmax].
inline Instance random_instance(int n, std::uint64_t seed, Time rmax = 12, Time pmax = 6,
                                Time qmax = 12) {
    std::mt19937_64 rng(seed);
    auto draw = [&](Time lo, Time hi) {
        return lo + static_cast<Time>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    Instance inst;
    for (int i = 0; i < n; ++i)
        inst.jobs.push_back(Job{i, draw(0, rmax), draw(1, pmax), draw(0, qmax)});
    return inst;
}

inline Schedule make_schedule(const Instance& inst, std::initializer_list<Entry> entries) {
    Schedule s(inst);
    s.entries = entries;
    return s;
}

}  // namespace kstest
