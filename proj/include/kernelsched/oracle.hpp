#pragma once

// Ground-truth engines for testing: exhaustive exact optimum for small n
// (some optimal schedule starts each job at max(previous completion,
// release), so enumerating job orders suffices), and the preemptive
// largest-delivery-time lower bound.

#include <algorithm>
#include <numeric>
#include <vector>

#include "kernelsched/core.hpp"

namespace kernelsched {

struct OracleResult {
    Time opt_makespan = 0;
    Schedule witness;
    std::uint64_t orders_examined = 0;
};

struct OracleOptions {
    int cap = 10;
    bool prune = true;  // cut orders whose partial makespan already meets the best
};

inline OracleResult brute_force(const Instance& inst, const OracleOptions& opts = {}) {
    const int n = inst.size();
    if (n > opts.cap)
        throw ContractError("brute_force: instance size " + std::to_string(n) +
                            " exceeds cap " + std::to_string(opts.cap));

    std::vector<JobId> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    OracleResult res;
    res.opt_makespan = kInfTime;
    std::vector<Time> starts(static_cast<size_t>(n));
    do {
        ++res.orders_examined;
        Time t = 0;
        Time mk = kNoTime;
        bool cut = false;
        for (size_t i = 0; i < order.size(); ++i) {
            const Job& j = inst.job(order[i]);
            t = std::max(t, j.release);
            starts[i] = t;
            t += j.processing;
            mk = std::max(mk, t + j.delivery);
            if (opts.prune && mk >= res.opt_makespan) {
                cut = true;
                break;
            }
        }
        if (cut) continue;
        if (mk < res.opt_makespan) {
            res.opt_makespan = mk;
            res.witness = Schedule(inst);
            for (size_t i = 0; i < order.size(); ++i)
                res.witness.entries.push_back(Entry{order[i], starts[i]});
        }
    } while (std::next_permutation(order.begin(), order.end()));

    internal_check(res.opt_makespan >= lower_bound(inst),
                   "oracle optimum below the lower bound");
    return res;
}

/// Preemptive largest-delivery-time simulation; its makespan is exact for the
/// preemptive relaxation, hence a lower bound for the non-preemptive optimum.
inline Time preemptive_ldt_bound(const Instance& inst) {
    struct State {
        Time remaining;
        bool done = false;
    };
    std::vector<State> st;
    st.reserve(inst.jobs.size());
    for (const Job& j : inst.jobs) st.push_back({j.processing});

    std::vector<JobId> by_release(inst.jobs.size());
    std::iota(by_release.begin(), by_release.end(), 0);
    std::sort(by_release.begin(), by_release.end(), [&](JobId a, JobId b) {
        if (inst.job(a).release != inst.job(b).release) return inst.job(a).release < inst.job(b).release;
        return a < b;
    });

    size_t next = 0;
    std::vector<JobId> live;
    Time t = 0;
    Time bound = kNoTime;
    size_t finished = 0;
    while (finished < inst.jobs.size()) {
        if (live.empty()) {
            t = std::max(t, inst.job(by_release[next]).release);
        }
        while (next < by_release.size() && inst.job(by_release[next]).release <= t)
            live.push_back(by_release[next++]);

        JobId run = live.front();
        for (JobId c : live) {
            const Job& a = inst.job(c);
            const Job& r = inst.job(run);
            if (a.delivery > r.delivery || (a.delivery == r.delivery && c < run)) run = c;
        }
        // Run until completion or the next release, whichever comes first.
        Time until = next < by_release.size() ? inst.job(by_release[next]).release : kInfTime;
        Time slice = std::min(st[static_cast<size_t>(run)].remaining,
                              until == kInfTime ? st[static_cast<size_t>(run)].remaining : until - t);
        if (slice <= 0) slice = st[static_cast<size_t>(run)].remaining;
        t += slice;
        st[static_cast<size_t>(run)].remaining -= slice;
        if (st[static_cast<size_t>(run)].remaining == 0) {
            st[static_cast<size_t>(run)].done = true;
            ++finished;
            bound = std::max(bound, t + inst.job(run).delivery);
            live.erase(std::find(live.begin(), live.end(), run));
        }
    }
    return bound;
}

}  // namespace kernelsched
