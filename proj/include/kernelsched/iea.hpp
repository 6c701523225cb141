#pragma once

// Exact solver. The backbone of non-critical jobs is completed with the
// critical jobs in every consistent, non-dominated order; per order, the
// reactivation loop pushes delaying jobs behind re-formed kernels until a
// kernel pinned at its minimum release certifies optimality, the order is
// exhausted, or a freshly surfaced kernel updates the configuration and
// spawns offspring orders.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kernelsched/partition.hpp"

namespace kernelsched {

struct SolverOptions {
    bool dominance = true;          // apply the damping filter
    std::size_t visited_cap = 1u << 22;
};

struct SearchStats {
    std::int64_t permutations = 0;
    std::int64_t discarded_inconsistent = 0;
    std::int64_t discarded_dominated = 0;
    std::int64_t activations = 0;
    std::int64_t iterative_steps = 0;
    std::int64_t offspring_generated = 0;
    std::int64_t complete_schedules = 0;
    std::int64_t stage2_iterations_max = 0;
    std::int64_t tree_schedules_max = 0;  // per-order complete schedules (approx solver)
    std::int64_t branchings = 0;          // backtrack branches (approx solver)
    int nu = 0;
    int kappa = 0;
    std::map<std::string, std::int64_t> events;

    void bump(const std::string& key) { ++events[key]; }
};

struct Certificate {
    enum Kind { Optimal, Approx };
    Kind kind = Optimal;
    Time k = 0;  // approximation parameter when kind == Approx

    std::string to_string() const {
        if (kind == Optimal) return "optimal";
        return "approx(" + std::to_string(k) + ")";
    }
};

/// Halting taxonomy of the approximation scheme, kept for certificate audits.
struct ApproxHalt {
    enum Kind {
        ShortDelayingKernel,
        ShortRemainderDelaying,
        UniformComponentOptimal,
        TreeExhaustedBest,
    };
    Kind kind = TreeExhaustedBest;
    std::vector<JobId> witness_kernel;
    JobId witness_job = -1;

    static const char* kind_name(Kind k) {
        switch (k) {
            case ShortDelayingKernel: return "short-delaying-kernel";
            case ShortRemainderDelaying: return "short-remainder-delaying";
            case UniformComponentOptimal: return "uniform-component-optimal";
            case TreeExhaustedBest: return "tree-exhausted-best";
        }
        return "?";
    }
};

struct SolveResult {
    Schedule best;
    Certificate certificate;
    std::optional<ApproxHalt> approx_detail;
    SearchStats stats;
};

// ---------------------------------------------------------------------------
// Working layout: a time-sorted list of disjoint entries supporting insertion
// with right shifts of everything that follows.

namespace detail {

inline Time layout_earliest_idle(const Instance& inst, const std::vector<Entry>& entries,
                                 Time t) {
    for (const Entry& e : entries) {
        Time end = e.start + inst.job(e.job).processing;
        if (t < e.start) return t;
        if (t < end) t = end;
    }
    return t;
}

/// Insert `job` at idle time `t`; entries starting at or after `t` shift
/// right as needed, keeping their relative order.
inline void layout_insert(const Instance& inst, std::vector<Entry>& entries, JobId job,
                          Time t) {
    size_t pos = 0;
    while (pos < entries.size() && entries[pos].start < t) ++pos;
    entries.insert(entries.begin() + static_cast<std::ptrdiff_t>(pos), Entry{job, t});
    Time prev_end = t + inst.job(job).processing;
    for (size_t i = pos + 1; i < entries.size(); ++i) {
        entries[i].start = std::max(entries[i].start, prev_end);
        prev_end = entries[i].start + inst.job(entries[i].job).processing;
    }
}

inline Time layout_makespan(const Instance& inst, const std::vector<Entry>& entries) {
    Time m = kNoTime;
    for (const Entry& e : entries)
        m = std::max(m, e.start + inst.job(e.job).processing + inst.job(e.job).delivery);
    return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Orders of the critical jobs and their consistency rules: displaced and
// late-emerging jobs follow the time order of their kernels, and no
// late-emerging job of a kernel sits between two displaced jobs of the same
// kernel.

struct CriticalOrder {
    std::vector<JobId> jobs;

    enum class Provenance { Steady, Offspring, Neighbor, Enumerated };
    Provenance provenance = Provenance::Enumerated;

    friend bool operator==(const CriticalOrder& a, const CriticalOrder& b) {
        return a.jobs == b.jobs;
    }
};

/// First order position that violates a consistency rule, if any.
inline std::optional<size_t> consistency_violation(const Configuration& cfg,
                                                   const std::vector<JobId>& order) {
    int max_rank = -1;
    std::map<int, std::pair<bool, bool>> kernel_state;  // kernel -> (saw displaced, saw late after displaced)
    for (size_t pos = 0; pos < order.size(); ++pos) {
        JobId j = order[pos];
        JobTag t = cfg.tag[static_cast<size_t>(j)];
        if (t != JobTag::Displaced && t != JobTag::LateEmerging) continue;
        int kid = cfg.kernel_of[static_cast<size_t>(j)];
        int rank = cfg.kernel_rank(kid);
        if (rank < max_rank) return pos;
        max_rank = std::max(max_rank, rank);
        auto& st = kernel_state[kid];
        if (t == JobTag::Displaced) {
            if (st.second) return pos;  // a late-emerging job sits between displaced ones
            st.first = true;
        } else if (st.first) {
            st.second = true;
        }
    }
    return std::nullopt;
}

inline bool is_consistent(const Configuration& cfg, const std::vector<JobId>& order) {
    return !consistency_violation(cfg, order).has_value();
}

// ---------------------------------------------------------------------------
// Steady order: greedily extend the backbone with the released critical job
// of largest delivery time at the earliest idle moment admitting one.

inline std::pair<CriticalOrder, Schedule> steady_permutation(const Configuration& cfg) {
    const Instance& inst = *cfg.instance;
    std::vector<Entry> layout = cfg.backbone.entries;
    std::vector<JobId> remaining = cfg.critical_ids();
    CriticalOrder order;
    order.provenance = CriticalOrder::Provenance::Steady;

    while (!remaining.empty()) {
        Time tau = kInfTime;
        for (JobId j : remaining)
            tau = std::min(tau, detail::layout_earliest_idle(inst, layout, inst.job(j).release));
        JobId pick = -1;
        for (JobId j : remaining) {
            if (inst.job(j).release > tau) continue;
            if (pick == -1 || ldt_prefers(inst.job(j), inst.job(pick))) pick = j;
        }
        internal_check(pick != -1, "steady order found no released critical job");
        detail::layout_insert(inst, layout, pick, tau);
        order.jobs.push_back(pick);
        remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
    }
    Schedule s(inst);
    s.entries = std::move(layout);
    return {order, s};
}

// ---------------------------------------------------------------------------
// Order insertion: fill the backbone's idle time with the critical jobs in
// the given order. Discards inconsistent orders and, when the damping filter
// is on, orders dominated by the neighbouring swap.

struct InsertOutcome {
    enum Kind { Complete, Inconsistent, Dominated };
    Kind kind = Complete;
    Schedule schedule;
    size_t at_iteration = 0;
};

inline InsertOutcome insert_permutation(const Configuration& cfg, const CriticalOrder& order,
                                        const SolverOptions& opts = {}) {
    const Instance& inst = *cfg.instance;
    InsertOutcome out;
    if (auto bad = consistency_violation(cfg, order.jobs)) {
        out.kind = InsertOutcome::Inconsistent;
        out.at_iteration = *bad + 1;
        return out;
    }

    std::vector<Entry> layout = cfg.backbone.entries;
    Time prev_start = kNoTime;
    Time prev_completion = kNoTime;
    for (size_t i = 0; i < order.jobs.size(); ++i) {
        JobId j = order.jobs[i];
        Time t = detail::layout_earliest_idle(inst, layout, inst.job(j).release);
        if (i > 0 && t < prev_start) {
            // The job fits into a gap before its order predecessor. If that
            // placement does not raise the makespan, the swapped order covers
            // this one and the whole order is dominated.
            if (opts.dominance) {
                std::vector<Entry> variant = layout;
                detail::layout_insert(inst, variant, j, t);
                if (detail::layout_makespan(inst, variant) <=
                    detail::layout_makespan(inst, layout)) {
                    out.kind = InsertOutcome::Dominated;
                    out.at_iteration = i + 1;
                    return out;
                }
            }
            t = detail::layout_earliest_idle(inst, layout,
                                             std::max(inst.job(j).release, prev_completion));
        }
        detail::layout_insert(inst, layout, j, t);
        prev_start = t;
        prev_completion = t + inst.job(j).processing;
    }
    out.schedule = Schedule(inst);
    out.schedule.entries = std::move(layout);
    internal_check(validate_schedule(out.schedule).ok(), "order insertion broke feasibility");
    return out;
}

// ---------------------------------------------------------------------------
// Offspring: when a new kernel surfaces under a parent order, its displaced
// jobs enter as a contiguous block anchored at the kernel's position and the
// late-emerging jobs distribute around (never inside) that block.

inline std::vector<CriticalOrder> offspring(const Configuration& cfg,
                                            const CriticalOrder& parent,
                                            const RelabelInfo& info,
                                            const Schedule& trigger) {
    size_t prefix = 0;
    for (JobId j : parent.jobs) {
        auto st = trigger.start_of(j);
        if (st && *st < info.trigger_first_start) ++prefix;
    }

    std::vector<JobId> alpha = info.new_displaced;
    std::vector<JobId> beta = info.new_late;
    std::sort(alpha.begin(), alpha.end());
    std::sort(beta.begin(), beta.end());

    std::set<std::vector<JobId>> seen;
    std::vector<CriticalOrder> out;
    auto emit = [&](const std::vector<JobId>& group) {
        std::vector<JobId> cand;
        cand.reserve(parent.jobs.size() + group.size());
        cand.insert(cand.end(), parent.jobs.begin(),
                    parent.jobs.begin() + static_cast<std::ptrdiff_t>(prefix));
        cand.insert(cand.end(), group.begin(), group.end());
        cand.insert(cand.end(), parent.jobs.begin() + static_cast<std::ptrdiff_t>(prefix),
                    parent.jobs.end());
        if (!is_consistent(cfg, cand)) return;
        if (!seen.insert(cand).second) return;
        CriticalOrder o;
        o.jobs = cand;
        o.provenance = CriticalOrder::Provenance::Offspring;
        out.push_back(std::move(o));
    };

    std::vector<JobId> a = alpha;
    do {
        if (beta.empty()) {
            emit(a);
            continue;
        }
        std::vector<JobId> b = beta;
        do {
            for (size_t split = 0; split <= b.size(); ++split) {
                std::vector<JobId> group(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(split));
                group.insert(group.end(), a.begin(), a.end());
                group.insert(group.end(), b.begin() + static_cast<std::ptrdiff_t>(split), b.end());
                emit(group);
            }
        } while (std::next_permutation(b.begin(), b.end()));
    } while (std::next_permutation(a.begin(), a.end()));

    std::sort(out.begin(), out.end(),
              [](const CriticalOrder& x, const CriticalOrder& y) { return x.jobs < y.jobs; });
    return out;
}

// ---------------------------------------------------------------------------
// Priority list of orders: neighbour swaps suggested by the halting analysis
// first, then systematic lexicographic enumeration of all consistent orders
// (the exactness fallback), with a visited set so no order repeats.

struct Blame {
    JobId job = -1;  // the activated job whose secondary kernel halted the order
};

struct PermSearchState {
    std::set<std::vector<JobId>> visited;
    std::deque<CriticalOrder> queue;
    std::vector<JobId> enum_ids;    // sorted critical ids of the current generation
    std::vector<JobId> enum_cur;
    bool enum_open = false;   // enum_cur holds a not-yet-advanced order
    bool enum_done = false;
    int generation = -1;
    std::size_t visited_cap = 1u << 22;
    bool visited_overflow = false;

    void mark_visited(const std::vector<JobId>& v) {
        if (visited.size() >= visited_cap) {
            visited_overflow = true;
            return;
        }
        visited.insert(v);
    }
    bool is_visited(const std::vector<JobId>& v) const {
        return visited.count(v) > 0;
    }
};

inline void sync_generation(PermSearchState& st, const Configuration& cfg) {
    if (st.generation == cfg.generation) return;
    st.generation = cfg.generation;
    st.enum_ids = cfg.critical_ids();
    st.enum_cur = st.enum_ids;
    st.enum_open = true;
    st.enum_done = st.enum_ids.empty();
}

/// Next order to evaluate: blame-driven neighbour swaps (nearest first), then
/// queued offspring, then the lexicographic fallback. Absent when every
/// consistent order of the current generation has been visited.
inline std::optional<CriticalOrder> next_permutation(PermSearchState& st,
                                                     const Configuration& cfg,
                                                     const CriticalOrder& last,
                                                     const std::optional<Blame>& blame) {
    sync_generation(st, cfg);
    const Instance& inst = *cfg.instance;

    if (blame && blame->job != -1) {
        auto it = std::find(last.jobs.begin(), last.jobs.end(), blame->job);
        if (it != last.jobs.end()) {
            size_t pos_e = static_cast<size_t>(it - last.jobs.begin());
            std::vector<CriticalOrder> swaps;
            for (size_t p = pos_e; p-- > 0;) {
                if (inst.job(last.jobs[p]).delivery >= inst.job(blame->job).delivery) continue;
                CriticalOrder cand = last;
                std::swap(cand.jobs[p], cand.jobs[pos_e]);
                cand.provenance = CriticalOrder::Provenance::Neighbor;
                swaps.push_back(std::move(cand));
            }
            for (auto rit = swaps.rbegin(); rit != swaps.rend(); ++rit)
                st.queue.push_front(std::move(*rit));
        }
    }

    while (!st.queue.empty()) {
        CriticalOrder cand = std::move(st.queue.front());
        st.queue.pop_front();
        std::vector<JobId> sorted = cand.jobs;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != st.enum_ids) continue;  // stale: the critical set has grown
        if (st.is_visited(cand.jobs) || !is_consistent(cfg, cand.jobs)) continue;
        st.mark_visited(cand.jobs);
        return cand;
    }

    while (!st.enum_done) {
        std::vector<JobId> cand = st.enum_cur;
        if (!st.enum_open) {
            if (!std::next_permutation(st.enum_cur.begin(), st.enum_cur.end())) {
                st.enum_done = true;
                break;
            }
            cand = st.enum_cur;
        }
        st.enum_open = false;
        if (!st.is_visited(cand) && is_consistent(cfg, cand)) {
            st.mark_visited(cand);
            CriticalOrder o;
            o.jobs = cand;
            o.provenance = CriticalOrder::Provenance::Enumerated;
            return o;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Reactivation (stage-2) machinery shared by the per-order evaluation.

namespace detail {

inline int kernel_owner(const Configuration& cfg, const KernelReport& k) {
    for (const Entry& e : k.jobs)
        if (cfg.job_in_components(e.job)) return cfg.kernel_of[static_cast<size_t>(e.job)];
    return -1;
}

/// Rebuild the schedule after forcing delaying job `l` behind kernel `k`:
/// the prefix keeps its starts, the kernel members replay alone under LDT
/// (falling back to their releases), the tail re-anchors in order, and `l`
/// takes the earliest fitting idle slot after the kernel but before the next
/// critical job, pushing that job if nothing fits.
inline Schedule reactivate(const Configuration& cfg, const Schedule& cur,
                           const KernelReport& k, JobId l, const ReleaseOverrides& floors) {
    const Instance& inst = *cfg.instance;
    size_t li = 0;
    while (li < cur.entries.size() && cur.entries[li].job != l) ++li;
    internal_check(li + k.jobs.size() < cur.entries.size() + 1 &&
                       cur.entries[li + 1].job == k.jobs.front().job,
                   "delaying job is not adjacent to its kernel");

    std::vector<Entry> result(cur.entries.begin(),
                              cur.entries.begin() + static_cast<std::ptrdiff_t>(li));
    Time prefix_end = 0;
    for (const Entry& e : result)
        prefix_end = std::max(prefix_end, e.start + inst.job(e.job).processing);

    std::vector<JobId> members;
    for (const Entry& e : k.jobs) members.push_back(e.job);
    Schedule relay = ldt(inst, floors, &members, prefix_end);
    Time kernel_end = 0;
    for (const Entry& e : relay.entries) {
        result.push_back(e);
        kernel_end = std::max(kernel_end, e.start + inst.job(e.job).processing);
    }

    // Tail: everything after the kernel, original order, re-anchored.
    std::vector<Entry> tail(cur.entries.begin() + static_cast<std::ptrdiff_t>(li) + 1 +
                                static_cast<std::ptrdiff_t>(k.jobs.size()),
                            cur.entries.end());
    auto floor_of = [&](JobId j) {
        Time f = floors.effective(inst, j);
        if (cfg.backbone_start[static_cast<size_t>(j)] != kNoTime)
            f = std::max(f, cfg.backbone_start[static_cast<size_t>(j)]);
        return f;
    };

    size_t next_critical = tail.size();
    for (size_t i = 0; i < tail.size(); ++i) {
        if (is_critical(cfg.tag[static_cast<size_t>(tail[i].job)])) {
            next_critical = i;
            break;
        }
    }

    // Chain the tail without l to expose its idle slots.
    std::vector<Entry> chained;
    Time prev = kernel_end;
    for (const Entry& e : tail) {
        Time s = std::max(floor_of(e.job), prev);
        chained.push_back(Entry{e.job, s});
        prev = s + inst.job(e.job).processing;
    }

    Time l_release = floors.effective(inst, l);
    Time window_end = next_critical < chained.size() ? chained[next_critical].start : kInfTime;
    Time slot = kNoTime;
    Time gap_start = kernel_end;
    for (size_t i = 0; i <= chained.size(); ++i) {
        Time gap_end = i < chained.size() ? chained[i].start : kInfTime;
        Time cand = std::max(gap_start, l_release);
        if (cand + inst.job(l).processing <= std::min(gap_end, window_end)) {
            slot = cand;
            break;
        }
        if (i < chained.size())
            gap_start = std::max(gap_start, chained[i].start + inst.job(chained[i].job).processing);
        if (gap_start >= window_end) break;
    }

    if (slot != kNoTime) {
        layout_insert(inst, chained, l, slot);
    } else {
        // No fitting idle room: place l immediately before the next critical
        // job and right-shift.
        std::vector<Entry> with_l;
        prev = kernel_end;
        for (size_t i = 0; i <= tail.size(); ++i) {
            if (i == next_critical) {
                Time s = std::max(l_release, prev);
                with_l.push_back(Entry{l, s});
                prev = s + inst.job(l).processing;
            }
            if (i == tail.size()) break;
            Time s = std::max(floor_of(tail[i].job), prev);
            with_l.push_back(Entry{tail[i].job, s});
            prev = s + inst.job(tail[i].job).processing;
        }
        if (next_critical == tail.size() + 1) {  // unreachable guard
            Time s = std::max(l_release, prev);
            with_l.push_back(Entry{l, s});
        }
        chained = std::move(with_l);
    }

    result.insert(result.end(), chained.begin(), chained.end());
    Schedule out(inst);
    out.entries = std::move(result);
    std::sort(out.entries.begin(), out.entries.end(),
              [](const Entry& a, const Entry& b) { return a.start < b.start; });
    internal_check(validate_schedule(out).ok(), "reactivation broke feasibility");
    return out;
}

}  // namespace detail

/// Result of evaluating one order end to end.
struct OrderResult {
    enum Kind {
        Discarded,       // inconsistent or dominated at insertion
        GlobalOptimal,   // a kernel pinned at its min release certified the makespan
        Best,            // exhausted: best schedule respecting this order
        NewKernel,       // configuration update required; trigger holds the schedule
        Promote,         // a free delaying job must join the critical jobs
    };
    Kind kind = Discarded;
    Schedule schedule;        // GlobalOptimal / Best / NewKernel trigger
    std::optional<Blame> blame;
    InsertOutcome::Kind discard_reason = InsertOutcome::Inconsistent;
    JobId promote_job = -1;
    int promote_owner = -1;
    Time promote_first_start = 0;
    std::vector<Schedule> generated;  // every complete schedule seen for this order
};

/// Evaluate one order: insertion, then the reactivation loop.
inline OrderResult process_order(const Configuration& cfg, const CriticalOrder& order,
                                 const SolverOptions& opts, SearchStats& stats,
                                 const Schedule* prebuilt = nullptr) {
    const Instance& inst = *cfg.instance;
    OrderResult res;

    Schedule start;
    if (prebuilt) {
        if (auto bad = consistency_violation(cfg, order.jobs)) {
            ++stats.discarded_inconsistent;
            res.discard_reason = InsertOutcome::Inconsistent;
            return res;
        }
        start = *prebuilt;
    } else {
        InsertOutcome ins = insert_permutation(cfg, order, opts);
        if (ins.kind == InsertOutcome::Inconsistent) {
            ++stats.discarded_inconsistent;
            res.discard_reason = ins.kind;
            return res;
        }
        if (ins.kind == InsertOutcome::Dominated) {
            ++stats.discarded_dominated;
            res.discard_reason = ins.kind;
            return res;
        }
        start = std::move(ins.schedule);
    }

    const int n = inst.size();
    const int nu = static_cast<int>(order.jobs.size());
    const std::int64_t iteration_cap =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(n - nu) * std::max(nu, 1));

    ReleaseOverrides floors;
    std::set<std::pair<std::vector<JobId>, JobId>> activated;
    std::map<JobId, int> activation_kernel;  // job -> owner kernel of its activation
    Schedule cur = std::move(start);
    res.generated.push_back(cur);
    ++stats.complete_schedules;
    std::int64_t iterations = 0;

    while (true) {
        ScheduleAnalysis an = analyze(inst, cur, floors);

        // A kernel whose first job starts at the kernel's true min release pins
        // the makespan to min release + total processing + overflow delivery,
        // which no feasible schedule can beat.
        for (const KernelReport& k : an.kernels) {
            if (k.first_start == k.min_true_release) {
                res.kind = OrderResult::GlobalOptimal;
                res.schedule = cur;
                stats.bump("halt_pinned_kernel");
                return res;
            }
        }

        const KernelReport* undelayed = nullptr;
        for (const KernelReport& k : an.kernels)
            if (!k.delaying.has_value()) {
                undelayed = &k;
                break;
            }
        if (undelayed) {
            // No delaying job left to move: this order is exhausted.
            res.kind = OrderResult::Best;
            size_t bi = 0;
            for (size_t i = 1; i < res.generated.size(); ++i)
                if (res.generated[i].makespan() < res.generated[bi].makespan()) bi = i;
            res.schedule = res.generated[bi];
            for (const Entry& e : undelayed->jobs) {
                auto it = activation_kernel.find(e.job);
                if (it != activation_kernel.end()) {
                    res.blame = Blame{e.job};
                    break;
                }
            }
            stats.bump("order_exhausted");
            return res;
        }

        const KernelReport* fresh = detail::earliest_free_overflow_kernel(cfg, an);
        if (fresh) {
            res.kind = OrderResult::NewKernel;
            res.schedule = cur;
            return res;
        }

        const KernelReport& k = an.kernels.front();
        JobId l = *k.delaying;
        if (cfg.tag[static_cast<size_t>(l)] == JobTag::Free) {
            res.kind = OrderResult::Promote;
            res.schedule = cur;
            res.promote_job = l;
            res.promote_owner = detail::kernel_owner(cfg, k);
            res.promote_first_start = k.first_start;
            stats.bump("free_delayer_promotion");
            return res;
        }

        std::vector<JobId> identity = k.job_ids();
        std::sort(identity.begin(), identity.end());
        if (!activated.insert({identity, l}).second) {
            // The same job would be pushed behind the same kernel twice; the
            // order has nothing new to offer.
            res.kind = OrderResult::Best;
            size_t bi = 0;
            for (size_t i = 1; i < res.generated.size(); ++i)
                if (res.generated[i].makespan() < res.generated[bi].makespan()) bi = i;
            res.schedule = res.generated[bi];
            stats.bump("repeat_activation_cutoff");
            return res;
        }
        ++iterations;
        internal_check(iterations <= iteration_cap,
                       "reactivation exceeded its iteration bound");
        stats.stage2_iterations_max = std::max(stats.stage2_iterations_max, iterations);

        Time floor = kNoTime;
        for (const Entry& e : k.jobs) floor = std::max(floor, floors.effective(inst, e.job));
        floors.raise(inst, l, floor);
        int owner = detail::kernel_owner(cfg, k);
        activation_kernel[l] = owner;

        cur = detail::reactivate(cfg, cur, k, l, floors);
        res.generated.push_back(cur);
        ++stats.complete_schedules;
        ++stats.activations;
    }
}

// ---------------------------------------------------------------------------
// Top-level exact solve.

inline SolveResult solve(const Instance& inst, const SolverOptions& opts = {}) {
    SolveResult result;
    SearchStats& stats = result.stats;

    Schedule sigma0 = ldt(inst);
    ScheduleAnalysis an0 = analyze(inst, sigma0);
    result.best = sigma0;
    auto track = [&](const Schedule& s) {
        if (result.best.entries.empty() || s.makespan() < result.best.makespan())
            result.best = s;
    };

    if (an0.conflicts.empty()) {
        stats.bump("conflict_free_shortcut");
        result.certificate = {Certificate::Optimal, 0};
        return result;
    }

    Configuration cfg = preprocess(inst);
    stats.nu = cfg.nu();
    stats.iterative_steps = cfg.iterative_calls;

    Time lb = lower_bound(inst);
    if (!cfg.backbone.entries.empty()) lb = std::max(lb, cfg.backbone.makespan());
    for (const KernelRec& k : cfg.kernels) lb = std::max(lb, k.decomp.lb_value);

    if (cfg.nu() == 0) {
        // The backbone is a complete schedule and its makespan is a lower
        // bound, so it is optimal.
        track(cfg.backbone);
        stats.bump("empty_critical_set");
        result.certificate = {Certificate::Optimal, 0};
        return result;
    }

    PermSearchState state;
    state.visited_cap = opts.visited_cap;
    sync_generation(state, cfg);

    auto [steady_order, steady_schedule] = steady_permutation(cfg);
    state.mark_visited(steady_order.jobs);

    std::optional<CriticalOrder> current = steady_order;
    const Schedule* prebuilt = &steady_schedule;
    CriticalOrder last = steady_order;
    std::optional<Blame> blame;

    while (current) {
        ++stats.permutations;
        last = *current;
        OrderResult r = process_order(cfg, *current, opts, stats, prebuilt);
        prebuilt = nullptr;
        blame = std::nullopt;

        if (r.kind == OrderResult::GlobalOptimal) {
            track(r.schedule);
            result.certificate = {Certificate::Optimal, 0};
            stats.nu = cfg.nu();
            return result;
        }
        if (r.kind == OrderResult::Best) {
            track(r.schedule);
            if (result.best.makespan() == lb) {
                stats.bump("halt_lower_bound");
                result.certificate = {Certificate::Optimal, 0};
                stats.nu = cfg.nu();
                return result;
            }
            blame = r.blame;
        } else if (r.kind == OrderResult::NewKernel) {
            for (const Schedule& s : r.generated) track(s);
            RelabelInfo info = iterative_step(cfg, r.schedule);
            internal_check(info.changed, "new kernel vanished during the iterative step");
            ++stats.iterative_steps;
            build_sigma234(cfg);
            for (const KernelRec& k : cfg.kernels) lb = std::max(lb, k.decomp.lb_value);
            auto kids = offspring(cfg, *current, info, r.schedule);
            stats.offspring_generated += static_cast<std::int64_t>(kids.size());
            for (auto it = kids.rbegin(); it != kids.rend(); ++it)
                state.queue.push_front(std::move(*it));
            stats.bump("new_kernel_update");
        } else if (r.kind == OrderResult::Promote) {
            for (const Schedule& s : r.generated) track(s);
            JobId l = r.promote_job;
            if (r.promote_owner >= 0) {
                cfg.tag[static_cast<size_t>(l)] = JobTag::LateEmerging;
                cfg.kernel_of[static_cast<size_t>(l)] = r.promote_owner;
            } else {
                cfg.tag[static_cast<size_t>(l)] = JobTag::Critical;
            }
            ++cfg.generation;
            build_sigma234(cfg);
            RelabelInfo info;
            info.changed = true;
            info.trigger_first_start = r.promote_first_start;
            info.new_late.push_back(l);
            auto kids = offspring(cfg, *current, info, r.schedule);
            stats.offspring_generated += static_cast<std::int64_t>(kids.size());
            for (auto it = kids.rbegin(); it != kids.rend(); ++it)
                state.queue.push_front(std::move(*it));
        } else {
            // Discarded; nothing to track.
        }

        current = next_permutation(state, cfg, last, blame);
    }

    stats.bump("orders_exhausted");
    stats.nu = cfg.nu();
    result.certificate = {Certificate::Optimal, 0};
    return result;
}

}  // namespace kernelsched
