#pragma once

// Largest-delivery-time list scheduling, structural analysis of schedules
// (blocks, kernels, overflow/emerging/delaying jobs, conflicts), and
// alternative schedules obtained by activating a delaying job behind its
// kernel via release-time overrides.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "kernelsched/core.hpp"

namespace kernelsched {

/// Per-job effective release times. Overrides only ever delay a job.
struct ReleaseOverrides {
    std::map<JobId, Time> raised;

    Time effective(const Job& j) const {
        auto it = raised.find(j.id);
        return it == raised.end() ? j.release : std::max(j.release, it->second);
    }
    Time effective(const Instance& inst, JobId id) const {
        return effective(inst.job(id));
    }
    /// Raise the effective release of `id` to at least `t` (idempotent).
    void raise(const Instance& inst, JobId id, Time t) {
        Time cur = effective(inst.job(id));
        if (t > cur) raised[id] = t;
    }
    bool empty() const { return raised.empty(); }
};

// ---------------------------------------------------------------------------
// LDT list scheduling: at each decision time (max of the previous completion
// and the earliest effective release among unscheduled jobs) run an available
// job with the largest delivery time. Ties: smallest processing, then id.

inline bool ldt_prefers(const Job& a, const Job& b) {
    if (a.delivery != b.delivery) return a.delivery > b.delivery;
    if (a.processing != b.processing) return a.processing < b.processing;
    return a.id < b.id;
}

inline Schedule ldt(const Instance& inst, const ReleaseOverrides& over = {},
                    const std::vector<JobId>* subset = nullptr, Time not_before = 0) {
    std::vector<JobId> ids;
    if (subset) {
        ids = *subset;
    } else {
        ids.resize(inst.jobs.size());
        for (int i = 0; i < inst.size(); ++i) ids[static_cast<size_t>(i)] = i;
    }
    // Jobs ordered by effective release; an index heap would also do, but a
    // sort plus a scan keeps this O(n log n) and simple.
    std::sort(ids.begin(), ids.end(), [&](JobId a, JobId b) {
        Time ra = over.effective(inst, a), rb = over.effective(inst, b);
        if (ra != rb) return ra < rb;
        return a < b;
    });

    auto avail_order = [&](JobId a, JobId b) {
        if (a == b) return false;
        if (!ldt_prefers(inst.job(a), inst.job(b)) && !ldt_prefers(inst.job(b), inst.job(a)))
            return a < b;
        return ldt_prefers(inst.job(a), inst.job(b));
    };
    std::set<JobId, decltype(avail_order)> available(avail_order);

    Schedule out(inst);
    out.entries.reserve(ids.size());
    size_t next = 0;
    Time t = not_before;
    while (out.entries.size() < ids.size()) {
        if (available.empty()) {
            t = std::max(t, over.effective(inst, ids[next]));
        }
        while (next < ids.size() && over.effective(inst, ids[next]) <= t)
            available.insert(ids[next++]);
        JobId run = *available.begin();
        available.erase(available.begin());
        out.entries.push_back(Entry{run, t});
        t = checked_add(t, inst.job(run).processing);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schedule analysis.

/// Maximal gap-free run of entries, by index range [first, last] into the
/// schedule's entry list.
struct BlockRef {
    size_t first = 0;
    size_t last = 0;
};

/// A kernel: the longest consecutive sequence ending at an overflow job (one
/// attaining the schedule's maximum full completion) in which no job is less
/// urgent than the overflow job.
struct KernelReport {
    std::vector<Entry> jobs;        // consecutive, gap-free, ends at overflow
    JobId overflow = -1;
    Time first_start = 0;
    Time min_release = 0;           // min effective release over kernel jobs
    Time min_true_release = 0;      // same, ignoring overrides
    std::optional<JobId> delaying;  // emerging job right before the kernel
    Time delay = 0;                 // forced right-shift of the kernel
    std::vector<JobId> emerging;    // emerging jobs of the kernel's block
    std::vector<JobId> emerging_after;  // subset scheduled after the kernel
    size_t block_index = 0;

    bool contains(JobId id) const {
        for (const Entry& e : jobs)
            if (e.job == id) return true;
        return false;
    }
    std::vector<JobId> job_ids() const {
        std::vector<JobId> v;
        v.reserve(jobs.size());
        for (const Entry& e : jobs) v.push_back(e.job);
        return v;
    }
};

/// A conflict: a more urgent job released within the execution interval of a
/// scheduled job (right endpoint included).
struct Conflict {
    Time t = 0;          // start of the conflicting execution interval
    JobId scheduled = -1;
    JobId released = -1;  // earliest released more urgent job
};

struct ScheduleAnalysis {
    Time makespan = kNoTime;
    std::vector<BlockRef> blocks;
    std::vector<KernelReport> kernels;  // earliest first, one per block attaining the makespan
    std::vector<Conflict> conflicts;
};

inline ScheduleAnalysis analyze(const Instance& inst, const Schedule& s,
                                const ReleaseOverrides& over = {}) {
    ScheduleAnalysis an;
    if (s.entries.empty()) return an;
    an.makespan = s.makespan();

    // Blocks: split at idle time.
    size_t first = 0;
    for (size_t i = 1; i <= s.entries.size(); ++i) {
        if (i == s.entries.size() || s.entries[i].start > s.completion(s.entries[i - 1])) {
            an.blocks.push_back(BlockRef{first, i - 1});
            first = i;
        }
    }

    for (size_t bi = 0; bi < an.blocks.size(); ++bi) {
        const BlockRef& b = an.blocks[bi];
        // Overflow: the latest entry of the block attaining the makespan.
        size_t oi = b.first;
        bool attains = false;
        for (size_t i = b.first; i <= b.last; ++i) {
            if (s.full_completion(s.entries[i]) == an.makespan) {
                oi = i;
                attains = true;
            }
        }
        if (!attains) continue;

        KernelReport k;
        k.block_index = bi;
        k.overflow = s.entries[oi].job;
        const Time qo = inst.job(k.overflow).delivery;
        size_t ki = oi;
        while (ki > b.first && inst.job(s.entries[ki - 1].job).delivery >= qo) --ki;
        k.jobs.assign(s.entries.begin() + static_cast<std::ptrdiff_t>(ki),
                      s.entries.begin() + static_cast<std::ptrdiff_t>(oi) + 1);
        k.first_start = k.jobs.front().start;
        k.min_release = kInfTime;
        k.min_true_release = kInfTime;
        for (const Entry& e : k.jobs) {
            k.min_release = std::min(k.min_release, over.effective(inst, e.job));
            k.min_true_release = std::min(k.min_true_release, inst.job(e.job).release);
        }

        for (size_t i = b.first; i <= b.last; ++i) {
            JobId j = s.entries[i].job;
            if (inst.job(j).delivery < qo) {
                k.emerging.push_back(j);
                if (i > oi) k.emerging_after.push_back(j);
            }
        }
        if (ki > b.first && k.first_start > k.min_release) {
            // The walkback stopped here, so q < q_overflow holds for this job.
            k.delaying = s.entries[ki - 1].job;
        }
        k.delay = k.first_start - k.min_release;
        an.kernels.push_back(std::move(k));
    }

    // Conflicts: any job released strictly inside (start, completion] of a
    // scheduled, less urgent job.
    for (const Entry& e : s.entries) {
        const Time c = s.completion(e);
        const Time qe = inst.job(e.job).delivery;
        JobId best = -1;
        Time best_r = 0;
        for (const Job& j : inst.jobs) {
            if (j.id == e.job || j.delivery <= qe) continue;
            Time r = over.effective(j);
            if (r > e.start && r <= c && (best == -1 || r < best_r || (r == best_r && j.id < best))) {
                best = j.id;
                best_r = r;
            }
        }
        if (best != -1) an.conflicts.push_back(Conflict{e.start, e.job, best});
    }
    return an;
}

/// Kernels of list-scheduled (LDT-built) schedules are pushed by strictly
/// less than their delaying job's length: no kernel job was released when the
/// delaying job started. Returns the number of kernels violating the bound
/// (zero for any LDT schedule).
inline int delay_bound_violations(const Instance& inst, const Schedule& s,
                                  const ReleaseOverrides& over = {}) {
    int bad = 0;
    for (const KernelReport& k : analyze(inst, s, over).kernels)
        if (k.delaying && k.delay >= inst.job(*k.delaying).processing) ++bad;
    return bad;
}

// ---------------------------------------------------------------------------
// Activation: force a delaying (or any) emerging job of a kernel behind the
// kernel by raising its effective release to the largest release among kernel
// jobs; emerging jobs already scheduled after the kernel are raised the same
// way so they stay behind it. Returns the new overrides and the re-run LDT
// schedule.

inline std::pair<ReleaseOverrides, Schedule> activate(const Instance& inst,
                                                      const ReleaseOverrides& over,
                                                      const KernelReport& k, JobId l) {
    bool is_emerging = false;
    for (JobId e : k.emerging) is_emerging |= (e == l);
    if (!is_emerging)
        throw ContractError("activate: job " + std::to_string(l) +
                            " is not an emerging job of the kernel");

    Time floor = kNoTime;
    for (const Entry& e : k.jobs) floor = std::max(floor, over.effective(inst, e.job));

    ReleaseOverrides next = over;
    next.raise(inst, l, floor);
    for (JobId e : k.emerging_after) next.raise(inst, e, floor);
    return {next, ldt(inst, next)};
}

}  // namespace kernelsched
