#pragma once

// Pre-processing: detect the initial kernels by repeated activation, label
// every job with one of the six roles, and build the backbone schedule of
// the non-critical jobs (uniform components anchored at their releases plus
// the free jobs at their original positions). The iterative step extracts
// kernels that surface later and re-labels their jobs.

#include <vector>

#include "kernelsched/decomposition.hpp"
#include "kernelsched/ldt.hpp"

namespace kernelsched {

enum class JobTag : std::uint8_t {
    Critical,      // emerging job of a detected kernel; ordered by the search
    Displaced,     // removed from a kernel during decomposition
    LateEmerging,  // former free job turned emerging for a late kernel
    Atomic,        // member of the component realizing the kernel's bound
    Satellite,     // member of another uniform component
    Free,          // everything else
};

inline bool is_critical(JobTag t) {
    return t == JobTag::Critical || t == JobTag::Displaced || t == JobTag::LateEmerging;
}

inline const char* tag_name(JobTag t) {
    switch (t) {
        case JobTag::Critical: return "critical";
        case JobTag::Displaced: return "displaced";
        case JobTag::LateEmerging: return "late-emerging";
        case JobTag::Atomic: return "atomic";
        case JobTag::Satellite: return "satellite";
        case JobTag::Free: return "free";
    }
    return "?";
}

struct KernelRec {
    int id = -1;
    KernelReport detected;  // as reported when the kernel surfaced
    Decomposition decomp;

    Time anchor() const {
        return decomp.components.empty() ? detected.first_start
                                         : decomp.components.front().start();
    }
};

/// Outcome of one configuration update; feeds offspring generation.
struct RelabelInfo {
    bool changed = false;
    int kernel_id = -1;
    std::vector<JobId> new_displaced;
    std::vector<JobId> new_late;
    Time trigger_first_start = 0;  // kernel position in the triggering schedule
};

struct Configuration {
    const Instance* instance = nullptr;
    Schedule sigma0;                    // initial LDT schedule; free jobs keep its intervals
    ReleaseOverrides chain_overrides;   // accumulated during kernel detection
    std::vector<JobTag> tag;
    std::vector<int> kernel_of;         // owning kernel for non-Critical, non-Free tags
    std::vector<std::vector<int>> critical_assoc;  // kernels a Critical job emerges for
    std::vector<KernelRec> kernels;     // time-ordered by anchor
    Schedule backbone;                  // all non-critical jobs, no critical ones
    std::vector<Time> backbone_start;   // canonical start per job (kNoTime for critical)
    int generation = 0;
    int iterative_calls = 0;

    int size() const { return instance->size(); }

    int nu() const {
        int c = 0;
        for (JobTag t : tag) c += is_critical(t);
        return c;
    }
    std::vector<JobId> critical_ids() const {
        std::vector<JobId> v;
        for (JobId j = 0; j < size(); ++j)
            if (is_critical(tag[static_cast<size_t>(j)])) v.push_back(j);
        return v;
    }
    const KernelRec* kernel(int id) const {
        for (const KernelRec& k : kernels)
            if (k.id == id) return &k;
        return nullptr;
    }
    /// Position of a kernel in time order; consistency constraints compare these.
    int kernel_rank(int id) const {
        for (size_t i = 0; i < kernels.size(); ++i)
            if (kernels[i].id == id) return static_cast<int>(i);
        return -1;
    }
    bool job_in_components(JobId j) const {
        JobTag t = tag[static_cast<size_t>(j)];
        return t == JobTag::Atomic || t == JobTag::Satellite;
    }
};

namespace detail {

/// Decompose an ordered run of jobs and register it as a new kernel record.
/// `emerging_pool` lists the block-emerging jobs observed around the run in
/// the schedule that surfaced it; free ones among them become late-emerging.
inline RelabelInfo adopt_kernel(Configuration& cfg, const std::vector<Entry>& run,
                                const std::vector<JobId>& emerging_pool, JobTag emerging_tag,
                                Time trigger_first_start) {
    const Instance& inst = *cfg.instance;
    internal_check(!run.empty(), "kernel adoption needs at least one job");

    KernelReport rep;
    rep.jobs = run;
    rep.overflow = run.back().job;
    rep.first_start = run.front().start;
    rep.min_release = kInfTime;
    for (const Entry& e : run)
        rep.min_release = std::min(rep.min_release, inst.job(e.job).release);

    RelabelInfo info;
    info.changed = true;
    info.trigger_first_start = trigger_first_start;

    KernelRec rec;
    rec.id = static_cast<int>(cfg.kernels.size());
    info.kernel_id = rec.id;
    rec.detected = rep;
    rec.decomp = decompose(inst, rep);

    for (JobId j : rec.decomp.omitted) {
        cfg.tag[static_cast<size_t>(j)] = JobTag::Displaced;
        cfg.kernel_of[static_cast<size_t>(j)] = rec.id;
        info.new_displaced.push_back(j);
    }
    for (size_t ci = 0; ci < rec.decomp.components.size(); ++ci) {
        JobTag t = ci == rec.decomp.atomic_kernel ? JobTag::Atomic : JobTag::Satellite;
        for (const Entry& e : rec.decomp.components[ci].jobs) {
            cfg.tag[static_cast<size_t>(e.job)] = t;
            cfg.kernel_of[static_cast<size_t>(e.job)] = rec.id;
        }
    }
    for (JobId e : emerging_pool) {
        JobTag& t = cfg.tag[static_cast<size_t>(e)];
        if (t == JobTag::Free) {
            t = emerging_tag;
            if (emerging_tag == JobTag::LateEmerging) {
                cfg.kernel_of[static_cast<size_t>(e)] = rec.id;
                info.new_late.push_back(e);
            } else {
                cfg.critical_assoc[static_cast<size_t>(e)].push_back(rec.id);
            }
        } else if (t == JobTag::Critical) {
            cfg.critical_assoc[static_cast<size_t>(e)].push_back(rec.id);
        }
    }

    cfg.kernels.push_back(std::move(rec));
    std::sort(cfg.kernels.begin(), cfg.kernels.end(),
              [](const KernelRec& a, const KernelRec& b) { return a.anchor() < b.anchor(); });
    ++cfg.generation;
    return info;
}

/// Earliest kernel of `an` whose overflow is still a free job, if any.
inline const KernelReport* earliest_free_overflow_kernel(const Configuration& cfg,
                                                         const ScheduleAnalysis& an) {
    for (const KernelReport& k : an.kernels)
        if (cfg.tag[static_cast<size_t>(k.overflow)] == JobTag::Free) return &k;
    return nullptr;
}

/// Trailing run of free jobs ending at the kernel's overflow.
inline std::vector<Entry> trailing_free_run(const Configuration& cfg, const KernelReport& k) {
    size_t lo = k.jobs.size();
    while (lo > 0 && cfg.tag[static_cast<size_t>(k.jobs[lo - 1].job)] == JobTag::Free) --lo;
    return {k.jobs.begin() + static_cast<std::ptrdiff_t>(lo), k.jobs.end()};
}

}  // namespace detail

/// Detect a newly surfaced kernel in `s` (one whose overflow is a free job),
/// decompose it and re-label its jobs. Returns changed=false when no new
/// kernel exists. Bounded by n calls over a whole solve.
inline RelabelInfo iterative_step(Configuration& cfg, const Schedule& s,
                                  const ReleaseOverrides& over = {}) {
    const Instance& inst = *cfg.instance;
    ScheduleAnalysis an = analyze(inst, s, over);
    const KernelReport* k = detail::earliest_free_overflow_kernel(cfg, an);
    if (!k) return {};

    internal_check(++cfg.iterative_calls <= inst.size(),
                   "iterative step invoked more than n times");
    std::vector<Entry> run = detail::trailing_free_run(cfg, *k);
    std::vector<JobId> pool = k->emerging;
    return detail::adopt_kernel(cfg, run, pool, JobTag::LateEmerging, k->first_start);
}

/// Assemble the backbone: uniform components rigid at their anchors, free
/// jobs at their initial-schedule intervals, then run the iterative step to
/// fixpoint. A free job whose slot collides with a component is promoted to
/// a critical job (the component claimed its space).
inline void build_sigma234(Configuration& cfg) {
    const Instance& inst = *cfg.instance;
    for (int round = 0;; ++round) {
        internal_check(round <= 2 * inst.size() + 2, "backbone fixpoint ran away");

        std::vector<std::pair<Time, Time>> spans;  // component spans, sorted
        std::vector<std::pair<Time, int>> span_owner;
        Schedule bb(inst);
        for (const KernelRec& k : cfg.kernels) {
            for (const Component& c : k.decomp.components) {
                Time end = c.jobs.back().start + inst.job(c.jobs.back().job).processing;
                spans.emplace_back(c.start(), end);
                span_owner.emplace_back(c.start(), k.id);
                for (const Entry& e : c.jobs) bb.entries.push_back(e);
            }
        }
        std::sort(spans.begin(), spans.end());
        std::sort(span_owner.begin(), span_owner.end());
        for (size_t i = 0; i + 1 < spans.size(); ++i)
            internal_check(spans[i].second <= spans[i + 1].first,
                           "uniform component spans overlap");

        JobId collided = -1;
        int collided_owner = -1;
        for (const Entry& e : cfg.sigma0.entries) {
            if (cfg.tag[static_cast<size_t>(e.job)] != JobTag::Free) continue;
            Time end = e.start + inst.job(e.job).processing;
            bool clash = false;
            for (size_t i = 0; i < spans.size() && spans[i].first < end; ++i) {
                if (spans[i].second > e.start) {
                    clash = true;
                    collided_owner = span_owner[i].second;
                    break;
                }
            }
            if (clash) {
                collided = e.job;
                break;
            }
            bb.entries.push_back(e);
        }
        if (collided != -1) {
            // The component structure claimed this job's slot; it can only be
            // placed around the kernels, so it joins the critical jobs.
            cfg.tag[static_cast<size_t>(collided)] = JobTag::Critical;
            cfg.critical_assoc[static_cast<size_t>(collided)].push_back(collided_owner);
            ++cfg.generation;
            continue;
        }

        std::sort(bb.entries.begin(), bb.entries.end(),
                  [](const Entry& a, const Entry& b) { return a.start < b.start; });
        internal_check(validate_schedule(bb).ok(), "backbone schedule is infeasible");

        ScheduleAnalysis an = analyze(inst, bb);
        if (const KernelReport* k = detail::earliest_free_overflow_kernel(cfg, an)) {
            internal_check(++cfg.iterative_calls <= inst.size(),
                           "iterative step invoked more than n times");
            detail::adopt_kernel(cfg, detail::trailing_free_run(cfg, *k), k->emerging,
                                 JobTag::LateEmerging, k->first_start);
            continue;
        }
        // A kernel delayed by a free job also hides structure: the free job is
        // emerging for the pushed components, so promote it.
        JobId promote = -1;
        int owner = -1;
        for (const KernelReport& k : an.kernels) {
            if (k.delaying && cfg.tag[static_cast<size_t>(*k.delaying)] == JobTag::Free) {
                promote = *k.delaying;
                owner = cfg.kernel_of[static_cast<size_t>(k.overflow)];
                break;
            }
        }
        if (promote != -1) {
            cfg.tag[static_cast<size_t>(promote)] = JobTag::LateEmerging;
            cfg.kernel_of[static_cast<size_t>(promote)] = owner;
            ++cfg.generation;
            continue;
        }
        for (const KernelReport& k : an.kernels)
            internal_check(!k.delaying.has_value(),
                           "backbone kernel still has a delaying emerging job");

        cfg.backbone = std::move(bb);
        cfg.backbone_start.assign(inst.jobs.size(), kNoTime);
        for (const Entry& e : cfg.backbone.entries)
            cfg.backbone_start[static_cast<size_t>(e.job)] = e.start;
        return;
    }
}

/// Stage-0 detection chain: repeatedly take the earliest kernel of the
/// current schedule, decompose it, and activate its delaying job; halt when
/// the kernel has no delaying job or shares jobs with an earlier kernel.
inline Configuration initial_kernels(const Instance& inst) {
    Configuration cfg;
    cfg.instance = &inst;
    cfg.sigma0 = ldt(inst);
    cfg.tag.assign(inst.jobs.size(), JobTag::Free);
    cfg.kernel_of.assign(inst.jobs.size(), -1);
    cfg.critical_assoc.assign(inst.jobs.size(), {});

    ReleaseOverrides over;
    Schedule cur = cfg.sigma0;
    std::vector<bool> seen(inst.jobs.size(), false);
    for (int h = 0; h <= inst.size(); ++h) {
        ScheduleAnalysis an = analyze(inst, cur, over);
        if (an.kernels.empty()) break;
        const KernelReport& k = an.kernels.front();
        if (!k.delaying.has_value()) break;
        bool shares = false;
        for (const Entry& e : k.jobs) shares |= seen[static_cast<size_t>(e.job)];
        if (shares) break;

        std::vector<Entry> core;
        for (const Entry& e : k.jobs)
            if (!is_critical(cfg.tag[static_cast<size_t>(e.job)])) core.push_back(e);
        if (core.empty()) break;  // only previously activated jobs left; nothing to extract
        for (const Entry& e : k.jobs) seen[static_cast<size_t>(e.job)] = true;
        detail::adopt_kernel(cfg, core, k.emerging, JobTag::Critical, k.first_start);

        auto [next_over, next] = activate(inst, over, k, *k.delaying);
        over = std::move(next_over);
        cur = std::move(next);
    }
    cfg.chain_overrides = over;
    return cfg;
}

/// Full pre-processing: initial kernels plus the backbone fixpoint.
inline Configuration preprocess(const Instance& inst) {
    Configuration cfg = initial_kernels(inst);
    build_sigma234(cfg);
    return cfg;
}

}  // namespace kernelsched
