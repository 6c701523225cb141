#pragma once

// Recursive decomposition of a kernel into uniform components. Replaying the
// kernel's jobs alone under LDT may move some job ahead of a more urgent one
// (an "anticipated" job); components containing such jobs hide internal
// delaying structure and are split further by removing the delaying job of
// their own kernel and replaying the rest. The surviving uniform components
// are anchored at their own releases, so the largest full completion among
// them is a lower bound on the optimum.

#include <vector>

#include "kernelsched/ldt.hpp"

namespace kernelsched {

/// One uniform component: gap-free entries starting at their min effective
/// release, in LDT order.
struct Component {
    std::vector<Entry> jobs;

    Time start() const { return jobs.front().start; }
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

struct Decomposition {
    std::vector<Component> components;  // time-ordered, pairwise disjoint
    std::vector<JobId> omitted;         // delaying jobs removed, in removal order
    size_t atomic_kernel = 0;           // component holding the max full completion
    Time lb_value = kNoTime;            // that maximum; a lower bound on the optimum

    std::vector<JobId> component_job_ids() const {
        std::vector<JobId> v;
        for (const Component& c : components)
            for (const Entry& e : c.jobs) v.push_back(e.job);
        return v;
    }
};

namespace detail {

/// Replay `jobs` (given in their current scheduled order) alone under LDT,
/// split at gaps, recurse on parts that contain anticipated jobs.
inline void decompose_jobset(const Instance& inst, const ReleaseOverrides& over,
                             const std::vector<JobId>& reference_order,
                             std::vector<Component>& out_components,
                             std::vector<JobId>& out_omitted, int depth) {
    internal_check(depth <= inst.size() + 1, "kernel decomposition recursion ran away");
    if (reference_order.empty()) return;

    Schedule replay = ldt(inst, over, &reference_order);

    std::vector<size_t> ref_pos(inst.jobs.size(), 0);
    for (size_t i = 0; i < reference_order.size(); ++i)
        ref_pos[static_cast<size_t>(reference_order[i])] = i;

    // Anticipated: moved ahead of a more urgent job relative to the reference
    // order.
    auto anticipated = [&](size_t replay_idx) {
        JobId i = replay.entries[replay_idx].job;
        for (size_t jj = replay_idx + 1; jj < replay.entries.size(); ++jj) {
            JobId j = replay.entries[jj].job;
            if (inst.job(j).delivery > inst.job(i).delivery &&
                ref_pos[static_cast<size_t>(j)] < ref_pos[static_cast<size_t>(i)])
                return true;
        }
        return false;
    };

    std::vector<bool> is_anticipated(replay.entries.size());
    bool any = false;
    for (size_t i = 0; i < replay.entries.size(); ++i) {
        is_anticipated[i] = anticipated(i);
        any |= is_anticipated[i];
    }

    // Split the replay at gaps.
    std::vector<std::pair<size_t, size_t>> parts;
    size_t first = 0;
    for (size_t i = 1; i <= replay.entries.size(); ++i) {
        if (i == replay.entries.size() ||
            replay.entries[i].start > replay.completion(replay.entries[i - 1])) {
            parts.emplace_back(first, i - 1);
            first = i;
        }
    }

    for (auto [lo, hi] : parts) {
        bool mixed = false;
        if (any)
            for (size_t i = lo; i <= hi; ++i) mixed |= is_anticipated[i];
        auto emit_uniform = [&] {
            Component c;
            c.jobs.assign(replay.entries.begin() + static_cast<std::ptrdiff_t>(lo),
                          replay.entries.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
            out_components.push_back(std::move(c));
        };
        if (!mixed) {
            emit_uniform();
            continue;
        }
        // Mixed part: drop the delaying job of its own kernel and recurse.
        Schedule part(inst);
        part.entries.assign(replay.entries.begin() + static_cast<std::ptrdiff_t>(lo),
                            replay.entries.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
        ScheduleAnalysis pan = analyze(inst, part, over);
        internal_check(!pan.kernels.empty(), "mixed component without a kernel");
        const KernelReport& pk = pan.kernels.front();
        if (!pk.delaying.has_value()) {
            // The part's kernel already starts at its min release, so there is
            // no delay left to extract; the part is settled as it stands.
            emit_uniform();
            continue;
        }
        JobId drop = *pk.delaying;
        out_omitted.push_back(drop);
        std::vector<JobId> rest;
        rest.reserve(part.entries.size() - 1);
        for (const Entry& e : part.entries)
            if (e.job != drop) rest.push_back(e.job);
        decompose_jobset(inst, over, rest, out_components, out_omitted, depth + 1);
    }
}

}  // namespace detail

inline Decomposition decompose(const Instance& inst, const KernelReport& k,
                               const ReleaseOverrides& over = {}) {
    std::vector<JobId> order = k.job_ids();
    return [&] {
        Decomposition d;
        detail::decompose_jobset(inst, over, order, d.components, d.omitted, 0);
        std::sort(d.components.begin(), d.components.end(),
                  [](const Component& a, const Component& b) { return a.start() < b.start(); });
        for (size_t ci = 0; ci + 1 < d.components.size(); ++ci) {
            const Component& a = d.components[ci];
            const Entry& last = a.jobs.back();
            internal_check(last.start + inst.job(last.job).processing <=
                               d.components[ci + 1].start(),
                           "decomposition components overlap in time");
        }
        for (size_t ci = 0; ci < d.components.size(); ++ci) {
            for (const Entry& e : d.components[ci].jobs) {
                Time fc = e.start + inst.job(e.job).processing + inst.job(e.job).delivery;
                if (fc >= d.lb_value) {  // ties resolve to the latest component
                    d.lb_value = fc;
                    d.atomic_kernel = ci;
                }
            }
        }
        return d;
    }();
}

}  // namespace kernelsched
