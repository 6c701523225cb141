#pragma once

// Problem data model for single-machine scheduling with release and
// delivery times (minimising the maximum full completion time), plus
// schedule representation, validation, lower bounds and the short/long
// job split used by the approximation scheme.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kernelsched {

using Time = std::int64_t;
using JobId = int;

constexpr Time kNoTime = std::numeric_limits<Time>::min();
constexpr Time kInfTime = std::numeric_limits<Time>::max();

/// Raised when input text does not follow the instance format.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a caller violates an operation precondition.
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Raised when an internal invariant fails; signals a bug, not bad input.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline void internal_check(bool cond, const char* what) {
    if (!cond) throw InternalError(what);
}

inline Time checked_add(Time a, Time b) {
    Time out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("time arithmetic overflow");
    return out;
}

inline Time checked_mul(Time a, Time b) {
    Time out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("time arithmetic overflow");
    return out;
}

struct Job {
    JobId id = 0;
    Time release = 0;     // earliest start
    Time processing = 1;  // machine time, >= 1
    Time delivery = 0;    // post-machine time until full completion
};

struct Instance {
    std::vector<Job> jobs;

    int size() const { return static_cast<int>(jobs.size()); }
    const Job& job(JobId id) const { return jobs[static_cast<size_t>(id)]; }

    Time total_processing() const {
        Time p = 0;
        for (const Job& j : jobs) p = checked_add(p, j.processing);
        return p;
    }
};

/// One scheduled job occurrence.
struct Entry {
    JobId job = 0;
    Time start = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
};

/// A (possibly partial) non-preemptive schedule: entries sorted by start,
/// execution intervals disjoint. Machine completion is start + processing;
/// full completion adds the delivery time.
struct Schedule {
    const Instance* instance = nullptr;
    std::vector<Entry> entries;

    Schedule() = default;
    explicit Schedule(const Instance& inst) : instance(&inst) {}

    bool empty() const { return entries.empty(); }
    size_t size() const { return entries.size(); }

    bool is_complete() const {
        return instance && entries.size() == instance->jobs.size();
    }

    Time completion(const Entry& e) const {
        return checked_add(e.start, instance->job(e.job).processing);
    }
    Time full_completion(const Entry& e) const {
        return checked_add(completion(e), instance->job(e.job).delivery);
    }

    /// Maximum full completion time over scheduled jobs.
    Time makespan() const {
        Time m = kNoTime;
        for (const Entry& e : entries) m = std::max(m, full_completion(e));
        return m;
    }

    std::optional<Time> start_of(JobId id) const {
        for (const Entry& e : entries)
            if (e.job == id) return e.start;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------------------
// Instance parsing and serialization.
//
// Format: first line n; then n lines "r p q" (decimal integers, single
// spaces). The serializer emits exactly this format with a trailing newline.

inline Instance parse_instance(std::istream& in) {
    auto fail = [](int line, const std::string& msg) {
        throw ParseError("line " + std::to_string(line) + ": " + msg);
    };

    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError("line 1: missing job count");

    auto parse_int = [&](const std::string& tok, int at) -> Time {
        if (tok.empty()) fail(at, "empty field");
        size_t pos = 0;
        Time v = 0;
        try {
            v = std::stoll(tok, &pos);
        } catch (const std::exception&) {
            fail(at, "non-integer field '" + tok + "'");
        }
        if (pos != tok.size()) fail(at, "non-integer field '" + tok + "'");
        return v;
    };

    std::istringstream head(line);
    std::string tok;
    if (!(head >> tok)) fail(lineno, "missing job count");
    Time n_raw = parse_int(tok, lineno);
    if (head >> tok) fail(lineno, "trailing content after job count");
    if (n_raw < 1) fail(lineno, "job count must be at least 1");
    if (n_raw > 10'000'000) fail(lineno, "job count too large");
    int n = static_cast<int>(n_raw);

    Instance inst;
    inst.jobs.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!next_line()) fail(lineno + 1, "expected " + std::to_string(n) + " job lines, got " + std::to_string(i));
        std::istringstream ls(line);
        Time v[3];
        for (int f = 0; f < 3; ++f) {
            if (!(ls >> tok)) fail(lineno, "malformed line, expected 'r p q'");
            v[f] = parse_int(tok, lineno);
        }
        if (ls >> tok) fail(lineno, "trailing content after 'r p q'");
        if (v[0] < 0) fail(lineno, "negative release");
        if (v[1] < 1) fail(lineno, "processing must be at least 1");
        if (v[2] < 0) fail(lineno, "negative delivery");
        inst.jobs.push_back(Job{i, v[0], v[1], v[2]});
    }
    if (next_line()) {
        std::istringstream ls(line);
        if (ls >> tok) fail(lineno, "unexpected extra line");
    }
    // Reject instances whose derived sums would overflow 64-bit time.
    inst.total_processing();
    for (const Job& j : inst.jobs) checked_add(checked_add(j.release, j.processing), j.delivery);
    return inst;
}

inline Instance parse_instance(const std::string& text) {
    std::istringstream in(text);
    return parse_instance(in);
}

inline std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << inst.jobs.size() << '\n';
    for (const Job& j : inst.jobs)
        out << j.release << ' ' << j.processing << ' ' << j.delivery << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Schedule validation.

struct Violation {
    enum Kind { UnknownJob, DuplicateJob, StartBeforeRelease, Overlap, Unsorted };
    Kind kind;
    JobId a = -1;
    JobId b = -1;
    std::string text;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_schedule(const Schedule& s) {
    ValidationReport rep;
    const Instance& inst = *s.instance;
    std::vector<int> seen(inst.jobs.size(), 0);
    auto add = [&](Violation v) { rep.violations.push_back(std::move(v)); };

    for (const Entry& e : s.entries) {
        if (e.job < 0 || e.job >= inst.size()) {
            add({Violation::UnknownJob, e.job, -1,
                 "unknown job id " + std::to_string(e.job)});
            continue;
        }
        if (++seen[static_cast<size_t>(e.job)] > 1)
            add({Violation::DuplicateJob, e.job, -1,
                 "job " + std::to_string(e.job) + " scheduled more than once"});
        if (e.start < inst.job(e.job).release)
            add({Violation::StartBeforeRelease, e.job, -1,
                 "job " + std::to_string(e.job) + " starts at " + std::to_string(e.start) +
                     " before release " + std::to_string(inst.job(e.job).release)});
    }
    for (size_t i = 0; i + 1 < s.entries.size(); ++i) {
        const Entry& a = s.entries[i];
        const Entry& b = s.entries[i + 1];
        if (b.start < a.start)
            add({Violation::Unsorted, a.job, b.job, "entries not sorted by start"});
        if (a.job >= 0 && a.job < inst.size() && s.completion(a) > b.start)
            add({Violation::Overlap, a.job, b.job,
                 "jobs " + std::to_string(a.job) + " and " + std::to_string(b.job) +
                     " overlap at " + std::to_string(b.start)});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lower bound and the short/long job split.

/// max(total processing, max_j r_j + p_j + q_j); never exceeds the optimum.
inline Time lower_bound(const Instance& inst) {
    Time lb = inst.total_processing();
    for (const Job& j : inst.jobs)
        lb = std::max(lb, checked_add(checked_add(j.release, j.processing), j.delivery));
    return lb;
}

/// Short/long tagging against the rational threshold LB/k. The comparison
/// p * k <= LB is exact; a job on the boundary classifies as short.
struct SizeClass {
    Time lb = 0;
    Time k = 2;
    std::vector<bool> is_long;

    int long_count() const {
        return static_cast<int>(std::count(is_long.begin(), is_long.end(), true));
    }
    bool long_job(JobId id) const { return is_long[static_cast<size_t>(id)]; }
    /// True when a duration exceeds LB/k.
    bool duration_is_long(Time p) const { return checked_mul(p, k) > lb; }
};

inline SizeClass split_short_long(const Instance& inst, Time k) {
    if (k < 2) throw ContractError("split_short_long requires k >= 2");
    SizeClass sc;
    sc.lb = lower_bound(inst);
    sc.k = k;
    sc.is_long.resize(inst.jobs.size());
    for (const Job& j : inst.jobs)
        sc.is_long[static_cast<size_t>(j.id)] = sc.duration_is_long(j.processing);
    // Fewer than k jobs can be long: k or more would exceed LB >= P.
    internal_check(sc.long_count() < k, "long job count must stay below k");
    return sc;
}

}  // namespace kernelsched
