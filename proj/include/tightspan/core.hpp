#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "tightspan/errors.hpp"
#include "tightspan/rational.hpp"

namespace tightspan {

using Time = std::int64_t;

/// Distinguished "cannot run here" entry. Kept as a sentinel rather than a
/// large finite time so that legal-machine counting stays honest.
inline constexpr Time kInfeasible = -1;
inline constexpr Time kMaxProcTime = 1'000'000;

/// Processing-time matrix for n jobs on m unrelated machines.
///
/// Entries are positive integers (time units) or kInfeasible. The instance
/// is "restricted" when every job's finite entries agree, i.e. each job has
/// one size and a set of machines that can run it.
class Instance {
  public:
    Instance() = default;
    Instance(int machines, int jobs)
        : m_(machines), n_(jobs), p_(static_cast<std::size_t>(machines) * jobs, kInfeasible) {
        if (machines < 1) throw Error("instance needs at least one machine");
        if (jobs < 0) throw Error("negative job count");
    }

    int machines() const { return m_; }
    int jobs() const { return n_; }

    Time& at(int job, int machine) { return p_[static_cast<std::size_t>(job) * m_ + machine]; }
    Time at(int job, int machine) const { return p_[static_cast<std::size_t>(job) * m_ + machine]; }

    bool finite(int job, int machine) const { return at(job, machine) != kInfeasible; }

    /// Throws Error if any entry is out of range or a job cannot run anywhere.
    void validate() const {
        for (int j = 0; j < n_; ++j) {
            bool any = false;
            for (int i = 0; i < m_; ++i) {
                Time t = at(j, i);
                if (t == kInfeasible) continue;
                if (t < 1 || t > kMaxProcTime)
                    throw Error("processing time out of range at job " + std::to_string(j + 1) +
                                ", machine " + std::to_string(i + 1));
                any = true;
            }
            if (!any) throw Error("job " + std::to_string(j + 1) + " has no feasible machine");
        }
    }

    bool restricted() const {
        for (int j = 0; j < n_; ++j) {
            Time common = kInfeasible;
            for (int i = 0; i < m_; ++i) {
                Time t = at(j, i);
                if (t == kInfeasible) continue;
                if (common == kInfeasible)
                    common = t;
                else if (t != common)
                    return false;
            }
        }
        return true;
    }

  private:
    int m_ = 1;
    int n_ = 0;
    std::vector<Time> p_;
};

/// Total map job -> machine.
struct Assignment {
    std::vector<int> to_machine;

    Assignment() = default;
    explicit Assignment(int jobs, int machine = 0) : to_machine(jobs, machine) {}
    Assignment(std::initializer_list<int> machines) : to_machine(machines) {}

    int size() const { return static_cast<int>(to_machine.size()); }
    int& operator[](int job) { return to_machine[job]; }
    int operator[](int job) const { return to_machine[job]; }

    friend bool operator==(const Assignment&, const Assignment&) = default;
};

inline bool assignment_valid(const Instance& inst, const Assignment& a) {
    if (a.size() != inst.jobs()) return false;
    for (int j = 0; j < inst.jobs(); ++j) {
        int i = a[j];
        if (i < 0 || i >= inst.machines() || !inst.finite(j, i)) return false;
    }
    return true;
}

/// Sum of processing times of the jobs placed on machine i.
inline Time load(const Instance& inst, const Assignment& a, int machine) {
    if (machine < 0 || machine >= inst.machines()) throw Error("machine index out of range");
    Time total = 0;
    for (int j = 0; j < inst.jobs(); ++j)
        if (a[j] == machine) total += inst.at(j, machine);
    return total;
}

inline std::vector<Time> machine_loads(const Instance& inst, const Assignment& a) {
    std::vector<Time> loads(inst.machines(), 0);
    for (int j = 0; j < inst.jobs(); ++j) loads[a[j]] += inst.at(j, a[j]);
    return loads;
}

inline Time makespan(const Instance& inst, const Assignment& a) {
    Time best = 0;
    for (Time l : machine_loads(inst, a)) best = std::max(best, l);
    return best;
}

/// Total load divided by the machine count, exact.
inline Rational average_load(const Instance& inst, const Assignment& a) {
    Time total = 0;
    for (int j = 0; j < inst.jobs(); ++j) total += inst.at(j, a[j]);
    return Rational(total, inst.machines());
}

/// Machine i can run job j within threshold T.
inline bool legal(const Instance& inst, int machine, int job, Time threshold) {
    Time t = inst.at(job, machine);
    return t != kInfeasible && t <= threshold;
}

inline int legal_machine_count(const Instance& inst, int job, Time threshold) {
    int count = 0;
    for (int i = 0; i < inst.machines(); ++i)
        if (legal(inst, i, job, threshold)) ++count;
    return count;
}

/// Minimum over jobs of the fraction of machines legal for the job.
/// Zero (some job cannot run anywhere under T) is a reportable result,
/// not an error. With no jobs the factor is 1 by convention.
inline Rational feasibility_factor(const Instance& inst, Time threshold) {
    int k_min = inst.machines();
    for (int j = 0; j < inst.jobs(); ++j) k_min = std::min(k_min, legal_machine_count(inst, j, threshold));
    return Rational(k_min, inst.machines());
}

/// Cheapest feasible processing time of a job, kInfeasible if none.
inline Time min_feasible_time(const Instance& inst, int job) {
    Time best = kInfeasible;
    for (int i = 0; i < inst.machines(); ++i) {
        Time t = inst.at(job, i);
        if (t == kInfeasible) continue;
        if (best == kInfeasible || t < best) best = t;
    }
    return best;
}

/// Size, feasible-set and load statistics of a restricted instance,
/// everything the combinatorial balancer needs, all exact.
struct RestrictedProfile {
    std::vector<Time> size;  // p_j per job
    Time p_max = 0;
    Time total = 0;  // sum of p_j
    int k_min = 0;   // smallest feasible-set size
    Rational epsilon;
    Rational avg_load;  // total / m, assignment-independent
    Rational delta;     // avg_load / epsilon == total / k_min
    Rational q;         // avg_load / p_max, zero when there are no jobs
};

inline RestrictedProfile restricted_profile(const Instance& inst) {
    if (!inst.restricted()) throw Error("instance is not restricted");
    RestrictedProfile prof;
    prof.size.resize(inst.jobs());
    prof.k_min = inst.machines();
    for (int j = 0; j < inst.jobs(); ++j) {
        int feasible = 0;
        Time pj = kInfeasible;
        for (int i = 0; i < inst.machines(); ++i)
            if (inst.finite(j, i)) {
                ++feasible;
                pj = inst.at(j, i);
            }
        if (feasible == 0) throw Error("job " + std::to_string(j + 1) + " has no feasible machine");
        prof.size[j] = pj;
        prof.total += pj;
        prof.p_max = std::max(prof.p_max, pj);
        prof.k_min = std::min(prof.k_min, feasible);
    }
    prof.epsilon = Rational(prof.k_min, inst.machines());
    prof.avg_load = Rational(prof.total, inst.machines());
    prof.delta = Rational(prof.total, prof.k_min);
    prof.q = prof.p_max > 0 ? Rational(prof.total, static_cast<Time>(inst.machines()) * prof.p_max)
                            : Rational(0);
    return prof;
}

}  // namespace tightspan
