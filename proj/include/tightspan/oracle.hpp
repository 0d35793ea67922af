#pragma once

#include <algorithm>
#include <vector>

#include "tightspan/core.hpp"

namespace tightspan {

struct OracleLimits {
    int max_jobs = 12;
    int max_machines = 4;
};

struct OracleResult {
    Time opt_makespan = 0;
    Assignment witness;
    long nodes = 0;
};

namespace detail {

struct OracleSearch {
    const Instance& inst;
    std::vector<int> order;           // jobs, non-increasing min feasible time
    std::vector<Time> suffix_min_sum; // sum of min feasible times of order[t..)
    std::vector<Time> suffix_max_min; // max of min feasible times of order[t..)
    std::vector<Time> loads;
    Assignment current;
    Assignment best_witness;
    Time best = 0;
    long nodes = 0;

    explicit OracleSearch(const Instance& instance) : inst(instance), current(instance.jobs()) {
        int n = inst.jobs();
        order.resize(n);
        std::vector<Time> min_time(n);
        for (int j = 0; j < n; ++j) {
            min_time[j] = min_feasible_time(inst, j);
            if (min_time[j] == kInfeasible) throw Error("job " + std::to_string(j + 1) + " has no feasible machine");
            order[j] = j;
        }
        // Big jobs first: stronger pruning near the root.
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (min_time[a] != min_time[b]) return min_time[a] > min_time[b];
            return a < b;
        });
        suffix_min_sum.assign(n + 1, 0);
        suffix_max_min.assign(n + 1, 0);
        for (int t = n - 1; t >= 0; --t) {
            suffix_min_sum[t] = suffix_min_sum[t + 1] + min_time[order[t]];
            suffix_max_min[t] = std::max(suffix_max_min[t + 1], min_time[order[t]]);
        }
        loads.assign(inst.machines(), 0);
    }

    void run() {
        best = suffix_min_sum[0] + 1;  // any full assignment beats this
        descend(0, 0, 0);
    }

    void descend(int depth, Time current_max, Time current_total) {
        ++nodes;
        int m = inst.machines();
        if (depth == inst.jobs()) {
            if (current_max < best) {
                best = current_max;
                best_witness = current;
            }
            return;
        }
        Time avg_floor = (current_total + suffix_min_sum[depth] + m - 1) / m;
        Time lower = std::max({current_max, suffix_max_min[depth], avg_floor});
        if (lower >= best) return;
        int j = order[depth];
        for (int i = 0; i < m; ++i) {
            Time t = inst.at(j, i);
            if (t == kInfeasible) continue;
            Time new_load = loads[i] + t;
            if (new_load >= best) continue;
            loads[i] = new_load;
            current[j] = i;
            descend(depth + 1, std::max(current_max, new_load), current_total + t);
            loads[i] -= t;
        }
    }
};

}  // namespace detail

/// Exact minimum makespan by pruned exhaustive search. Desk-scale only;
/// throws LimitExceeded beyond the configured size.
inline OracleResult optimal_makespan(const Instance& inst, OracleLimits limits = {}) {
    if (inst.jobs() > limits.max_jobs || inst.machines() > limits.max_machines)
        throw LimitExceeded("instance exceeds oracle limits (" + std::to_string(inst.jobs()) + " jobs, " +
                            std::to_string(inst.machines()) + " machines)");
    detail::OracleSearch search(inst);
    search.run();
    return OracleResult{search.best, search.best_witness, search.nodes};
}

namespace detail {

inline bool schedule_search(const Instance& inst, const std::vector<int>& order,
                            const std::vector<Time>& suffix_min, std::vector<Time>& loads, int depth,
                            Time total, Time threshold, Time budget, long& nodes) {
    ++nodes;
    if (total + suffix_min[depth] > budget) return false;
    if (depth == static_cast<int>(order.size())) return true;
    int j = order[depth];
    for (int i = 0; i < inst.machines(); ++i) {
        Time t = inst.at(j, i);
        if (t == kInfeasible || t > threshold) continue;
        if (loads[i] + t > threshold) continue;
        loads[i] += t;
        bool ok = schedule_search(inst, order, suffix_min, loads, depth + 1, total + t, threshold, budget, nodes);
        loads[i] -= t;
        if (ok) return true;
    }
    return false;
}

}  // namespace detail

/// True iff some assignment has makespan <= T and total load <= m * avg_budget.
/// Loads are integers, so the budget comparison uses floor(m * avg_budget).
inline bool schedule_exists(const Instance& inst, Time threshold, const Rational& avg_budget,
                            OracleLimits limits = {}, long* nodes_out = nullptr) {
    if (inst.jobs() > limits.max_jobs || inst.machines() > limits.max_machines)
        throw LimitExceeded("instance exceeds oracle limits");
    Time budget = (Rational(inst.machines()) * avg_budget).floor();
    int n = inst.jobs();
    std::vector<Time> min_legal(n);
    for (int j = 0; j < n; ++j) {
        Time best = kInfeasible;
        for (int i = 0; i < inst.machines(); ++i) {
            Time t = inst.at(j, i);
            if (t == kInfeasible || t > threshold) continue;
            if (best == kInfeasible || t < best) best = t;
        }
        if (best == kInfeasible) return false;  // job cannot run under T at all
        min_legal[j] = best;
    }
    std::vector<int> order(n);
    for (int j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (min_legal[a] != min_legal[b]) return min_legal[a] > min_legal[b];
        return a < b;
    });
    std::vector<Time> suffix(n + 1, 0);
    for (int t = n - 1; t >= 0; --t) suffix[t] = suffix[t + 1] + min_legal[order[t]];
    std::vector<Time> loads(inst.machines(), 0);
    long nodes = 0;
    bool found = detail::schedule_search(inst, order, suffix, loads, 0, 0, threshold, budget, nodes);
    if (nodes_out) *nodes_out = nodes;
    return found;
}

}  // namespace tightspan
