#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "tightspan/balance.hpp"
#include "tightspan/core.hpp"

namespace tightspan {

/// Machines split by load against an underload mark delta and an overload
/// mark w + delta: m_minus (load <= delta), m_plus (load > w + delta), and
/// m_zero in between. Exact comparisons.
struct RestrictedPartition {
    Time w = 0;
    Rational delta;
    std::vector<int> m_plus;
    std::vector<int> m_zero;
    std::vector<int> m_minus;
};

inline RestrictedPartition partition_machines(const Instance& inst, const Assignment& a, Time w,
                                              const Rational& delta) {
    RestrictedPartition part;
    part.w = w;
    part.delta = delta;
    Rational over_cut = Rational(w) + delta;
    std::vector<Time> loads = machine_loads(inst, a);
    for (int i = 0; i < inst.machines(); ++i) {
        if (Rational(loads[i]) > over_cut)
            part.m_plus.push_back(i);
        else if (Rational(loads[i]) <= delta)
            part.m_minus.push_back(i);
        else
            part.m_zero.push_back(i);
    }
    return part;
}

/// Directed bipartite view of an assignment: machine -> each job it holds,
/// job -> every other machine where the job fits within w.
struct AssignmentGraph {
    Time w = 0;
    std::vector<std::vector<int>> jobs_on;   // machine -> assigned jobs, ascending
    std::vector<std::vector<int>> moves_of;  // job -> other feasible machines, ascending
};

inline AssignmentGraph build_assignment_graph(const Instance& inst, const Assignment& a, Time w) {
    AssignmentGraph g;
    g.w = w;
    g.jobs_on.resize(inst.machines());
    g.moves_of.resize(inst.jobs());
    for (int j = 0; j < inst.jobs(); ++j) {
        g.jobs_on[a[j]].push_back(j);
        for (int i = 0; i < inst.machines(); ++i)
            if (i != a[j] && inst.finite(j, i) && inst.at(j, i) <= w) g.moves_of[j].push_back(i);
    }
    return g;
}

/// Alternating machine-job path: machines[0] -> jobs[0] -> machines[1] ->
/// ... -> jobs[t-1] -> machines[t].
struct TransferPath {
    std::vector<int> machines;
    std::vector<int> jobs;
};

/// Shortest directed path from any source to any sink machine, by BFS with
/// a fixed scan order. Hops go machine -> one of its jobs -> another
/// machine that can take the job.
inline std::optional<TransferPath> path_exists(const AssignmentGraph& g, const std::vector<int>& sources,
                                               const std::vector<int>& sinks) {
    int m = static_cast<int>(g.jobs_on.size());
    int n = static_cast<int>(g.moves_of.size());
    std::vector<char> is_sink(m, 0);
    for (int i : sinks) is_sink[i] = 1;
    std::vector<char> seen_machine(m, 0), seen_job(n, 0);
    std::vector<std::pair<int, int>> via(m, {-1, -1});  // machine -> (previous machine, job moved)
    std::deque<int> queue;
    for (int i : sources) {
        if (seen_machine[i]) continue;
        seen_machine[i] = 1;
        if (is_sink[i]) continue;  // sources and sinks are disjoint in practice
        queue.push_back(i);
    }
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int j : g.jobs_on[u]) {
            if (seen_job[j]) continue;
            seen_job[j] = 1;
            for (int v : g.moves_of[j]) {
                if (seen_machine[v]) continue;
                seen_machine[v] = 1;
                via[v] = {u, j};
                if (is_sink[v]) {
                    TransferPath path;
                    for (int cur = v; cur >= 0;) {
                        path.machines.push_back(cur);
                        auto [prev, job] = via[cur];
                        if (prev >= 0) path.jobs.push_back(job);
                        cur = prev;
                    }
                    std::reverse(path.machines.begin(), path.machines.end());
                    std::reverse(path.jobs.begin(), path.jobs.end());
                    return path;
                }
                queue.push_back(v);
            }
        }
    }
    return std::nullopt;
}

/// Reorients the path: each job on it moves one machine forward. The
/// source sheds its first job, the sink gains the last one, intermediate
/// machines swap one job for another.
inline Assignment push_along_path(const Instance& inst, const Assignment& a, const TransferPath& path,
                                  Time w) {
    if (path.machines.size() != path.jobs.size() + 1 || path.jobs.empty())
        throw IllegalPush("malformed path");
    Assignment result = a;
    for (std::size_t k = 0; k < path.jobs.size(); ++k) {
        int job = path.jobs[k];
        int from = path.machines[k];
        int to = path.machines[k + 1];
        if (result[job] != from) throw IllegalPush("job " + std::to_string(job + 1) + " is not on the path machine");
        if (!inst.finite(job, to) || inst.at(job, to) > w)
            throw IllegalPush("job " + std::to_string(job + 1) + " does not fit on machine " + std::to_string(to + 1));
        result[job] = to;
    }
    return result;
}

/// Best single-job move that strictly lowers the donor below the receiver:
/// maximizes load(from) - load(to) - p_j over feasible pairs, ties to the
/// lowest job then machine index. nullopt at a local optimum.
inline std::optional<std::pair<int, int>> improving_move(const Instance& inst, const Assignment& a) {
    std::vector<Time> loads = machine_loads(inst, a);
    Time best_gain = 0;
    std::optional<std::pair<int, int>> best;
    for (int j = 0; j < inst.jobs(); ++j) {
        Time p = inst.at(j, a[j]);
        for (int i = 0; i < inst.machines(); ++i) {
            if (i == a[j] || !inst.finite(j, i)) continue;
            Time gain = loads[a[j]] - loads[i] - p;
            if (gain > best_gain) {
                best_gain = gain;
                best = {j, i};
            }
        }
    }
    return best;
}

/// Size-ordered greedy start: jobs in non-increasing size, each to the
/// currently least-loaded feasible machine.
inline Assignment initial_assignment(const Instance& inst) {
    RestrictedProfile prof = restricted_profile(inst);
    std::vector<int> order(inst.jobs());
    for (int j = 0; j < inst.jobs(); ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (prof.size[a] != prof.size[b]) return prof.size[a] > prof.size[b];
        return a < b;
    });
    std::vector<Time> loads(inst.machines(), 0);
    Assignment a(inst.jobs());
    for (int j : order) {
        int pick = -1;
        for (int i = 0; i < inst.machines(); ++i) {
            if (!inst.finite(j, i)) continue;
            if (pick < 0 || loads[i] < loads[pick]) pick = i;
        }
        a[j] = pick;
        loads[pick] += prof.size[j];
    }
    return a;
}

enum class RestrictedStrategy { kDescent, kPathPush };

struct RestrictedSolveResult {
    Assignment assignment;
    RestrictedProfile profile;
    Time result_makespan = 0;
    Rational certified_bound;          // p_max + delta
    std::optional<Rational> ratio;     // 1 + q/eps when q < eps
    bool beats_33_17 = false;
    long moves = 0;
    long pushes = 0;
    bool m_plus_empty = false;
    bool no_remaining_path = false;
};

struct RatioBound {
    Rational q;
    Rational epsilon;
    Rational absolute_bound;        // p_max + L/eps, always certified
    std::optional<Rational> ratio;  // 1 + q/eps, only when q < eps
    bool beats_33_17 = false;
};

/// The approximation certificate of a restricted instance, independent of
/// any particular schedule: the absolute bound p_max + L/eps and, when
/// q = L/p_max < eps, the ratio 1 + q/eps, flagged when it strictly beats
/// 33/17.
inline RatioBound ratio_bound(const Instance& inst) {
    RestrictedProfile prof = restricted_profile(inst);
    RatioBound rb;
    rb.q = prof.q;
    rb.epsilon = prof.epsilon;
    rb.absolute_bound = Rational(prof.p_max) + prof.delta;
    if (prof.p_max == 0 || rb.q < rb.epsilon) {
        rb.ratio = Rational(1) + rb.q / rb.epsilon;
        rb.beats_33_17 = *rb.ratio < Rational(33, 17);
    }
    return rb;
}

/// Balances a restricted instance until no improving move remains. The
/// default strategy is pure best-response descent; kPathPush first drains
/// overloaded machines along shortest transfer paths (capped at
/// m * total size pushes), then polishes with descent. Both end with no
/// overloaded machine and makespan at most p_max + L/eps, checked exactly.
inline RestrictedSolveResult solve_restricted(const Instance& inst,
                                              RestrictedStrategy strategy = RestrictedStrategy::kDescent) {
    RestrictedSolveResult result;
    result.profile = restricted_profile(inst);
    const RestrictedProfile& prof = result.profile;
    Assignment a = initial_assignment(inst);

    if (strategy == RestrictedStrategy::kPathPush) {
        long push_cap = static_cast<long>(inst.machines()) * std::max<Time>(prof.total, 1);
        while (result.pushes < push_cap) {
            RestrictedPartition part = partition_machines(inst, a, prof.p_max, prof.delta);
            if (part.m_plus.empty()) break;
            AssignmentGraph g = build_assignment_graph(inst, a, prof.p_max);
            auto path = path_exists(g, part.m_plus, part.m_minus);
            if (!path) break;  // descent below still guarantees the bound
            a = push_along_path(inst, a, *path, prof.p_max);
            ++result.pushes;
        }
    }

    // Descent: each move shifts one job below the donor's level, dropping
    // the sum of squared loads by at least 2, which caps the move count.
    __int128 move_cap = (static_cast<__int128>(prof.total) * prof.total) / 2 + 1;
    std::vector<Time> loads = machine_loads(inst, a);
    for (;;) {
        auto mv = improving_move(inst, a);
        if (!mv) break;
        auto [job, to] = *mv;
        Time p = inst.at(job, a[job]);
        Time gain = loads[a[job]] - loads[to] - p;
        if (gain < 1) throw Error("internal: non-improving move selected");
        loads[a[job]] -= p;
        loads[to] += p;
        a[job] = to;
        if (++result.moves > move_cap) throw MoveLimitExceeded("descent exceeded its potential-function cap");
    }

    result.assignment = a;
    result.result_makespan = makespan(inst, a);

    RestrictedPartition final_part = partition_machines(inst, a, prof.p_max, prof.delta);
    result.m_plus_empty = final_part.m_plus.empty();
    AssignmentGraph final_graph = build_assignment_graph(inst, a, prof.p_max);
    result.no_remaining_path = !path_exists(final_graph, final_part.m_plus, final_part.m_minus).has_value();

    result.certified_bound = Rational(prof.p_max) + prof.delta;
    // makespan <= p_max + total/k_min, cleared by cross-multiplication
    if (prof.k_min > 0 &&
        result.result_makespan * prof.k_min > prof.p_max * prof.k_min + prof.total)
        throw Error("internal: balanced schedule exceeds its certified bound");

    RatioBound rb = ratio_bound(inst);
    result.ratio = rb.ratio;
    result.beats_33_17 = rb.beats_33_17;
    return result;
}

}  // namespace tightspan
