#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "tightspan/rounding.hpp"

namespace tightspan {

/// Machines partitioned by load against two thresholds: overloaded ("bad",
/// load strictly above T + gamma*L), lightly loaded ("good", load at most
/// gamma*L), and everything in between. Comparisons are exact.
struct MachineClassification {
    Time threshold = 0;  // T
    Rational avg_target; // L
    Rational gamma;
    std::vector<int> bad;
    std::vector<int> good;
    std::vector<int> other;
};

inline MachineClassification classify(const Instance& inst, const Assignment& a, Time threshold,
                                      const Rational& avg_target, const Rational& gamma) {
    if (gamma < Rational(1)) throw Error("gamma must be at least 1");
    MachineClassification cls;
    cls.threshold = threshold;
    cls.avg_target = avg_target;
    cls.gamma = gamma;
    Rational good_cut = gamma * avg_target;
    Rational bad_cut = Rational(threshold) + good_cut;
    std::vector<Time> loads = machine_loads(inst, a);
    for (int i = 0; i < inst.machines(); ++i) {
        if (Rational(loads[i]) > bad_cut)
            cls.bad.push_back(i);
        else if (Rational(loads[i]) <= good_cut)
            cls.good.push_back(i);
        else
            cls.other.push_back(i);
    }
    return cls;
}

/// Bipartite transfer graph: each bad machine, carrying its largest job,
/// connects to every good machine on which that job is legal.
struct TransferGraph {
    Time threshold = 0;
    std::vector<int> bad;
    std::vector<int> good;
    std::vector<int> largest_job;           // per bad machine
    std::vector<std::vector<int>> adj;      // bad position -> good positions
};

inline int largest_job_on(const Instance& inst, const Assignment& a, int machine) {
    int best = -1;
    for (int j = 0; j < inst.jobs(); ++j) {
        if (a[j] != machine) continue;
        if (best < 0 || inst.at(j, machine) > inst.at(best, machine)) best = j;
    }
    return best;
}

inline TransferGraph build_transfer_graph(const Instance& inst, const Assignment& a,
                                          const MachineClassification& cls, Time threshold) {
    TransferGraph g;
    g.threshold = threshold;
    g.bad = cls.bad;
    g.good = cls.good;
    g.adj.resize(g.bad.size());
    for (std::size_t b = 0; b < g.bad.size(); ++b) {
        int jmax = largest_job_on(inst, a, g.bad[b]);
        if (jmax < 0) throw EmptyBadMachine(g.bad[b]);
        g.largest_job.push_back(jmax);
        for (std::size_t p = 0; p < g.good.size(); ++p)
            if (legal(inst, g.good[p], jmax, threshold)) g.adj[b].push_back(static_cast<int>(p));
    }
    return g;
}

namespace detail {

inline bool kuhn_augment(const TransferGraph& g, int b, std::vector<char>& seen, std::vector<int>& match_good) {
    for (int p : g.adj[b]) {
        if (seen[p]) continue;
        seen[p] = 1;
        if (match_good[p] < 0 || kuhn_augment(g, match_good[p], seen, match_good)) {
            match_good[p] = b;
            return true;
        }
    }
    return false;
}

inline std::vector<int> max_matching(const TransferGraph& g) {
    std::vector<int> match_good(g.good.size(), -1);
    for (int b = 0; b < static_cast<int>(g.bad.size()); ++b) {
        std::vector<char> seen(g.good.size(), 0);
        kuhn_augment(g, b, seen, match_good);
    }
    return match_good;
}

}  // namespace detail

struct HallCheck {
    bool ok = true;
    std::vector<int> violating;  // bad machine ids with |N(A)| < |A|
};

/// A matching saturating the bad side exists iff every subset of bad
/// machines has enough distinct good neighbors. On failure the deficient
/// set is read off the alternating-reachability layers of a maximum
/// matching.
inline HallCheck check_hall(const TransferGraph& g) {
    std::vector<int> match_good = detail::max_matching(g);
    std::vector<int> match_bad(g.bad.size(), -1);
    for (int p = 0; p < static_cast<int>(g.good.size()); ++p)
        if (match_good[p] >= 0) match_bad[match_good[p]] = p;
    HallCheck result;
    if (std::count(match_bad.begin(), match_bad.end(), -1) == 0) return result;
    result.ok = false;
    std::vector<char> seen_bad(g.bad.size(), 0), seen_good(g.good.size(), 0);
    std::vector<int> stack;
    for (int b = 0; b < static_cast<int>(g.bad.size()); ++b)
        if (match_bad[b] < 0) {
            seen_bad[b] = 1;
            stack.push_back(b);
        }
    while (!stack.empty()) {
        int b = stack.back();
        stack.pop_back();
        for (int p : g.adj[b]) {
            if (seen_good[p]) continue;
            seen_good[p] = 1;
            int owner = match_good[p];
            if (owner >= 0 && !seen_bad[owner]) {
                seen_bad[owner] = 1;
                stack.push_back(owner);
            }
        }
    }
    for (int b = 0; b < static_cast<int>(g.bad.size()); ++b)
        if (seen_bad[b]) result.violating.push_back(g.bad[b]);
    return result;
}

/// Matching covering every bad machine, as (bad machine, good machine)
/// pairs in ascending bad-machine order.
inline std::vector<std::pair<int, int>> saturating_matching(const TransferGraph& g) {
    std::vector<int> match_good = detail::max_matching(g);
    std::vector<int> match_bad(g.bad.size(), -1);
    for (int p = 0; p < static_cast<int>(g.good.size()); ++p)
        if (match_good[p] >= 0) match_bad[match_good[p]] = p;
    std::vector<std::pair<int, int>> pairs;
    for (int b = 0; b < static_cast<int>(g.bad.size()); ++b) {
        if (match_bad[b] < 0)
            throw NoSaturatingMatching("no matching covers overloaded machine " +
                                       std::to_string(g.bad[b] + 1));
        pairs.emplace_back(g.bad[b], g.good[match_bad[b]]);
    }
    return pairs;
}

/// Moves each bad machine's largest job to its matched good machine.
/// Each good machine may appear at most once.
inline Assignment apply_transfers(const Instance& inst, const Assignment& a,
                                  const std::vector<std::pair<int, int>>& matching, Time threshold) {
    Assignment result = a;
    std::vector<char> used(inst.machines(), 0);
    for (auto [from, to] : matching) {
        if (used[to]) throw IllegalTransfer("machine " + std::to_string(to + 1) + " receives two transfers");
        used[to] = 1;
        int jmax = largest_job_on(inst, a, from);
        if (jmax < 0) throw EmptyBadMachine(from);
        if (!legal(inst, to, jmax, threshold))
            throw IllegalTransfer("job " + std::to_string(jmax + 1) + " is not legal on machine " +
                                  std::to_string(to + 1));
        result[jmax] = to;
    }
    return result;
}

enum class BoundKind { kTPlusLOverEps, kTwoT, kPmaxPlusLOverEps };

inline const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::kTPlusLOverEps: return "T_plus_L_over_eps";
        case BoundKind::kTwoT: return "two_T";
        case BoundKind::kPmaxPlusLOverEps: return "pmax_plus_L_over_eps";
    }
    return "?";
}

struct GeneralSolveResult {
    bool feasible = false;
    Assignment assignment;       // final schedule
    Assignment rounded;          // pre-rebalance schedule, kept for audits
    Rational epsilon;            // feasibility factor at T
    Rational certified_bound;
    BoundKind kind = BoundKind::kTwoT;
    int transfers = 0;
    long pivots = 0;
    double infeasibility = 0;    // phase-1 residual when infeasible
};

/// Full pipeline for a general instance and targets (T, L): solve the
/// relaxation with cost = processing time and budget m*L, round, and when
/// the feasibility factor allows it, move each overloaded machine's
/// largest job to a matched lightly loaded machine. Certifies
/// min{T + L/eps, 2T} on the returned schedule; reports infeasibility when
/// no fractional schedule with these targets exists.
inline GeneralSolveResult solve_general(const Instance& inst, Time threshold, const Rational& avg_target) {
    if (threshold < 1) throw Error("threshold must be at least 1");
    if (avg_target > Rational(threshold)) throw Error("average-load target must not exceed the threshold");
    GeneralSolveResult result;

    LpModel model;
    try {
        model = build_lp(inst, threshold, Rational(inst.machines()) * avg_target);
    } catch (const NoLegalMachine&) {
        result.infeasibility = 1.0;  // a whole job row is unplaceable
        return result;
    }
    LpOutcome lp = solve_feasible(model);
    result.pivots = lp.pivots;
    if (!lp.feasible) {
        result.infeasibility = lp.infeasibility;
        return result;
    }

    result.rounded = round(inst, lp.x, threshold);
    result.feasible = true;
    result.epsilon = feasibility_factor(inst, threshold);

    if (result.epsilon * Rational(threshold) <= avg_target) {
        result.assignment = result.rounded;
        result.certified_bound = Rational(2 * threshold);
        result.kind = BoundKind::kTwoT;
    } else {
        Rational gamma = result.epsilon.reciprocal();
        MachineClassification cls = classify(inst, result.rounded, threshold, avg_target, gamma);
        TransferGraph graph = build_transfer_graph(inst, result.rounded, cls, threshold);
        HallCheck hall = check_hall(graph);
        if (!hall.ok) {
            std::ostringstream msg;
            msg << "saturating matching does not exist: " << cls.bad.size() << " overloaded, "
                << cls.good.size() << " lightly loaded machines, deficient set {";
            for (std::size_t k = 0; k < hall.violating.size(); ++k)
                msg << (k ? "," : "") << hall.violating[k] + 1;
            msg << "} at T=" << threshold << " L=" << avg_target.str() << " eps=" << result.epsilon.str();
            throw MatchingFailure(msg.str());
        }
        auto matching = saturating_matching(graph);
        result.assignment = apply_transfers(inst, result.rounded, matching, threshold);
        result.transfers = static_cast<int>(matching.size());
        result.certified_bound = Rational(threshold) + gamma * avg_target;
        result.kind = BoundKind::kTPlusLOverEps;
    }

    if (Rational(makespan(inst, result.assignment)) > result.certified_bound)
        throw Error("internal: schedule exceeds its certified bound");
    return result;
}

/// Audit of the machine-count bounds that make the transfer matching
/// possible: with k = |bad|, k*(gamma+1) < m must hold, and |good| must
/// beat (1 - 1/gamma)*m + (k/gamma)*(T/L). The second bound is recorded
/// both strictly and non-strictly; equality cases are flagged so callers
/// can log them.
struct CountAudit {
    bool bad_count_ok = true;
    bool good_count_strict = true;
    bool good_count_ge = true;
    bool good_count_equality = false;
    Rational good_required;
};

inline CountAudit audit_counts(const MachineClassification& cls, Time threshold, const Rational& avg_target,
                               const Rational& gamma, int machines) {
    CountAudit audit;
    auto k = static_cast<std::int64_t>(cls.bad.size());
    audit.bad_count_ok = Rational(k) * (gamma + Rational(1)) < Rational(machines);
    if (avg_target.is_zero()) return audit;  // degenerate: no load at all
    Rational inv_gamma = gamma.reciprocal();
    audit.good_required = (Rational(1) - inv_gamma) * Rational(machines) +
                          Rational(k) * inv_gamma * (Rational(threshold) / avg_target);
    Rational good_count(static_cast<std::int64_t>(cls.good.size()));
    audit.good_count_strict = good_count > audit.good_required;
    audit.good_count_ge = good_count >= audit.good_required;
    audit.good_count_equality = good_count == audit.good_required;
    return audit;
}

}  // namespace tightspan
