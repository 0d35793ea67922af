#pragma once

#include <algorithm>
#include <chrono>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tightspan/generator.hpp"
#include "tightspan/oracle.hpp"
#include "tightspan/report.hpp"
#include "tightspan/restricted.hpp"

namespace tightspan {

namespace detail {

class Stopwatch {
  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline bool lp_feasible_at(const Instance& inst, Time threshold) {
    try {
        return solve_feasible(build_lp(inst, threshold, std::nullopt)).feasible;
    } catch (const NoLegalMachine&) {
        return false;
    }
}

}  // namespace detail

struct AutoDriveResult {
    Time threshold = 0;   // smallest T with a feasible relaxation
    Rational avg_target;  // optimal fractional cost at T, divided by m
    GeneralSolveResult solve;
    long probe_pivots = 0;
};

/// Picks (T, L) for a general instance when the caller supplies neither:
/// binary search for the smallest integer T whose relaxation is feasible
/// (so T-1 is certified infeasible), then L = (minimum fractional total
/// load at T) / m, capped at T. The bracket's upper end is always feasible,
/// so this never reports infeasibility.
inline AutoDriveResult auto_drive_general(const Instance& inst) {
    Time lo = 1, hi = 1;
    for (int j = 0; j < inst.jobs(); ++j) {
        Time cheapest = min_feasible_time(inst, j);
        if (cheapest == kInfeasible) throw Error("job " + std::to_string(j + 1) + " has no feasible machine");
        lo = std::max(lo, cheapest);
        hi += cheapest;
    }
    hi = std::max(hi - 1, lo);  // sum of cheapest times, at least lo

    AutoDriveResult result;
    if (!detail::lp_feasible_at(inst, hi)) throw Error("internal: upper bracket is infeasible");
    while (lo < hi) {
        Time mid = lo + (hi - lo) / 2;
        if (detail::lp_feasible_at(inst, mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    result.threshold = lo;

    MinCostOutcome mc = min_cost(build_lp(inst, result.threshold, std::nullopt));
    if (!mc.lp.feasible) throw Error("internal: minimal threshold lost feasibility");
    result.probe_pivots = mc.lp.pivots;
    result.avg_target = std::min(mc.cost / Rational(inst.machines()), Rational(result.threshold));

    result.solve = solve_general(inst, result.threshold, result.avg_target);
    if (!result.solve.feasible) throw Error("internal: auto-chosen targets came back infeasible");
    return result;
}

inline SolveReport report_general(const std::string& id, const Instance& inst, Time threshold,
                                  const Rational& avg_target, const GeneralSolveResult& res, double wall_ms) {
    SolveReport r;
    r.instance_id = id;
    r.mode = "general";
    r.m = inst.machines();
    r.n = inst.jobs();
    r.threshold = threshold;
    r.avg_load = avg_target;
    r.pivots = res.pivots;
    r.wall_ms = wall_ms;
    if (!res.feasible) {
        r.error = "infeasible";
        return r;
    }
    r.epsilon = res.epsilon;
    r.result_makespan = makespan(inst, res.assignment);
    r.certified_bound = res.certified_bound;
    r.bound_kind = res.kind;
    return r;
}

inline SolveReport report_restricted(const std::string& id, const Instance& inst,
                                     const RestrictedSolveResult& res, double wall_ms) {
    SolveReport r;
    r.instance_id = id;
    r.mode = "restricted";
    r.m = inst.machines();
    r.n = inst.jobs();
    r.epsilon = res.profile.epsilon;
    r.avg_load = res.profile.avg_load;
    r.q = res.profile.q;
    r.result_makespan = res.result_makespan;
    r.certified_bound = res.certified_bound;
    r.bound_kind = BoundKind::kPmaxPlusLOverEps;
    r.beats_33_17 = res.beats_33_17;
    r.moves = res.moves + res.pushes;
    r.wall_ms = wall_ms;
    return r;
}

inline SolveReport report_oracle(const std::string& id, const Instance& inst, const OracleResult& res,
                                 double wall_ms) {
    SolveReport r;
    r.instance_id = id;
    r.mode = "oracle";
    r.m = inst.machines();
    r.n = inst.jobs();
    r.result_makespan = res.opt_makespan;
    r.nodes = res.nodes;
    r.wall_ms = wall_ms;
    return r;
}

struct BenchOptions {
    std::vector<std::string> modes;  // subset of {general, restricted, oracle}, in output order
    OracleLimits oracle_limits;
    std::ostream* stream = nullptr;  // optional JSON-lines sink, one object per row
};

struct BenchResult {
    std::vector<SolveReport> rows;
    int bound_violations = 0;
    std::optional<Rational> max_ratio;
};

/// Runs every requested mode on every instance, in the given order. When
/// the oracle mode is present its optimum feeds the ratio column of the
/// other rows. Emission re-checks makespan <= certified_bound exactly;
/// violations are counted and marked, never silently dropped.
inline BenchResult bench(const std::vector<std::pair<std::string, Instance>>& instances,
                         const BenchOptions& options) {
    bool want_oracle = std::find(options.modes.begin(), options.modes.end(), "oracle") != options.modes.end();
    BenchResult result;
    auto emit = [&](SolveReport row) {
        if (row.bound_violated()) {
            ++result.bound_violations;
            row.error = row.error.empty() ? "BOUND VIOLATION" : row.error + "; BOUND VIOLATION";
        }
        if (row.ratio_vs_opt && (!result.max_ratio || *row.ratio_vs_opt > *result.max_ratio))
            result.max_ratio = row.ratio_vs_opt;
        if (options.stream) *options.stream << report_json(row).dump() << '\n';
        result.rows.push_back(std::move(row));
    };

    for (const auto& [id, inst] : instances) {
        std::optional<OracleResult> opt;
        std::string oracle_error;
        double oracle_ms = 0;
        if (want_oracle) {
            detail::Stopwatch watch;
            try {
                opt = optimal_makespan(inst, options.oracle_limits);
            } catch (const LimitExceeded& e) {
                oracle_error = e.what();
            }
            oracle_ms = watch.ms();
        }
        auto attach_ratio = [&](SolveReport& row) {
            if (opt && row.result_makespan && opt->opt_makespan > 0)
                row.ratio_vs_opt = Rational(*row.result_makespan, opt->opt_makespan);
        };
        for (const std::string& mode : options.modes) {
            if (mode == "oracle") {
                if (opt) {
                    emit(report_oracle(id, inst, *opt, oracle_ms));
                } else {
                    SolveReport row;
                    row.instance_id = id;
                    row.mode = "oracle";
                    row.m = inst.machines();
                    row.n = inst.jobs();
                    row.error = oracle_error;
                    row.wall_ms = oracle_ms;
                    emit(std::move(row));
                }
                continue;
            }
            detail::Stopwatch watch;
            SolveReport row;
            try {
                if (mode == "general") {
                    AutoDriveResult drive = auto_drive_general(inst);
                    row = report_general(id, inst, drive.threshold, drive.avg_target, drive.solve, watch.ms());
                } else if (mode == "restricted") {
                    if (!inst.restricted()) throw Error("instance is not restricted");
                    RestrictedSolveResult res = solve_restricted(inst);
                    row = report_restricted(id, inst, res, watch.ms());
                } else {
                    throw Error("unknown mode '" + mode + "'");
                }
            } catch (const Error& e) {
                row = SolveReport{};
                row.instance_id = id;
                row.mode = mode;
                row.m = inst.machines();
                row.n = inst.jobs();
                row.error = e.what();
                row.wall_ms = watch.ms();
            }
            attach_ratio(row);
            emit(std::move(row));
        }
    }
    return result;
}

inline void write_csv(std::ostream& out, const BenchResult& result) {
    out << kCsvHeader << '\n';
    if (result.rows.empty()) return;  // header-only file for an empty input set
    for (const SolveReport& row : result.rows) out << csv_row(row) << '\n';
    SolveReport summary;
    summary.instance_id = "SUMMARY";
    summary.mode = "summary";
    summary.ratio_vs_opt = result.max_ratio;
    summary.error = "violations=" + std::to_string(result.bound_violations);
    out << csv_row(summary) << '\n';
}

}  // namespace tightspan
