#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "tightspan/core.hpp"

namespace tightspan {

/// Relaxed assignment: x[j][i] is the fraction of job j placed on machine i.
struct FractionalAssignment {
    int n = 0;
    int m = 0;
    std::vector<double> x;

    FractionalAssignment() = default;
    FractionalAssignment(int jobs, int machines)
        : n(jobs), m(machines), x(static_cast<std::size_t>(jobs) * machines, 0.0) {}

    double& at(int job, int machine) { return x[static_cast<std::size_t>(job) * m + machine]; }
    double at(int job, int machine) const { return x[static_cast<std::size_t>(job) * m + machine]; }

    double row_sum(int job) const {
        double s = 0;
        for (int i = 0; i < m; ++i) s += at(job, i);
        return s;
    }

    bool integral(double tol = 1e-9) const {
        for (double v : x)
            if (v > tol && v < 1.0 - tol) return false;
        return true;
    }
};

struct LpVar {
    int job;
    int machine;
    Time proc;  // processing time coefficient in the capacity row
    Time cost;  // objective / budget coefficient
};

/// Assignment LP: one variable per (job, machine) pair with proc <= T.
/// Rows: sum_i x_ij = 1 per job, sum_j p_ij x_ij <= T per machine, and an
/// optional budget row sum c_ij x_ij <= budget.
struct LpModel {
    int n = 0;
    int m = 0;
    Time threshold = 0;
    std::optional<Rational> budget;
    std::vector<LpVar> vars;  // job-major, machine ascending
};

/// Builds the model, pruning pairs with p_ij > T. Costs equal processing
/// times here; a different cost matrix would only change LpVar::cost.
inline LpModel build_lp(const Instance& inst, Time threshold, std::optional<Rational> budget) {
    if (threshold < 1) throw Error("threshold must be at least 1");
    LpModel model;
    model.n = inst.jobs();
    model.m = inst.machines();
    model.threshold = threshold;
    model.budget = std::move(budget);
    for (int j = 0; j < inst.jobs(); ++j) {
        bool any = false;
        for (int i = 0; i < inst.machines(); ++i) {
            if (!legal(inst, i, j, threshold)) continue;
            model.vars.push_back(LpVar{j, i, inst.at(j, i), inst.at(j, i)});
            any = true;
        }
        if (!any) throw NoLegalMachine(j);
    }
    return model;
}

namespace detail {

constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-6;

enum class RowKind { kEq, kLe };

struct SimplexRow {
    std::vector<std::pair<int, double>> coeffs;  // structural variable -> coefficient
    RowKind kind = RowKind::kLe;
    double rhs = 0;
};

struct SimplexSolution {
    bool feasible = false;
    std::vector<double> x;
    double objective = 0;
    double infeasibility = 0;
    long pivots = 0;
};

/// Dense two-phase simplex with Bland's rule. Right-hand sides must be
/// nonnegative (they are: 1, T, budget). Minimizes the given objective.
class Tableau {
  public:
    Tableau(int structural, const std::vector<SimplexRow>& rows, long pivot_cap)
        : structural_(structural), pivot_cap_(pivot_cap) {
        int slacks = 0, artificials = 0;
        for (const auto& row : rows) (row.kind == RowKind::kLe ? slacks : artificials)++;
        total_ = structural + slacks + artificials;
        art_begin_ = structural + slacks;
        rows_.assign(rows.size(), std::vector<double>(total_ + 1, 0.0));
        basis_.resize(rows.size());
        int next_slack = structural, next_art = art_begin_;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].rhs < 0) throw Error("simplex driver requires nonnegative right-hand sides");
            for (auto [v, c] : rows[r].coeffs) rows_[r][v] += c;
            rows_[r][total_] = rows[r].rhs;
            int basic = rows[r].kind == RowKind::kLe ? next_slack++ : next_art++;
            rows_[r][basic] = 1.0;
            basis_[r] = basic;
        }
    }

    SimplexSolution solve(const std::vector<double>& objective) {
        SimplexSolution sol;
        // Phase 1: minimize the sum of artificials.
        std::vector<double> phase1(total_, 0.0);
        for (int v = art_begin_; v < total_; ++v) phase1[v] = 1.0;
        load_objective(phase1);
        run(total_);  // every column may enter
        double infeas = -z_[total_];
        if (infeas > kFeasEps) {
            sol.infeasibility = infeas;
            sol.pivots = pivots_;
            return sol;
        }
        evict_artificials();
        // Phase 2: the real objective, artificial columns barred.
        std::vector<double> phase2(total_, 0.0);
        for (int v = 0; v < structural_; ++v) phase2[v] = objective[v];
        load_objective(phase2);
        run(art_begin_);
        sol.feasible = true;
        sol.objective = -z_[total_];
        sol.x.assign(structural_, 0.0);
        for (std::size_t r = 0; r < rows_.size(); ++r)
            if (basis_[r] < structural_) sol.x[basis_[r]] = rows_[r][total_];
        sol.pivots = pivots_;
        return sol;
    }

  private:
    void load_objective(const std::vector<double>& cost) {
        z_.assign(total_ + 1, 0.0);
        for (int v = 0; v < total_; ++v) z_[v] = cost[v];
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            double cb = cost[basis_[r]];
            if (cb == 0.0) continue;
            for (int v = 0; v <= total_; ++v) z_[v] -= cb * rows_[r][v];
        }
    }

    // Bland: entering = lowest-index column with negative reduced cost,
    // leaving = min ratio with ties to the lowest basic variable index.
    void run(int enter_limit) {
        for (;;) {
            int enter = -1;
            for (int v = 0; v < enter_limit; ++v)
                if (z_[v] < -kPivotEps) {
                    enter = v;
                    break;
                }
            if (enter < 0) return;
            int leave = -1;
            double best_ratio = 0;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                if (rows_[r][enter] <= kPivotEps) continue;
                double ratio = rows_[r][total_] / rows_[r][enter];
                if (leave < 0 || ratio < best_ratio - 1e-12 ||
                    (std::abs(ratio - best_ratio) <= 1e-12 && basis_[r] < basis_[leave])) {
                    leave = static_cast<int>(r);
                    best_ratio = ratio;
                }
            }
            if (leave < 0) throw Error("simplex: unbounded direction in a bounded model");
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        if (++pivots_ > pivot_cap_) throw IterationLimit("simplex pivot cap exceeded");
        double inv = 1.0 / rows_[row][col];
        for (int v = 0; v <= total_; ++v) rows_[row][v] *= inv;
        rows_[row][col] = 1.0;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (static_cast<int>(r) == row) continue;
            double factor = rows_[r][col];
            if (factor == 0.0) continue;
            for (int v = 0; v <= total_; ++v) rows_[r][v] -= factor * rows_[row][v];
            rows_[r][col] = 0.0;
        }
        double zf = z_[col];
        if (zf != 0.0) {
            for (int v = 0; v <= total_; ++v) z_[v] -= zf * rows_[row][v];
            z_[col] = 0.0;
        }
        basis_[row] = col;
    }

    // Pivot basic artificials (all at value ~0 after phase 1) onto real
    // columns; rows with no real coefficient are redundant and harmless.
    void evict_artificials() {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (basis_[r] < art_begin_) continue;
            for (int v = 0; v < art_begin_; ++v)
                if (std::abs(rows_[r][v]) > 1e-7) {
                    pivot(static_cast<int>(r), v);
                    break;
                }
        }
    }

    int structural_;
    int total_ = 0;
    int art_begin_ = 0;
    long pivot_cap_;
    long pivots_ = 0;
    std::vector<std::vector<double>> rows_;
    std::vector<int> basis_;
    std::vector<double> z_;
};

inline std::vector<SimplexRow> model_rows(const LpModel& model) {
    std::vector<SimplexRow> rows(model.n + model.m + (model.budget ? 1 : 0));
    for (int j = 0; j < model.n; ++j) {
        rows[j].kind = RowKind::kEq;
        rows[j].rhs = 1.0;
    }
    for (int i = 0; i < model.m; ++i) {
        rows[model.n + i].kind = RowKind::kLe;
        rows[model.n + i].rhs = static_cast<double>(model.threshold);
    }
    if (model.budget) {
        rows.back().kind = RowKind::kLe;
        rows.back().rhs = model.budget->to_double();
    }
    for (int v = 0; v < static_cast<int>(model.vars.size()); ++v) {
        const LpVar& var = model.vars[v];
        rows[var.job].coeffs.emplace_back(v, 1.0);
        rows[model.n + var.machine].coeffs.emplace_back(v, static_cast<double>(var.proc));
        if (model.budget) rows.back().coeffs.emplace_back(v, static_cast<double>(var.cost));
    }
    return rows;
}

/// Snap near-zero fractions to 0 and renormalize each job row to sum
/// exactly 1; the packing step downstream relies on exact row sums.
inline FractionalAssignment extract_solution(const LpModel& model, const std::vector<double>& x) {
    FractionalAssignment fa(model.n, model.m);
    for (int v = 0; v < static_cast<int>(model.vars.size()); ++v)
        if (x[v] > 1e-9) fa.at(model.vars[v].job, model.vars[v].machine) = x[v];
    for (int j = 0; j < model.n; ++j) {
        double s = fa.row_sum(j);
        if (std::abs(s - 1.0) > kFeasEps) throw Error("solver returned a row sum off by more than tolerance");
        for (int i = 0; i < model.m; ++i)
            if (fa.at(j, i) != 0.0) fa.at(j, i) /= s;
    }
    return fa;
}

inline long pivot_cap(const LpModel& model) {
    long rows = model.n + model.m + 1;
    long cols = static_cast<long>(model.vars.size()) + rows;
    return 50 * rows * cols;
}

}  // namespace detail

struct LpOutcome {
    bool feasible = false;
    FractionalAssignment x;
    double objective = 0;       // phase-2 objective when feasible
    double infeasibility = 0;   // phase-1 residual when infeasible
    long pivots = 0;
};

/// Any point satisfying all rows, or infeasibility with the phase-1 residual.
inline LpOutcome solve_feasible(const LpModel& model) {
    detail::Tableau tableau(static_cast<int>(model.vars.size()), detail::model_rows(model),
                            detail::pivot_cap(model));
    std::vector<double> zero(model.vars.size(), 0.0);
    detail::SimplexSolution sol = tableau.solve(zero);
    LpOutcome out;
    out.pivots = sol.pivots;
    if (!sol.feasible) {
        out.infeasibility = sol.infeasibility;
        return out;
    }
    out.feasible = true;
    out.x = detail::extract_solution(model, sol.x);
    return out;
}

struct MinCostOutcome {
    LpOutcome lp;
    Rational cost;  // optimal objective, rounded up onto the rational grid
};

/// Minimizes total cost subject to the assignment and capacity rows. The
/// model must not carry a budget row. The returned rational cost is an
/// upper bound on the float optimum (see Rational::from_double_above), so
/// it is safe to reuse as a budget.
inline MinCostOutcome min_cost(const LpModel& model) {
    if (model.budget) throw Error("min_cost expects a model without a budget row");
    std::vector<double> cost(model.vars.size());
    for (std::size_t v = 0; v < model.vars.size(); ++v) cost[v] = static_cast<double>(model.vars[v].cost);
    detail::Tableau tableau(static_cast<int>(model.vars.size()), detail::model_rows(model),
                            detail::pivot_cap(model));
    detail::SimplexSolution sol = tableau.solve(cost);
    MinCostOutcome out;
    out.lp.pivots = sol.pivots;
    if (!sol.feasible) {
        out.lp.infeasibility = sol.infeasibility;
        return out;
    }
    out.lp.feasible = true;
    out.lp.objective = sol.objective;
    out.lp.x = detail::extract_solution(model, sol.x);
    out.cost = Rational::from_double_above(sol.objective, 1e-7);
    return out;
}

/// Largest absolute row violation of x against the model, for audits.
inline double max_violation(const LpModel& model, const FractionalAssignment& fa) {
    double worst = 0;
    std::vector<double> row_sum(model.n, 0.0), cap(model.m, 0.0);
    double spent = 0;
    for (const LpVar& var : model.vars) {
        double v = fa.at(var.job, var.machine);
        row_sum[var.job] += v;
        cap[var.machine] += static_cast<double>(var.proc) * v;
        spent += static_cast<double>(var.cost) * v;
    }
    for (int j = 0; j < model.n; ++j) worst = std::max(worst, std::abs(row_sum[j] - 1.0));
    for (int i = 0; i < model.m; ++i)
        worst = std::max(worst, cap[i] - static_cast<double>(model.threshold));
    if (model.budget) worst = std::max(worst, spent - model.budget->to_double());
    // support must stay on legal pairs
    std::vector<char> legal_pair(static_cast<std::size_t>(model.n) * model.m, 0);
    for (const LpVar& var : model.vars) legal_pair[static_cast<std::size_t>(var.job) * model.m + var.machine] = 1;
    for (int j = 0; j < model.n; ++j)
        for (int i = 0; i < model.m; ++i)
            if (!legal_pair[static_cast<std::size_t>(j) * model.m + i])
                worst = std::max(worst, fa.at(j, i));
    return worst;
}

}  // namespace tightspan
