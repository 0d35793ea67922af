#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tightspan/simplex.hpp"

namespace tightspan {

struct BinEntry {
    int job;
    double fraction;
};

/// Per machine: ceil(sum_j x_ij) unit bins, filled with the fractional
/// values in non-increasing processing-time order. Every bin except
/// possibly the last is packed to exactly 1; a value splits across at most
/// two consecutive bins.
struct SubMachinePacking {
    std::vector<std::vector<std::vector<BinEntry>>> bins;  // [machine][bin] -> entries
};

inline SubMachinePacking pack_bins(const Instance& inst, const FractionalAssignment& fa) {
    SubMachinePacking packing;
    packing.bins.resize(fa.m);
    for (int i = 0; i < fa.m; ++i) {
        std::vector<int> jobs;
        for (int j = 0; j < fa.n; ++j)
            if (fa.at(j, i) > 0.0) jobs.push_back(j);
        std::sort(jobs.begin(), jobs.end(), [&](int a, int b) {
            if (inst.at(a, i) != inst.at(b, i)) return inst.at(a, i) > inst.at(b, i);
            return a < b;
        });
        auto& machine_bins = packing.bins[i];
        std::vector<BinEntry> open;
        double room = 1.0;
        for (int j : jobs) {
            double remaining = fa.at(j, i);
            while (remaining > 1e-12) {
                if (remaining <= room + 1e-9) {
                    open.push_back(BinEntry{j, remaining});
                    room -= remaining;
                    remaining = 0.0;
                } else {
                    open.push_back(BinEntry{j, room});
                    remaining -= room;
                    room = 0.0;
                }
                if (room <= 1e-9) {
                    machine_bins.push_back(std::move(open));
                    open.clear();
                    room = 1.0;
                }
            }
        }
        if (!open.empty()) machine_bins.push_back(std::move(open));
    }
    return packing;
}

/// Bipartite graph between job nodes and sub-machine bins: an edge exists
/// iff a positive fraction of x_ij landed in that bin, with the pair's cost.
struct RoundingGraph {
    int n = 0;
    std::vector<std::pair<int, int>> bin_owner;       // right node -> (machine, bin index)
    std::vector<std::vector<std::pair<int, Time>>> adj;  // job -> (right node, cost)
};

inline RoundingGraph build_rounding_graph(const Instance& inst, const SubMachinePacking& packing) {
    RoundingGraph g;
    g.n = inst.jobs();
    g.adj.resize(g.n);
    for (int i = 0; i < static_cast<int>(packing.bins.size()); ++i) {
        for (int s = 0; s < static_cast<int>(packing.bins[i].size()); ++s) {
            int node = static_cast<int>(g.bin_owner.size());
            g.bin_owner.emplace_back(i, s);
            for (const BinEntry& entry : packing.bins[i][s])
                g.adj[entry.job].emplace_back(node, inst.at(entry.job, i));
        }
    }
    return g;
}

/// Minimum-cost matching covering every job node, by successive shortest
/// augmenting paths with node potentials. Costs are integers, so the
/// optimum is exact. Throws NoPerfectMatching if some job cannot be
/// covered, which would mean the packing is broken.
inline std::vector<int> min_cost_perfect_matching(const RoundingGraph& g) {
    const int n = g.n;
    const int width = static_cast<int>(g.bin_owner.size());
    if (n == 0) return {};
    if (width < n) throw NoPerfectMatching("fewer sub-machine bins than jobs");
    constexpr Time kNoEdge = Time{1} << 50;
    constexpr Time kInf = Time{1} << 60;
    std::vector<Time> cost(static_cast<std::size_t>(n) * width, kNoEdge);
    for (int j = 0; j < n; ++j)
        for (auto [node, c] : g.adj[j]) cost[static_cast<std::size_t>(j) * width + node] = c;

    // 1-based classic potential scheme: row_of[0] holds the row being placed.
    std::vector<Time> pot_row(n + 1, 0), pot_col(width + 1, 0), min_val(width + 1);
    std::vector<int> row_of(width + 1, 0), way(width + 1, 0);
    for (int r = 1; r <= n; ++r) {
        row_of[0] = r;
        int col0 = 0;
        min_val.assign(width + 1, kInf);
        std::vector<char> used(width + 1, 0);
        do {
            used[col0] = 1;
            int row = row_of[col0];
            Time delta = kInf;
            int col1 = -1;
            for (int c = 1; c <= width; ++c) {
                if (used[c]) continue;
                Time cur = cost[static_cast<std::size_t>(row - 1) * width + (c - 1)] - pot_row[row] - pot_col[c];
                if (cur < min_val[c]) {
                    min_val[c] = cur;
                    way[c] = col0;
                }
                if (min_val[c] < delta) {
                    delta = min_val[c];
                    col1 = c;
                }
            }
            if (col1 < 0 || delta >= kNoEdge / 2) throw NoPerfectMatching("no augmenting path for a job node");
            for (int c = 0; c <= width; ++c) {
                if (used[c]) {
                    pot_row[row_of[c]] += delta;
                    pot_col[c] -= delta;
                } else {
                    min_val[c] -= delta;
                }
            }
            col0 = col1;
        } while (row_of[col0] != 0);
        do {
            int col1 = way[col0];
            row_of[col0] = row_of[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<int> match(n, -1);
    for (int c = 1; c <= width; ++c)
        if (row_of[c] != 0) match[row_of[c] - 1] = c - 1;
    for (int j = 0; j < n; ++j) {
        if (match[j] < 0) throw NoPerfectMatching("job left unmatched");
        if (cost[static_cast<std::size_t>(j) * width + match[j]] >= kNoEdge)
            throw NoPerfectMatching("matching used a non-edge");
    }
    return match;
}

/// Rounds a feasible fractional solution to an integral assignment.
/// Guarantees, each checked by the test suite: total cost never exceeds the
/// fractional cost; on every machine the load minus its largest job is at
/// most T; hence makespan at most 2T.
inline Assignment round(const Instance& inst, const FractionalAssignment& fa, Time threshold) {
    SubMachinePacking packing = pack_bins(inst, fa);
    RoundingGraph g = build_rounding_graph(inst, packing);
    std::vector<int> match = min_cost_perfect_matching(g);
    Assignment a(inst.jobs());
    for (int j = 0; j < inst.jobs(); ++j) {
        int machine = g.bin_owner[match[j]].first;
        if (!legal(inst, machine, j, threshold))
            throw Error("rounding placed a job on an illegal machine");
        a[j] = machine;
    }
    return a;
}

/// Max over machines of (load minus the largest assigned job); empty
/// machines contribute 0. The rounding bounds this by T.
inline Time max_residual_load(const Instance& inst, const Assignment& a) {
    std::vector<Time> total(inst.machines(), 0), largest(inst.machines(), 0);
    for (int j = 0; j < inst.jobs(); ++j) {
        Time t = inst.at(j, a[j]);
        total[a[j]] += t;
        largest[a[j]] = std::max(largest[a[j]], t);
    }
    Time worst = 0;
    for (int i = 0; i < inst.machines(); ++i) worst = std::max(worst, total[i] - largest[i]);
    return worst;
}

}  // namespace tightspan
