#pragma once

#include <cstdlib>
#include <numeric>
#include <random>
#include <vector>

#include "tightspan/core.hpp"

namespace tightspan {

/// Seeded instance generator. Every job receives a uniformly random
/// k-subset of machines as its feasible set, so the feasibility factor at
/// threshold p_max is k/m by construction. Identical specs reproduce
/// identical instances bit for bit: all draws go through one fixed-order
/// mt19937_64 stream.
struct GeneratorSpec {
    int m = 1;
    int n = 0;
    int k = 1;          // feasible machines per job
    Time p_max = 1;     // processing times drawn uniformly from [1, p_max]
    std::uint64_t seed = 0;
    bool restricted = false;
};

inline constexpr std::uint64_t kDefaultSeed = 1;

/// Default seed, overridable through the TIGHTSPAN_SEED environment variable.
inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("TIGHTSPAN_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
    }
    return kDefaultSeed;
}

inline Instance generate(const GeneratorSpec& spec) {
    if (spec.k < 1 || spec.k > spec.m) throw Error("feasible-set size k must be in [1, m]");
    if (spec.p_max < 1 || spec.p_max > kMaxProcTime) throw Error("p_max out of range");
    std::mt19937_64 rng(spec.seed);
    auto draw = [&](std::uint64_t span) { return static_cast<std::uint64_t>(rng() % span); };
    Instance inst(spec.m, spec.n);
    std::vector<int> pool(spec.m);
    for (int j = 0; j < spec.n; ++j) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int t = 0; t < spec.k; ++t) {
            int pick = t + static_cast<int>(draw(spec.m - t));
            std::swap(pool[t], pool[pick]);
        }
        std::vector<int> feasible(pool.begin(), pool.begin() + spec.k);
        std::sort(feasible.begin(), feasible.end());
        if (spec.restricted) {
            Time p = 1 + static_cast<Time>(draw(spec.p_max));
            for (int i : feasible) inst.at(j, i) = p;
        } else {
            for (int i : feasible) inst.at(j, i) = 1 + static_cast<Time>(draw(spec.p_max));
        }
    }
    return inst;
}

}  // namespace tightspan
