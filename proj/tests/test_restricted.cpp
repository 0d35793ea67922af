#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tightspan/generator.hpp"
#include "tightspan/restricted.hpp"

using namespace tightspan;

namespace {

// Restricted instance: size per job plus its feasible machine set.
Instance restricted_instance(int m, const std::vector<Time>& sizes,
                             const std::vector<std::vector<int>>& feasible) {
    Instance inst(m, static_cast<int>(sizes.size()));
    for (int j = 0; j < static_cast<int>(sizes.size()); ++j)
        for (int i : feasible[j]) inst.at(j, i) = sizes[j];
    return inst;
}

Instance everywhere(int m, const std::vector<Time>& sizes) {
    std::vector<std::vector<int>> all(sizes.size());
    for (auto& f : all)
        for (int i = 0; i < m; ++i) f.push_back(i);
    return restricted_instance(m, sizes, all);
}

Time enumerate_opt(const Instance& inst) {
    Assignment a(inst.jobs());
    Time best = -1;
    auto rec = [&](auto&& self, int j) -> void {
        if (j == inst.jobs()) {
            Time ms = makespan(inst, a);
            if (best < 0 || ms < best) best = ms;
            return;
        }
        for (int i = 0; i < inst.machines(); ++i) {
            if (!inst.finite(j, i)) continue;
            a[j] = i;
            self(self, j + 1);
        }
    };
    rec(rec, 0);
    return best;
}

}  // namespace

TEST_CASE("initial assignment spreads greedily by size") {
    Instance one = everywhere(1, {4, 7, 2});
    Assignment a = initial_assignment(one);
    CHECK(a == Assignment{0, 0, 0});

    Instance spread = everywhere(4, {10, 2, 2, 2});
    a = initial_assignment(spread);
    CHECK(machine_loads(spread, a) == std::vector<Time>{10, 2, 2, 2});

    Instance empty(3, 0);
    CHECK(initial_assignment(empty).size() == 0);
}

TEST_CASE("partition thresholds are exact") {
    Assignment a{0, 1, 2};
    Instance inst = everywhere(3, {12, 8, 4});
    RestrictedPartition part = partition_machines(inst, a, 5, Rational(6));
    CHECK(part.m_plus == std::vector<int>{0});
    CHECK(part.m_zero == std::vector<int>{1});
    CHECK(part.m_minus == std::vector<int>{2});

    part = partition_machines(inst, a, 20, Rational(12));
    CHECK(part.m_minus == std::vector<int>{0, 1, 2});

    // a load exactly w + delta stays in m_zero
    Instance edge = everywhere(2, {11});
    part = partition_machines(edge, Assignment{0}, 5, Rational(6));
    CHECK(part.m_plus.empty());
    CHECK(part.m_zero == std::vector<int>{0});
    CHECK(part.m_minus == std::vector<int>{1});
}

TEST_CASE("assignment graph arcs") {
    Instance inst = restricted_instance(3, {5, 3}, {{0, 1, 2}, {1}});
    Assignment a{0, 1};
    AssignmentGraph g = build_assignment_graph(inst, a, 5);
    CHECK(g.jobs_on[0] == std::vector<int>{0});
    CHECK(g.jobs_on[1] == std::vector<int>{1});
    CHECK(g.moves_of[0] == std::vector<int>{1, 2});
    CHECK(g.moves_of[1].empty());  // feasible only where assigned

    // arcs respect the w cap even on feasible machines
    AssignmentGraph capped = build_assignment_graph(inst, a, 4);
    CHECK(capped.moves_of[0].empty());
}

TEST_CASE("path search") {
    Instance inst = restricted_instance(3, {5, 5}, {{0, 1}, {0, 2}});
    Assignment a{0, 0};
    AssignmentGraph g = build_assignment_graph(inst, a, 5);

    CHECK_FALSE(path_exists(g, {}, {1, 2}).has_value());  // no sources

    auto direct = path_exists(g, {0}, {1, 2});
    REQUIRE(direct);
    CHECK(direct->machines == std::vector<int>{0, 1});  // BFS takes the first hop found
    CHECK(direct->jobs == std::vector<int>{0});

    // two-hop path: 0 -> j0 -> 1 -> j2 -> 2
    Instance chain = restricted_instance(3, {5, 5, 3}, {{0, 1}, {0}, {1, 2}});
    Assignment b{0, 0, 1};
    AssignmentGraph gc = build_assignment_graph(chain, b, 5);
    auto hop2 = path_exists(gc, {0}, {2});
    REQUIRE(hop2);
    CHECK(hop2->machines == std::vector<int>{0, 1, 2});
    CHECK(hop2->jobs == std::vector<int>{0, 2});
}

TEST_CASE("push along path reorients the assignment") {
    Instance inst = restricted_instance(3, {5, 3}, {{0, 1}, {1, 2}});
    Assignment a{0, 1};
    TransferPath path{{0, 1, 2}, {0, 1}};
    Assignment after = push_along_path(inst, a, path, 5);
    CHECK(after == Assignment{1, 2});
    std::vector<Time> loads = machine_loads(inst, after);
    CHECK(loads == std::vector<Time>{0, 5, 3});  // middle machine: -3 then +5

    // equal sizes leave the intermediate machine unchanged
    Instance equal = restricted_instance(3, {4, 4}, {{0, 1}, {1, 2}});
    after = push_along_path(equal, Assignment{0, 1}, path, 4);
    CHECK(load(equal, after, 1) == 4);

    // one-hop: only two loads change, by -p and +p
    Instance hop = restricted_instance(2, {4}, {{0, 1}});
    after = push_along_path(hop, Assignment{0}, TransferPath{{0, 1}, {0}}, 4);
    CHECK(machine_loads(hop, after) == std::vector<Time>{0, 4});

    CHECK_THROWS_AS(push_along_path(inst, a, TransferPath{{1, 0, 2}, {0, 1}}, 5), IllegalPush);
    CHECK_THROWS_AS(push_along_path(inst, a, path, 2), IllegalPush);  // w too small
}

TEST_CASE("improving move picks the largest gain") {
    // loads (10, 0); only the size-4 job can move, gain 10-0-4=6
    Instance inst = restricted_instance(2, {4, 6}, {{0, 1}, {0}});
    auto mv = improving_move(inst, Assignment{0, 0});
    REQUIRE(mv);
    CHECK(*mv == std::pair<int, int>{0, 1});

    // gain = source - target - size favors the smaller of two movable jobs
    Instance pair = restricted_instance(2, {4, 3, 3}, {{0, 1}, {0, 1}, {0, 1}});
    mv = improving_move(pair, Assignment{0, 0, 0});
    REQUIRE(mv);
    CHECK(*mv == std::pair<int, int>{1, 1});  // gain 7, lowest job index on the tie

    Instance balanced = everywhere(2, {3, 3});
    CHECK_FALSE(improving_move(balanced, Assignment{0, 1}).has_value());

    // boundary: loads (7,3), moving the size-4 job needs 7 > 3 + 4, which fails
    Instance edge = restricted_instance(2, {4, 3, 3}, {{0, 1}, {0}, {1}});
    CHECK_FALSE(improving_move(edge, Assignment{0, 0, 1}).has_value());
}

TEST_CASE("solve_restricted on exhaustively verified cases") {
    Instance four_threes = everywhere(2, {3, 3, 3, 3});
    CHECK(enumerate_opt(four_threes) == 6);
    RestrictedSolveResult res = solve_restricted(four_threes);
    CHECK(machine_loads(four_threes, res.assignment) == std::vector<Time>{6, 6});
    CHECK(res.result_makespan == 6);
    CHECK(res.certified_bound == Rational(9));  // p_max + L/eps = 3 + 6
    CHECK(res.m_plus_empty);

    Instance big_small = everywhere(4, {10, 2, 2, 2});
    CHECK(enumerate_opt(big_small) == 10);
    res = solve_restricted(big_small);
    CHECK(res.result_makespan == 10);
    CHECK(res.certified_bound == Rational(14));
    REQUIRE(res.ratio);
    CHECK(*res.ratio == Rational(7, 5));
    CHECK(res.beats_33_17);

    Instance single = everywhere(1, {5, 6});
    res = solve_restricted(single);
    CHECK(res.result_makespan == 11);
    CHECK(res.certified_bound == Rational(6 + 11));
    CHECK(res.m_plus_empty);
}

TEST_CASE("ratio_bound certificates") {
    Instance flagged = everywhere(4, {10, 2, 2, 2});
    RatioBound rb = ratio_bound(flagged);
    CHECK(rb.q == Rational(2, 5));
    CHECK(rb.epsilon == Rational(1));
    REQUIRE(rb.ratio);
    CHECK(*rb.ratio == Rational(7, 5));
    CHECK(rb.beats_33_17);

    // q >= eps: no ratio certificate, absolute bound only
    Instance heavy = restricted_instance(4, {8, 8, 8, 8, 8}, {{0}, {1}, {2}, {3}, {0}});
    rb = ratio_bound(heavy);
    CHECK(rb.epsilon == Rational(1, 4));
    CHECK(rb.q == Rational(5, 4));  // 40 / (4 * 8), well above eps
    CHECK_FALSE(rb.ratio.has_value());
    CHECK(rb.absolute_bound == Rational(8) + Rational(40, 1));

    // tiny q drives the ratio toward 1
    std::vector<Time> sizes{100};
    for (int t = 0; t < 10; ++t) sizes.push_back(1);  // q = 110/(100*... )
    Instance tiny = everywhere(11, sizes);
    rb = ratio_bound(tiny);
    CHECK(rb.q == Rational(110, 1100));
    REQUIRE(rb.ratio);
    CHECK(*rb.ratio == Rational(11, 10));
    CHECK(rb.beats_33_17);
}

TEST_CASE("balancer invariants over seeded instances") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        int m = 3 + static_cast<int>(seed % 4);
        int k = 1 + static_cast<int>(seed % m);
        Instance inst = generate({.m = m, .n = 10, .k = k, .p_max = 15, .seed = seed, .restricted = true});
        RestrictedProfile prof = restricted_profile(inst);
        RestrictedStrategy strategy = (seed % 2) ? RestrictedStrategy::kDescent : RestrictedStrategy::kPathPush;
        RestrictedSolveResult res = solve_restricted(inst, strategy);

        // conservation: total load equals the sum of sizes
        Time total = 0;
        for (Time l : machine_loads(inst, res.assignment)) total += l;
        CHECK(total == prof.total);

        CHECK(res.m_plus_empty);
        CHECK(res.no_remaining_path);
        CHECK_FALSE(improving_move(inst, res.assignment).has_value());
        // exact bound check via cross multiplication
        CHECK(res.result_makespan * prof.k_min <= prof.p_max * prof.k_min + prof.total);
        CHECK(Rational(res.result_makespan) <= res.certified_bound);
        CHECK(res.moves <= (prof.total * prof.total) / 2 + 1);
        CHECK(average_load(inst, res.assignment) == prof.avg_load);
    }
}

TEST_CASE("each descent move drops the squared-load potential by at least 2") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        Instance inst = generate({.m = 4, .n = 8, .k = 2, .p_max = 9, .seed = seed, .restricted = true});
        Assignment a = initial_assignment(inst);
        auto potential = [&](const Assignment& x) {
            __int128 sum = 0;
            for (Time l : machine_loads(inst, x)) sum += static_cast<__int128>(l) * l;
            return sum;
        };
        long guard = 0;
        while (auto mv = improving_move(inst, a)) {
            __int128 before = potential(a);
            a[mv->first] = mv->second;
            __int128 after = potential(a);
            CHECK(before - after >= 2);
            REQUIRE(++guard < 100000);
        }
    }
}

TEST_CASE("no overloaded machine survives and pushes never overload the sink") {
    std::mt19937 rng(99);
    int overloaded_states = 0;
    for (std::uint64_t seed = 1; overloaded_states < 300; ++seed) {
        REQUIRE(seed < 4000);  // the sampler must find enough overloaded states
        int m = 3 + static_cast<int>(seed % 4);
        int k = 1 + static_cast<int>(seed % 3);
        if (k > m) continue;
        Instance inst = generate({.m = m, .n = 9, .k = k, .p_max = 12, .seed = seed, .restricted = true});
        if (inst.jobs() == 0) continue;
        RestrictedProfile prof = restricted_profile(inst);

        // biased random w-feasible assignment: crowds low-index machines
        Assignment a(inst.jobs());
        for (int j = 0; j < inst.jobs(); ++j) {
            std::vector<int> feasible;
            for (int i = 0; i < inst.machines(); ++i)
                if (inst.finite(j, i)) feasible.push_back(i);
            a[j] = (rng() % 4 != 0) ? feasible.front() : feasible[rng() % feasible.size()];
        }
        RestrictedPartition part = partition_machines(inst, a, prof.p_max, prof.delta);
        if (part.m_plus.empty()) continue;
        ++overloaded_states;

        AssignmentGraph g = build_assignment_graph(inst, a, prof.p_max);
        auto path = path_exists(g, part.m_plus, part.m_minus);
        REQUIRE(path);  // an overloaded machine always reaches an underloaded one

        Assignment pushed = push_along_path(inst, a, *path, prof.p_max);
        // only machines on the path change load
        std::vector<Time> before = machine_loads(inst, a), after = machine_loads(inst, pushed);
        std::vector<char> on_path(inst.machines(), 0);
        for (int i : path->machines) on_path[i] = 1;
        for (int i = 0; i < inst.machines(); ++i)
            if (!on_path[i]) CHECK(before[i] == after[i]);
        // the sink stays out of m_plus: it had <= delta and gains <= w
        CHECK(Rational(after[path->machines.back()]) <= prof.delta + Rational(prof.p_max));
    }
}
