#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tightspan/core.hpp"
#include "tightspan/generator.hpp"

using namespace tightspan;

namespace {

Instance make_instance(const std::vector<std::vector<Time>>& rows, int machines) {
    Instance inst(machines, static_cast<int>(rows.size()));
    for (int j = 0; j < static_cast<int>(rows.size()); ++j)
        for (int i = 0; i < machines; ++i) inst.at(j, i) = rows[j][i];
    return inst;
}

// Independent load computation used to cross-check the library's.
std::vector<Time> brute_loads(const Instance& inst, const Assignment& a) {
    std::vector<Time> loads(inst.machines(), 0);
    for (int i = 0; i < inst.machines(); ++i)
        for (int j = 0; j < inst.jobs(); ++j)
            if (a[j] == i) loads[i] += inst.at(j, i);
    return loads;
}

}  // namespace

TEST_CASE("load sums assigned processing times") {
    Instance inst = make_instance({{2, 4}, {3, 2}}, 2);
    Assignment both{{0, 0}};
    CHECK(load(inst, both, 0) == 5);
    CHECK(load(inst, both, 1) == 0);
    CHECK(brute_loads(inst, both) == machine_loads(inst, both));

    Assignment single{{0, 1}};
    CHECK(load(inst, single, 0) == 2);
    CHECK(load(inst, single, 1) == 2);
    CHECK_THROWS_AS(load(inst, single, 2), Error);

    Instance one = make_instance({{5}}, 1);
    CHECK(load(one, Assignment{0}, 0) == 5);
}

TEST_CASE("makespan is the max load") {
    Instance inst = make_instance({{2, 4}, {3, 2}}, 2);
    CHECK(makespan(inst, Assignment{0, 1}) == 2);
    CHECK(makespan(inst, Assignment{0, 0}) == 5);

    Instance three = make_instance({{1, kInfeasible, 7}}, 3);
    CHECK(makespan(three, Assignment{2}) == 7);
}

TEST_CASE("average load is exact") {
    Instance inst = make_instance({{2, 4}, {3, 2}}, 2);
    CHECK(average_load(inst, Assignment{0, 1}) == Rational(2));
    CHECK(average_load(inst, Assignment{0, 0}) == Rational(5, 2));

    // restricted: independent of the assignment
    Instance restricted = make_instance(
        {{4, 4, 4}, {3, 3, 3}, {2, 2, 2}, {1, 1, 1}}, 3);
    CHECK(average_load(restricted, Assignment{0, 0, 0, 0}) == Rational(10, 3));
    CHECK(average_load(restricted, Assignment{0, 1, 2, 1}) == Rational(10, 3));
}

TEST_CASE("legal respects the threshold and infeasible entries") {
    Instance inst = make_instance({{3, kInfeasible, 7}}, 3);
    CHECK(legal(inst, 0, 0, 3));       // boundary inclusive
    CHECK_FALSE(legal(inst, 1, 0, 100));
    CHECK_FALSE(legal(inst, 2, 0, 5));
}

TEST_CASE("feasibility factor") {
    // legal-set sizes {2, 3, 4} over 4 machines -> 1/2
    Instance inst(4, 3);
    for (int i = 0; i < 2; ++i) inst.at(0, i) = 5;
    for (int i = 0; i < 3; ++i) inst.at(1, i) = 5;
    for (int i = 0; i < 4; ++i) inst.at(2, i) = 5;
    CHECK(feasibility_factor(inst, 5) == Rational(1, 2));
    CHECK(feasibility_factor(inst, 4) == Rational(0));  // job rows all above T

    Instance full = make_instance({{1, 2}, {2, 1}}, 2);
    CHECK(feasibility_factor(full, 2) == Rational(1));
}

TEST_CASE("feasibility factor is non-decreasing in T") {
    Instance inst = generate({.m = 5, .n = 6, .k = 3, .p_max = 30, .seed = 11, .restricted = false});
    Rational prev(0);
    for (Time t = 1; t <= 31; ++t) {
        Rational cur = feasibility_factor(inst, t);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("load conservation over random assignments") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        Instance inst = generate({.m = 4, .n = 10, .k = 2, .p_max = 50,
                                  .seed = 1000 + static_cast<std::uint64_t>(trial), .restricted = false});
        Assignment a(inst.jobs());
        for (int j = 0; j < inst.jobs(); ++j) {
            std::vector<int> feasible;
            for (int i = 0; i < inst.machines(); ++i)
                if (inst.finite(j, i)) feasible.push_back(i);
            a[j] = feasible[rng() % feasible.size()];
        }
        Time direct = 0;
        for (int j = 0; j < inst.jobs(); ++j) direct += inst.at(j, a[j]);
        Time summed = 0;
        for (Time l : machine_loads(inst, a)) summed += l;
        CHECK(summed == direct);
        CHECK(machine_loads(inst, a) == brute_loads(inst, a));

        // removing one job changes exactly its machine's load by exactly p
        int victim = static_cast<int>(rng() % inst.jobs());
        std::vector<Time> before = machine_loads(inst, a);
        std::vector<int> others;
        for (int i = 0; i < inst.machines(); ++i)
            if (inst.finite(victim, i) && i != a[victim]) others.push_back(i);
        if (!others.empty()) {
            int target = others[rng() % others.size()];
            Assignment moved = a;
            moved[victim] = target;
            std::vector<Time> after = machine_loads(inst, moved);
            CHECK(before[a[victim]] - after[a[victim]] == inst.at(victim, a[victim]));
            CHECK(after[target] - before[target] == inst.at(victim, target));
            for (int i = 0; i < inst.machines(); ++i)
                if (i != a[victim] && i != target) CHECK(before[i] == after[i]);
        }
    }
}

TEST_CASE("restricted detection and profile") {
    Instance restricted = make_instance({{4, kInfeasible, 4}, {2, 2, kInfeasible}}, 3);
    CHECK(restricted.restricted());
    RestrictedProfile prof = restricted_profile(restricted);
    CHECK(prof.p_max == 4);
    CHECK(prof.total == 6);
    CHECK(prof.k_min == 2);
    CHECK(prof.epsilon == Rational(2, 3));
    CHECK(prof.avg_load == Rational(2));
    CHECK(prof.delta == Rational(3));  // L/eps == total/k_min exactly
    CHECK(prof.delta == prof.avg_load / prof.epsilon);
    CHECK(prof.q == Rational(1, 2));

    Instance general = make_instance({{4, 5}}, 2);
    CHECK_FALSE(general.restricted());
    CHECK_THROWS_AS(restricted_profile(general), Error);
}

TEST_CASE("instance validation") {
    Instance inst(2, 1);
    CHECK_THROWS_AS(inst.validate(), Error);  // no feasible machine
    inst.at(0, 0) = 3;
    CHECK_NOTHROW(inst.validate());
    inst.at(0, 1) = kMaxProcTime + 1;
    CHECK_THROWS_AS(inst.validate(), Error);
    CHECK_THROWS_AS(Instance(0, 1), Error);
}

TEST_CASE("assignment validity") {
    Instance inst = make_instance({{2, kInfeasible}}, 2);
    CHECK(assignment_valid(inst, Assignment{0}));
    CHECK_FALSE(assignment_valid(inst, Assignment{1}));  // infeasible target
    CHECK_FALSE(assignment_valid(inst, Assignment{}));     // not total
}
