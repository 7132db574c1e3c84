#include <doctest.h>

#include <algorithm>

#include "resfin/fixtures.hpp"
#include "resfin/zsystems.hpp"

using namespace resfin;

TEST_CASE("eps graph edges follow the image distances") {
    FiniteSampleSystem s = rotation_sample(8);
    EpsGraph g = build_eps_graph(s, Rational(1, 16));
    for (int x = 0; x < 8; ++x) {
        REQUIRE(g.out[size_t(x)].size() == 1);
        CHECK(g.out[size_t(x)][0] == (x + 1) % 8);
        CHECK(g.has_edge(x, (x + 1) % 8));
        CHECK_FALSE(g.has_edge(x, x));
    }
    // widen epsilon past the step length: self and neighbour edges appear
    EpsGraph wide = build_eps_graph(s, Rational(1, 7));
    CHECK(wide.out[0].size() > 1);
}

TEST_CASE("chain recurrence on a hand-built graph") {
    // two loops joined by a one-way bridge: bridge node is transient
    EpsGraph g;
    g.nodes = 5;
    g.epsilon = Rational(1, 2);
    g.out = {{1}, {0, 2}, {3}, {4}, {3}};
    std::vector<int> rec = chain_recurrent_set(g);
    std::sort(rec.begin(), rec.end());
    CHECK((rec == std::vector<int>{0, 1, 3, 4}));
}

TEST_CASE("chain models need a cycle somewhere") {
    // three points drifting right with no wrap: empty recurrent set
    FiniteSampleSystem line;
    line.n = 3;
    line.dist.assign(3, std::vector<Rational>(3, Rational(0)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) line.dist[size_t(i)][size_t(j)] = Rational(std::abs(i - j));
    line.image_dist.assign(3, std::vector<Rational>(3, Rational(0)));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            line.image_dist[size_t(i)][size_t(j)] = Rational(std::abs(i + 1 - j));
    CHECK(chain_recurrent_set(build_eps_graph(line, Rational(1, 2))).empty());
    CHECK_THROWS_AS(model_from_chains(line, Rational(1, 2)), Error);
}

TEST_CASE("model from chains re-verifies") {
    FiniteSampleSystem s = rotation_sample(5);
    Witness w = model_from_chains(s, Rational(1, 8));
    CHECK(w.equivariance_defect < Rational(1, 8));
    Witness re = check_witness(w.system, w.action, w.zeta, w.generator_scope, Rational(1, 8));
    CHECK(re.equivariance_defect == w.equivariance_defect);
    CHECK(re.density_defect == w.density_defect);
}

TEST_CASE("compressible clopen on the glued line") {
    SystemDescriptor sys = compactified_translation();
    auto u = find_compressible_clopen(sys, 1);
    REQUIRE(u.has_value());
    auto atoms = atoms_at(sys, u->window);
    CompactifiedZSystem ct = compactified_translation();
    int plus = ct.class_of(0, +1);
    for (int id : u->atoms) {
        const Atom& a = atoms[size_t(id)];
        bool forward = a.cz_tail ? a.cz_cls == plus : a.cz_pos >= 0;
        CHECK(forward);
    }
}

TEST_CASE("full shifts admit no compressible clopen set") {
    CHECK_FALSE(find_compressible_clopen(SystemDescriptor(full_shift(2)), 1).has_value());
    CHECK_FALSE(find_compressible_clopen(SystemDescriptor(full_shift(2)), 2).has_value());
    CHECK_FALSE(find_compressible_clopen(SystemDescriptor(golden_mean_shift()), 2).has_value());
}

TEST_CASE("recurrence scan finds the least pair") {
    AlgebraicZSystem sys = rotation_system();
    TorusPeriodicPoint x = rotation_orbit_point(55, 89);
    // 55 * 21 = -2 mod 89, so (9, 12) is the first pair below 1/32
    RecurrenceVerdict v = recurrence_scan(SystemDescriptor(sys), x, Rational(1, 32), 9, 200);
    REQUIRE(v.found);
    CHECK(v.n == 9);
    CHECK(v.m == 12);
    // nothing returns within a tiny horizon
    RecurrenceVerdict none = recurrence_scan(SystemDescriptor(sys), x, Rational(1, 128), 33, 40);
    CHECK_FALSE(none.found);
}
