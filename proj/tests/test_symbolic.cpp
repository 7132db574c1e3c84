#include <doctest.h>

#include "resfin/clopen.hpp"
#include "resfin/fixtures.hpp"
#include "resfin/symbolic.hpp"

using namespace resfin;

TEST_CASE("cyclic quotient arithmetic") {
    FiniteQuotient q = cyclic_quotient(5);
    CHECK(q.order == 5);
    CHECK(quotient_apply(q, 1, 0) == 1);
    CHECK(quotient_apply(q, -1, 0) == 4);
    CHECK(quotient_eval(q, parse_word("aaa", 1), 1) == 4);
    FiniteQuotient bad = q;
    bad.gen_images[0][2] = 0;
    CHECK_THROWS_AS(validate_quotient(bad), Error);
}

TEST_CASE("boundary cylinder translation") {
    FrBoundarySystem bd{2};
    Word a = parse_word("a", 2);
    // a * C(a) stays inside C(a): every target cylinder starts with a
    for (const Word& w : boundary_translate_cylinders(2, a, a))
        CHECK(w.letters[0] == 1);
    // a * C(a^-1) spreads across everything outside C(a^-1)
    auto spread = boundary_translate_cylinders(2, a, parse_word("A", 2));
    CHECK(spread.size() > 1);

    ClopenSet ca = boundary_translate(bd, a, a);
    ClopenSet cb = boundary_translate(bd, a, parse_word("A", 2));
    int window = std::max(ca.window, cb.window);
    SystemDescriptor sys = bd;
    ClopenSet uni = clopen_union(clopen_refine(sys, ca, window), clopen_refine(sys, cb, window));
    // a(C(a) u C(a^-1)) = aC(a) u aC(A) = full boundary
    auto all = atoms_at(sys, uni.window);
    CHECK(uni.atoms.size() == all.size());
}

TEST_CASE("translating a clopen set by inverse letters round-trips") {
    FrBoundarySystem bd{2};
    SystemDescriptor sys = bd;
    ClopenSet cb = boundary_translate(bd, parse_word("b", 2), parse_word("b", 2));
    ClopenSet moved = boundary_translate_set(bd, parse_word("a", 2), cb);
    ClopenSet back = boundary_translate_set(bd, parse_word("A", 2), moved);
    ClopenSet cb_ref = clopen_refine(sys, cb, back.window);
    CHECK(back.atoms == cb_ref.atoms);
}

TEST_CASE("circulant matrices and fixed point counts") {
    IntMatrix m = circulant_matrix(doubling_ring(), 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m[size_t(i)][size_t(j)] == (i == j ? 2 : 0));

    FixedPointGroup g = algebraic_fixed_points(doubling_ring(), 4);
    CHECK(g.order == 16);
    CHECK((g.factors == std::vector<Int>{2, 2, 2, 2}));

    FixedPointGroup lap = algebraic_fixed_points(laplace_ring(), 5);
    CHECK(lap.order == 121);
    Int prod(1);
    for (const Int& f : lap.factors) prod *= f;
    CHECK(prod == lap.order);
}

TEST_CASE("degenerate circulants are flagged infinite") {
    GroupRingElement f;  // 1 - t annihilates constants
    f.terms = {{0, Int(1)}, {1, Int(-1)}};
    try {
        algebraic_fixed_points(f, 4);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::Infinite);
    }
}

TEST_CASE("character points satisfy the relation") {
    auto pts = character_points(doubling_ring(), 2);
    CHECK(pts.size() == 4);
    for (const auto& p : pts)
        for (const Rational& c : p) CHECK((c == 0 || c == Rational(1, 2)));
}

TEST_CASE("fourier precheck separates the rings") {
    CHECK(fourier_precheck(doubling_ring()) == FourierVerdict::Ok);
    CHECK(fourier_precheck(laplace_ring()) == FourierVerdict::Ok);
    GroupRingElement z;  // 1 + t vanishes at the half turn
    z.terms = {{0, Int(1)}, {1, Int(1)}};
    CHECK(fourier_precheck(z) != FourierVerdict::Ok);
}

TEST_CASE("algebraic model witness embeds exactly") {
    Witness w = algebraic_model_witness(doubling_ring(), 4, Rational(1, 4));
    CHECK(w.pass());
    CHECK(w.equivariance_defect == 0);
}

TEST_CASE("bernoulli model structure") {
    Witness w = bernoulli_model(2, cyclic_quotient(3), Rational(1, 2));
    CHECK(w.action.size == 8);  // all labelings of Z/3 by two letters
    CHECK(w.generator_scope == std::vector<int>{0});
}
