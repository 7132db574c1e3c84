#include <doctest.h>

#include "resfin/fixtures.hpp"
#include "resfin/paradox.hpp"

using namespace resfin;

namespace {

std::vector<int> whole(const ActionContext& ctx) {
    std::vector<int> t;
    for (int i = 0; i < ctx.base_count; ++i) t.push_back(i);
    return t;
}

}  // namespace

TEST_CASE("boundary context doubles with two-for-one pieces") {
    ActionContext ctx = make_context(SystemDescriptor(FrBoundarySystem{2}), 1, ball_words(2, 2));
    auto cert = decide_paradoxical(ctx, whole(ctx), 2, 1);
    REQUIRE(cert.has_value());
    CHECK(cert->k == 2);
    CHECK(cert->l == 1);
    CHECK(verify_certificate(ctx, *cert));
    // tampering breaks verification
    ParadoxCertificate bent = *cert;
    bent.pieces.pop_back();
    CHECK_FALSE(verify_certificate(ctx, bent));
    // a certificate is pinned to its context
    ParadoxCertificate stale = *cert;
    stale.context_hash ^= 1;
    CHECK_THROWS_AS(verify_certificate(ctx, stale), Error);
    // and the measure side must be empty
    CHECK_FALSE(invariant_measure_lp(ctx, whole(ctx)).has_value());
}

TEST_CASE("amenable shift context carries a measure and no certificate") {
    ActionContext ctx = make_context(SystemDescriptor(full_shift(2)), 1, ball_words(1, 2));
    CHECK_FALSE(decide_paradoxical(ctx, whole(ctx), 2, 1).has_value());
    auto mu = invariant_measure_lp(ctx, whole(ctx));
    REQUIRE(mu.has_value());
    CHECK(measure_of(ctx, *mu, whole(ctx)) == 1);
    for (const Rational& w : mu->weights) CHECK(w >= 0);
}

TEST_CASE("transitive finite contexts force the uniform measure") {
    std::vector<int> rot = {1, 2, 3, 4, 0};
    ActionContext ctx = make_context_finite(validate_action_description(5, {rot}), ball_words(1, 1));
    auto mu = invariant_measure_lp(ctx, whole(ctx));
    REQUIRE(mu.has_value());
    for (const Rational& w : mu->weights) CHECK(w == Rational(1, 5));
    CHECK_FALSE(decide_paradoxical(ctx, whole(ctx), 2, 1).has_value());
}

TEST_CASE("equidecompose matches a set with itself through the identity") {
    ActionContext ctx = make_context(SystemDescriptor(FrBoundarySystem{2}), 1, ball_words(2, 1));
    std::vector<int> P = {0, 1};
    auto match = equidecompose(ctx, P, P);
    REQUIRE(match.has_value());
    for (const auto& [atom, tr] : match->assignment) CHECK(ctx.translators[size_t(tr)].empty());
}

TEST_CASE("boundary complement matches a single cylinder") {
    // pieces C(a), C(b), C(b^-1) each shift into C(a) under left
    // multiplication by a; together they tile it
    ActionContext ctx = make_context(SystemDescriptor(FrBoundarySystem{2}), 1, ball_words(2, 2));
    // base atoms at window 1 are C(a), C(a^-1), C(b), C(b^-1) in word order
    std::vector<int> P = {0, 2, 3};
    std::vector<int> Q = {0};
    auto match = equidecompose(ctx, P, Q);
    REQUIRE(match.has_value());
    Word a = parse_word("a", 2);
    for (const auto& [atom, tr] : match->assignment) CHECK(ctx.translators[size_t(tr)] == a);
}

TEST_CASE("measure obstruction blocks unbalanced matchings") {
    // on a finite cycle every invariant measure is uniform, so {0} and {0,1}
    // can never be equidecomposable
    std::vector<int> rot = {1, 2, 3, 0};
    ActionContext ctx = make_context_finite(validate_action_description(4, {rot}), ball_words(1, 2));
    CHECK_FALSE(equidecompose(ctx, {0}, {0, 1}).has_value());
}

TEST_CASE("context caps respect the environment atom bound") {
    DensityGridCaps caps;
    caps.max_patterns = 4;
    CHECK_THROWS_AS(
        make_context(SystemDescriptor(FrBoundarySystem{2}), 2, ball_words(2, 2), caps), Error);
}
