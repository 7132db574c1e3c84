#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "resfin/hash.hpp"
#include "resfin/rational.hpp"
#include "resfin/symbolic.hpp"
#include "resfin/system.hpp"
#include "resfin/word.hpp"

using namespace resfin;

TEST_CASE("rational text round trip") {
    CHECK(rat_str(Rational(3, 4)) == "3/4");
    CHECK(rat_str(Rational(-3, 4)) == "-3/4");
    CHECK(rat_str(Rational(7)) == "7");
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-12") == Rational(-12));
    CHECK(parse_rational("1.25e-3") == Rational(1, 800));
    CHECK(parse_rational("0.5") == Rational(1, 2));
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("circle distance and mod1") {
    CHECK(circle_dist(Rational(1, 8), Rational(7, 8)) == Rational(1, 4));
    CHECK(circle_dist(Rational(0), Rational(1, 2)) == Rational(1, 2));
    CHECK(circle_dist(Rational(5, 4), Rational(1, 4)) == 0);
    CHECK(mod1(Rational(-1, 4)) == Rational(3, 4));
    CHECK(pow2neg(3) == Rational(1, 8));
    CHECK(resolution_radius(Rational(1, 8)) == 3);
    CHECK(resolution_radius(Rational(1)) == 0);
    CHECK(resolution_radius(Rational(3, 16)) == 3);
}

TEST_CASE("word reduction and order") {
    CHECK(reduce({1, -1}).empty());
    CHECK(reduce({1, 2, -2, -1}).empty());
    CHECK(wmul(parse_word("ab", 2), parse_word("Ba", 2)) == parse_word("aa", 2));
    CHECK(winv(parse_word("ab", 2)) == parse_word("BA", 2));
    CHECK(word_str(winv(parse_word("ab", 2))) == "BA");
    // a < a^-1 < b < b^-1, shorter first
    CHECK(parse_word("a", 2) < parse_word("A", 2));
    CHECK(parse_word("A", 2) < parse_word("b", 2));
    CHECK(parse_word("b", 2) < parse_word("aa", 2));
    CHECK_THROWS(parse_word("aA", 2));
    CHECK(sphere(2, 1).size() == 4);
    CHECK(sphere(2, 2).size() == 12);
    CHECK(ball(2, 2).size() == 17);
}

TEST_CASE("hash is stable") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == fnv1a64("a"));
    CHECK(fnv1a64("a") != fnv1a64("b"));
}

TEST_CASE("sample validation rejects non-metrics") {
    FiniteSampleSystem s;
    s.n = 2;
    s.dist = {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
    s.map_index = {1, 0};
    CHECK_NOTHROW(validate_system(SystemDescriptor(s)));

    FiniteSampleSystem dup = s;
    dup.dist[0][1] = dup.dist[1][0] = Rational(0);
    CHECK_THROWS_AS(validate_system(SystemDescriptor(dup)), Error);

    FiniteSampleSystem tri;
    tri.n = 3;
    tri.dist.assign(3, std::vector<Rational>(3, Rational(0)));
    tri.dist[0][1] = tri.dist[1][0] = Rational(1);
    tri.dist[1][2] = tri.dist[2][1] = Rational(1);
    tri.dist[0][2] = tri.dist[2][0] = Rational(3);  // 3 > 1 + 1
    tri.map_index = {0, 1, 2};
    CHECK_THROWS_AS(validate_system(SystemDescriptor(tri)), Error);

    FiniteSampleSystem bare = s;
    bare.map_index.clear();
    CHECK_THROWS_AS(validate_system(SystemDescriptor(bare)), Error);
}

TEST_CASE("shift points and translation") {
    ZShiftSystem z{2, {}};
    EvSeqPoint p;
    p.core = {0, 1};
    p.left = {0, 1};
    p.right = {0, 1};
    p.start = 0;
    SystemDescriptor sys = z;
    validate_point(sys, p);
    Point moved = apply_generator(sys, 0, +1, p);
    // translation drops distance by one halving per step apart
    CHECK(distance(sys, p, moved) == Rational(1));
    Point back = apply_generator(sys, 0, -1, moved);
    CHECK(distance(sys, p, back) == 0);
}

TEST_CASE("forbidden words are rejected in shift points") {
    ZShiftSystem g{2, {{1, 1}}};
    SystemDescriptor sys = g;
    EvSeqPoint p;
    p.core = {1, 1};
    p.left = {0};
    p.right = {0};
    p.start = 0;
    CHECK_THROWS_AS(validate_point(sys, p), Error);
}

TEST_CASE("group ring validation") {
    GroupRingElement f;
    f.terms = {{0, Int(2)}};
    CHECK_NOTHROW(validate_group_ring(f));
    GroupRingElement dupterm;
    dupterm.terms = {{0, Int(1)}, {0, Int(1)}};
    CHECK_THROWS_AS(validate_group_ring(dupterm), Error);
}
