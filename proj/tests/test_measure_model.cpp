#include <doctest.h>

#include <algorithm>

#include "resfin/fixtures.hpp"
#include "resfin/measure_model.hpp"

using namespace resfin;

namespace {

// sigma must send the elements over each partition atom p exactly onto the
// elements whose cell sits inside T^-1 of p
bool wiring_exact(const ModelFromMeasure& mm) {
    const std::vector<int>& gen = mm.witness.action.generators[0];
    int blocks = 0;
    for (int b : mm.block_of) blocks = std::max(blocks, b + 1);
    for (int p = 0; p < blocks; ++p) {
        std::vector<int> mapped, dst;
        for (size_t e = 0; e < gen.size(); ++e) {
            if (mm.block_of[size_t(mm.cell_of[e])] == p) mapped.push_back(gen[e]);
            if (mm.image_block_of[size_t(mm.cell_of[e])] == p) dst.push_back(int(e));
        }
        std::sort(mapped.begin(), mapped.end());
        if (mapped != dst) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("uniform product measure models exactly") {
    ModelFromMeasure mm = measure_to_model(SystemDescriptor(ZShiftSystem{2, {}}), 1,
                                           {Rational(1, 4), Rational(1, 4), Rational(1, 4),
                                            Rational(1, 4)},
                                           Rational(1, 2));
    CHECK(mm.denominator == 4);
    CHECK(mm.witness.action.size == 4);
    CHECK(mm.radius == 0);
    CHECK(mm.witness.equivariance_defect == 0);
    CHECK(wiring_exact(mm));
}

TEST_CASE("one-atom partition gives the one-point model") {
    ModelFromMeasure mm =
        measure_to_model(SystemDescriptor(ZShiftSystem{2, {}}), 0, {Rational(1)}, Rational(1));
    CHECK(mm.witness.action.size == 1);
    CHECK(mm.witness.equivariance_defect == 0);
}

TEST_CASE("golden mean masses round to the least denominator") {
    ModelFromMeasure mm = measure_to_model(SystemDescriptor(golden_mean_shift()), 1,
                                           {Rational(2, 5), Rational(3, 10), Rational(3, 10)},
                                           Rational(1, 2));
    CHECK(mm.cells.size() == 3);  // 00, 01, 10
    CHECK(mm.denominator == 3);
    CHECK(mm.radius == Rational(1, 15));
    CHECK(mm.witness.equivariance_defect == 0);
    CHECK(wiring_exact(mm));
}

TEST_CASE("six-digit masses admit a positive solution nearby") {
    std::vector<Rational> mu = {Rational(343125, 1000000), Rational(242661, 1000000),
                                Rational(242661, 1000000), Rational(171553, 1000000)};
    ModelFromMeasure mm =
        measure_to_model(SystemDescriptor(ZShiftSystem{2, {}}), 1, mu, Rational(1, 2));
    CHECK(mm.denominator <= 10000);
    CHECK(wiring_exact(mm));
    Rational tot(0);
    for (const Rational& v : mm.solution) {
        CHECK(v > 0);
        tot += v;
    }
    CHECK(tot == 1);
    for (size_t q = 0; q < mu.size(); ++q) {
        long cnt = 0;
        for (int c : mm.cell_of)
            if (c == int(q)) ++cnt;
        CHECK(rat_abs(Rational(cnt, mm.witness.action.size) - mu[q]) <= mm.radius);
    }
}

TEST_CASE("finite rotation masses perturb to quarters") {
    ModelFromMeasure mm = measure_to_model(SystemDescriptor(rotation_sample(4)), 0,
                                           {Rational(3, 10), Rational(3, 10), Rational(1, 5),
                                            Rational(1, 5)},
                                           Rational(1));
    CHECK(mm.denominator == 4);
    CHECK(mm.radius == Rational(1, 20));
    CHECK(mm.witness.equivariance_defect == 0);
    CHECK(wiring_exact(mm));
}

TEST_CASE("lift of an exact cycle stays exact") {
    FiniteSampleSystem s = rotation_sample(3);
    ZetaMap zeta = {SamplePoint{0}, SamplePoint{1}, SamplePoint{2}};
    Witness base = check_witness(SystemDescriptor(s), validate_action_description(3, {{1, 2, 0}}),
                                 zeta, {0}, Rational(1, 2));
    auto omega = standard_test_family(SystemDescriptor(s), 0);
    AffineLiftResult lift = affine_lift(base, 4, omega);
    CHECK(lift.count == 15);
    CHECK(lift.base_defect == 0);
    CHECK(lift.lift_defect == 0);
}

TEST_CASE("lift never grows the defect") {
    FiniteSampleSystem s = rotation_sample(3);
    ZetaMap zeta = {SamplePoint{0}, SamplePoint{1}, SamplePoint{2}};
    // identity wiring against the rotation: base defect 1/3
    Witness skew = check_witness(SystemDescriptor(s), validate_action_description(3, {{0, 1, 2}}),
                                 zeta, {0}, Rational(1));
    auto omega = standard_test_family(SystemDescriptor(s), 0);
    AffineLiftResult one = affine_lift(skew, 1, omega);
    CHECK(one.count == 3);
    CHECK(one.lift_defect == one.base_defect);
    AffineLiftResult two = affine_lift(skew, 2, omega);
    CHECK(two.count == 6);
    CHECK(two.lift_defect <= two.base_defect);
    CHECK_THROWS_AS(affine_lift(skew, 0, omega), Error);
}

TEST_CASE("fixed point interpolation on the triangle") {
    PolytopeSystem K;
    K.vertices = {{Rational(1), Rational(0), Rational(0)},
                  {Rational(0), Rational(1), Rational(0)},
                  {Rational(0), Rational(0), Rational(1)}};
    K.A = {{Rational(0), Rational(0), Rational(1)},
           {Rational(1), Rational(0), Rational(0)},
           {Rational(0), Rational(1), Rational(0)}};
    K.b = {Rational(0), Rational(0), Rational(0)};
    std::vector<Rational> w = {Rational(1, 3), Rational(1, 3), Rational(1, 3)};
    FixedPointModel fp = fixed_point_model(K, {K.vertices[0]}, w, 4, Rational(1));
    CHECK(fp.witness.action.size == 9);
    CHECK(fp.bound == Rational(1, 2));
    CHECK(fp.witness.equivariance_defect == Rational(1, 6));

    PolytopeSystem I = K;
    I.A = {{Rational(1), Rational(0), Rational(0)},
           {Rational(0), Rational(1), Rational(0)},
           {Rational(0), Rational(0), Rational(1)}};
    FixedPointModel fpi = fixed_point_model(I, {K.vertices[0]}, K.vertices[0], 3, Rational(1));
    CHECK(fpi.witness.equivariance_defect == 0);

    PolytopeSystem H;  // halving map on [0,1]
    H.vertices = {{Rational(0)}, {Rational(1)}};
    H.A = {{Rational(1, 2)}};
    H.b = {Rational(0)};
    CHECK_THROWS_AS(fixed_point_model(H, {{Rational(1)}}, {Rational(0)}, 4, Rational(1)), Error);
    try {
        fixed_point_model(H, {{Rational(1, 2)}}, {Rational(1, 2)}, 2, Rational(1));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::NotFixed);
    }
}

TEST_CASE("barycentre of an invariant measure is fixed") {
    PolytopeSystem K;
    K.vertices = {{Rational(1), Rational(0), Rational(0)},
                  {Rational(0), Rational(1), Rational(0)},
                  {Rational(0), Rational(0), Rational(1)}};
    K.A = {{Rational(0), Rational(0), Rational(1)},
           {Rational(1), Rational(0), Rational(0)},
           {Rational(0), Rational(1), Rational(0)}};
    K.b = {Rational(0), Rational(0), Rational(0)};
    BarycentreResult bc = barycentre(K, {K.vertices[0], K.vertices[1], K.vertices[2]},
                                     {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
    CHECK(bc.invariant);
    CHECK((bc.point == std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
    BarycentreResult off = barycentre(K, {K.vertices[0]}, {Rational(1)});
    CHECK_FALSE(off.invariant);
}
