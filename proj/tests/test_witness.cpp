#include <doctest.h>

#include "resfin/fixtures.hpp"
#include "resfin/witness.hpp"

using namespace resfin;

namespace {

Witness exact_cycle_witness(int n, const Rational& eps) {
    FiniteSampleSystem s = rotation_sample(n);
    ZetaMap zeta;
    std::vector<int> table;
    for (int i = 0; i < n; ++i) {
        zeta.push_back(SamplePoint{i});
        table.push_back((i + 1) % n);
    }
    return check_witness(SystemDescriptor(s), validate_action_description(n, {table}), zeta, {0},
                         eps);
}

}  // namespace

TEST_CASE("exact cycle witness has zero defects") {
    Witness w = exact_cycle_witness(8, Rational(1, 16));
    CHECK(w.density_defect == 0);
    CHECK(w.equivariance_defect == 0);
    CHECK(w.pass());
}

TEST_CASE("skewed wiring is measured, not hidden") {
    FiniteSampleSystem s = rotation_sample(4);
    ZetaMap zeta = {SamplePoint{0}, SamplePoint{1}, SamplePoint{2}, SamplePoint{3}};
    // identity wiring against a quarter turn: defect is the step length 1/4
    Witness w = check_witness(SystemDescriptor(s), validate_action_description(4, {{0, 1, 2, 3}}),
                              zeta, {0}, Rational(1, 2));
    CHECK(w.equivariance_defect == Rational(1, 4));
    CHECK(w.pass());
    Witness tight = check_witness(SystemDescriptor(s), validate_action_description(4, {{0, 1, 2, 3}}),
                                  zeta, {0}, Rational(1, 4));
    CHECK_FALSE(tight.pass());
}

TEST_CASE("action description validation") {
    CHECK_THROWS_AS(validate_action_description(3, {{0, 0, 1}}), Error);
    CHECK_THROWS_AS(validate_action_description(3, {{0, 1}}), Error);
    FiniteAction a = validate_action_description(3, {{1, 2, 0}});
    CHECK(a.apply(0, +1, 0) == 1);
    CHECK(a.apply(0, -1, 0) == 2);
    CHECK(generated_group_order(a) == 3);
}

TEST_CASE("standard test family kinds per system") {
    auto fam_sample = standard_test_family(SystemDescriptor(rotation_sample(4)), 1);
    CHECK(fam_sample.size() == 4);
    CHECK(fam_sample[0].kind == TestFunction::Kind::PointIndicator);

    auto fam_shift = standard_test_family(SystemDescriptor(full_shift(2)), 1);
    CHECK(fam_shift.size() == 8);  // all 3-letter windows
    CHECK(fam_shift[0].kind == TestFunction::Kind::CylinderZ);
    for (const TestFunction& f : fam_shift) {
        CHECK(sup_norm(SystemDescriptor(full_shift(2)), f) == 1);
        CHECK(lipschitz_constant(SystemDescriptor(full_shift(2)), f) == Rational(2));
    }
}

TEST_CASE("cylinder evaluation on periodic points") {
    ZShiftSystem z{2, {}};
    SystemDescriptor sys = z;
    EvSeqPoint p;
    p.core = {0, 1};
    p.left = {0, 1};
    p.right = {0, 1};
    p.start = 0;
    TestFunction f;
    f.kind = TestFunction::Kind::CylinderZ;
    f.radius = 1;
    f.pattern = {1, 0, 1};
    CHECK(eval_function(sys, f, p) == 1);
    f.pattern = {0, 0, 0};
    CHECK(eval_function(sys, f, p) == 0);
}

TEST_CASE("empirical measure of an exact cycle is invariant") {
    Witness w = exact_cycle_witness(6, Rational(1, 12));
    EmpiricalMeasureResult r = empirical_measure(w, 0);
    CHECK(r.invariance_defect == 0);
    Rational tot(0);
    for (const Rational& v : r.measure.weights) tot += v;
    CHECK(tot == 1);
}

TEST_CASE("merging requires agreement") {
    Witness a = exact_cycle_witness(4, Rational(1, 8));
    Witness b = exact_cycle_witness(4, Rational(1, 4));
    CHECK_THROWS_AS(merge_local_witnesses({a, b}), Error);
    Witness m = merge_local_witnesses({a, a});
    CHECK(m.action.size == 8);
    CHECK(m.equivariance_defect == 0);
}

TEST_CASE("bernoulli witness spot values") {
    Witness pass3 = bernoulli_model(2, cyclic_quotient(3), Rational(1, 2));
    CHECK(pass3.pass());
    Witness fail2 = bernoulli_model(2, cyclic_quotient(2), Rational(1, 2));
    CHECK_FALSE(fail2.pass());
    // equivariance is exact for quotient models either way
    CHECK(pass3.equivariance_defect == 0);
    CHECK(fail2.equivariance_defect == 0);
}
