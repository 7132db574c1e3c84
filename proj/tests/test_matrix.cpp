#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "resfin/berg.hpp"
#include "resfin/fixtures.hpp"
#include "resfin/matrix_approx.hpp"

using namespace resfin;

TEST_CASE("rounding to the nearest projection") {
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = 0.9;
    a(1, 1) = 0.1;
    ProjectionRounding r = round_to_projection(a, 0.1);
    CHECK(std::abs(r.q(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(r.q(1, 1)) < 1e-12);
    CHECK(std::abs(r.distance - 0.1) < 1e-12);

    Mat spread = Mat::Identity(2, 2) * 0.5;
    try {
        round_to_projection(spread, 0.05);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::SpectralGap);
    }
}

TEST_CASE("cutting a projection off another") {
    Mat q = Mat::Zero(3, 3);
    q(0, 0) = 1;
    CutResult zero = cut_projection(Mat::Zero(3, 3), q, 0.5);
    CHECK(zero.delta == 0);
    CHECK(operator_norm(zero.q - q) < 1e-12);

    // principal angle fixture: q along (sin t, cos t), p = span e_0
    double t = std::asin(0.01);
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 1;
    Eigen::VectorXcd u(2);
    u << std::sin(t), std::cos(t);
    Mat q1 = u * u.adjoint();
    CutResult c = cut_projection(p, q1, 0.5);
    CHECK(std::abs(c.delta - 0.01) < 1e-10);
    CHECK(c.moved <= 6 * c.delta);
    CHECK(c.moved > 0);
    Mat e2 = Mat::Zero(2, 2);
    e2(1, 1) = 1;
    CHECK(operator_norm(c.q - e2) < 1e-10);

    try {
        cut_projection(p, q1, 0.005);  // cap below the measured overlap
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::DeltaExceeded);
    }
}

TEST_CASE("seeded cut trials respect the proof chain") {
    std::mt19937_64 rng(12021);
    std::uniform_int_distribution<int> dim_d(2, 16);
    std::uniform_real_distribution<double> scale_d(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        int d = dim_d(rng);
        std::uniform_int_distribution<int> rank_d(1, d - 1);
        int rp = rank_d(rng), rq = rank_d(rng);
        Mat u = random_unitary(rng, d);
        Mat p = Mat::Zero(d, d), q0 = Mat::Zero(d, d);
        for (int i = 0; i < rp; ++i) p(i, i) = 1;
        for (int i = 0; i < rq && d - 1 - i >= rp; ++i) q0(d - 1 - i, d - 1 - i) = 1;
        p = u * p * u.adjoint();
        q0 = u * q0 * u.adjoint();
        Mat k = hermitian_noise(rng, d, scale_d(rng) * 0.005);
        Mat rot = polar_unitary(Mat::Identity(d, d) + Cplx(0, 1) * k);
        Mat q = rot * q0 * rot.adjoint();
        q = (q + q.adjoint()) / 2.0;
        CutResult c = cut_projection(p, q, 2e-2);
        CHECK(c.moved <= 6 * c.delta + 1e-9);
        CHECK(c.q_minus_a <= 3 * c.delta + 1e-9);
        CHECK(c.a_residual <= 9 * c.delta + 1e-9);
    }
}

TEST_CASE("orthogonalizing a noisy partition of unity") {
    std::mt19937_64 rng(777);
    int d = 16, n = 4;
    std::vector<Mat> exact;
    for (int i = 0; i < n; ++i) {
        Mat m = Mat::Zero(d, d);
        for (int j = 4 * i; j < 4 * i + 4; ++j) m(j, j) = 1;
        exact.push_back(m);
    }
    OrthogonalizedFamily fam0 = orthogonalize_family(exact);
    CHECK(fam0.max_deviation < 1e-10);

    std::vector<Mat> noisy = exact;
    Mat drift = Mat::Zero(d, d);
    for (Mat& m : noisy) {
        Mat h = hermitian_noise(rng, d, 5e-4);
        m += h;
        drift += h;
    }
    for (Mat& m : noisy) m -= drift / double(n);
    OrthogonalizedFamily fam = orthogonalize_family(noisy);
    CHECK(fam.max_deviation <= fam.bound);
    Mat s = Mat::Zero(d, d);
    for (const Mat& m : fam.p) s += m;
    CHECK(operator_norm(s - Mat::Identity(d, d)) < 1e-10);

    std::vector<Mat> bad = exact;
    bad[0] *= 0.5;
    try {
        orthogonalize_family(bad);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::CascadeExceeded);
    }
}

TEST_CASE("polar factors") {
    Mat v = Mat::Zero(2, 2);
    v(0, 1) = 1;
    v(1, 0) = 1;
    CHECK(operator_norm(polar_unitary(v) - v) < 1e-12);
    Mat w = Mat::Zero(2, 2);
    w(0, 0) = 1.01;
    w(1, 1) = 0.99;
    CHECK(operator_norm(polar_unitary(w) - Mat::Identity(2, 2)) < 1e-12);
    try {
        polar_unitary(Mat::Zero(2, 2));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::Singular);
    }
}

TEST_CASE("matching diagonal families by permutation") {
    auto indicator = [](int d, std::vector<int> idx) {
        Mat m = Mat::Zero(d, d);
        for (int i : idx) m(i, i) = 1;
        return m;
    };
    std::vector<Mat> P = {indicator(6, {0, 1, 2}), indicator(6, {3, 4}), indicator(6, {5})};
    CHECK((match_permutation(P, P) == std::vector<int>{0, 1, 2, 3, 4, 5}));
    std::vector<Mat> Q = {indicator(6, {1, 3, 5}), indicator(6, {0, 4}), indicator(6, {2})};
    std::vector<int> perm = match_permutation(P, Q);
    CHECK((perm == std::vector<int>{1, 3, 5, 0, 4, 2}));
    Mat w = permutation_matrix(perm);
    for (size_t i = 0; i < P.size(); ++i)
        CHECK(operator_norm(w * P[i] * w.adjoint() - Q[i]) == 0);
    try {
        match_permutation({indicator(6, {0, 1, 2}), indicator(6, {3, 4, 5})},
                          {indicator(6, {0, 1}), indicator(6, {2, 3, 4, 5})});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::TraceMismatch);
        CHECK(e.detail() == "family member 0");
    }
}

TEST_CASE("extracting an action from a clean or noisy tuple") {
    std::mt19937_64 rng(4242);
    int d = 8;
    std::vector<int> t1 = {1, 2, 3, 4, 5, 6, 7, 0};
    std::vector<int> t2 = {0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(t2.begin(), t2.end(), rng);
    FiniteAction a = validate_action_description(d, {t1, t2});
    MatrixTuple tup = encode_action(a);
    ExtractedAction ex = extract_finite_action(tup);
    CHECK(ex.action.generators[0] == t1);
    CHECK(ex.action.generators[1] == t2);

    MatrixTuple noisy = tup;
    perturb_tuple(rng, noisy, 1e-3);
    ExtractedAction ex2 = extract_finite_action(noisy);
    CHECK(ex2.action.generators[0] == t1);
    CHECK(ex2.action.generators[1] == t2);
    CHECK((ex2.label_of == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
    CHECK(ex2.delta > 0);

    MatrixTuple hot = tup;
    hot.unitaries[0] *= std::sqrt(1.2);  // unitary defect 0.2 breaks the gate
    try {
        extract_finite_action(hot);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::ThresholdExceeded);
        CHECK(e.detail().find(">= 1/4") != std::string::npos);
    }
}

TEST_CASE("interpolated shift unitary on a synthetic orbit") {
    long r = 17, s = -72;
    long W = 4 * (r - s);
    OrbitRepresentation orb;
    orb.lo = -(W * 2) / 3;
    orb.values.assign(2, std::vector<Cplx>(size_t(W)));
    const double pi = std::acos(-1.0);
    for (long j = 0; j < W; ++j) {
        long idx = orb.lo + j;
        double x = double(((55 * idx) % 89 + 89) % 89) / 89.0;
        orb.values[0][size_t(j)] = Cplx(1.0, 0.0);
        orb.values[1][size_t(j)] = Cplx(std::cos(2 * pi * x), std::sin(2 * pi * x));
    }
    for (int n : {4, 8}) {
        BergReport rep = berg_projection(orb, n, r, s);
        CHECK(rep.u_minus_v < 4.0 / n);
        CHECK(rep.pv_comm <= 1e-12);
        CHECK(rep.pu_comm < 8.0 / n);
        CHECK(rep.pf_comm < 2.0 / n);
    }
    // interpolation blocks must fit inside the window
    try {
        berg_projection(orb, 17, r, s);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == errk::PlacementError);
    }
}
