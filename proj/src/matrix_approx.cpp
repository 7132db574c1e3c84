#include "resfin/matrix_approx.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "resfin/error.hpp"

namespace resfin {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void require_square(const Mat& m, const char* role) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw Error(errk::Mismatch, std::string(role) + " must be a nonempty square matrix");
}

Mat hermitize(const Mat& m) { return (m + m.adjoint()) / 2.0; }

double herm_defect(const Mat& m) { return operator_norm(m - m.adjoint()); }

// Frobenius norm dominates the operator norm; used for the quadratically many
// cross terms, where an upper estimate is all the checks need.
double frob(const Mat& m) { return m.norm(); }

}  // namespace

void Tolerances::set(const std::string& name, double value) {
    if (name == "projection_residual")
        projection_residual = value;
    else if (name == "unitary_residual")
        unitary_residual = value;
    else if (name == "input_slack")
        input_slack = value;
    else if (name == "commutant_zero")
        commutant_zero = value;
    else if (name == "gap")
        gap = value;
    else if (name == "trace_gap")
        trace_gap = value;
    else if (name == "singular_floor")
        singular_floor = value;
    else
        throw Error(errk::Mismatch, "unknown tolerance name: " + name);
}

double operator_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(m.adjoint() * m), Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return top > 0 ? std::sqrt(top) : 0.0;
}

ProjectionRounding round_to_projection(const Mat& a, double gap_tol, const Tolerances& tol) {
    require_square(a, "input");
    if (herm_defect(a) > tol.input_slack)
        throw Error(errk::Mismatch, "input is not self-adjoint within " + fmt(tol.input_slack));
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a));
    if (es.info() != Eigen::Success) throw Error(errk::Mismatch, "eigensolver failed");
    const auto& ev = es.eigenvalues();
    ProjectionRounding out;
    out.q = Mat::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i) - 0.5) < gap_tol)
            throw Error(errk::SpectralGap,
                        "eigenvalue " + fmt(ev(i)) + " within " + fmt(gap_tol) + " of 1/2");
        out.distance = std::max(out.distance, std::min(std::abs(ev(i)), std::abs(ev(i) - 1.0)));
        if (ev(i) > 0.5) out.q += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    out.q = hermitize(out.q);
    if (operator_norm(out.q * out.q - out.q) > tol.projection_residual)
        throw Error(errk::Mismatch, "rounded matrix failed its projection residual");
    return out;
}

CutResult cut_projection(const Mat& p, const Mat& q, double delta_cap, const Tolerances& tol) {
    require_square(p, "p");
    require_square(q, "q");
    if (p.rows() != q.rows()) throw Error(errk::Mismatch, "p and q have different dimensions");
    for (auto [m, role] : {std::pair<const Mat*, const char*>{&p, "p"}, {&q, "q"}}) {
        if (herm_defect(*m) > tol.input_slack || operator_norm((*m) * (*m) - *m) > tol.input_slack)
            throw Error(errk::Mismatch, std::string(role) + " is not a projection within " +
                                            fmt(tol.input_slack));
    }
    CutResult out;
    out.delta = operator_norm(p * q);
    if (out.delta >= delta_cap)
        throw Error(errk::DeltaExceeded,
                    "||pq|| = " + fmt(out.delta) + " >= cap " + fmt(delta_cap));

    Eigen::Index d = p.rows();
    Mat comp = Mat::Identity(d, d) - p;
    Mat a = hermitize(comp * q * comp);
    out.q_minus_a = operator_norm(q - a);
    out.a_residual = operator_norm(a * a - a);
    double slack = 1e-6;
    if (out.q_minus_a > 3 * out.delta + slack)
        throw Error(errk::Mismatch, "||q - a|| = " + fmt(out.q_minus_a) +
                                        " exceeded 3||pq|| = " + fmt(3 * out.delta));
    if (out.a_residual > 9 * out.delta + slack)
        throw Error(errk::Mismatch, "||a^2 - a|| = " + fmt(out.a_residual) +
                                        " exceeded 9||pq|| = " + fmt(9 * out.delta));

    // Round a inside the complement corner of the exact rounding of p, so the
    // output is supported there by construction.
    Mat phat = round_to_projection(p, tol.gap, tol).q;
    Eigen::SelfAdjointEigenSolver<Mat> es(phat);
    if (es.info() != Eigen::Success) throw Error(errk::Mismatch, "eigensolver failed");
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < d; ++i)
        if (es.eigenvalues()(i) < 0.5) keep.push_back(i);
    Mat basis(d, Eigen::Index(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) basis.col(Eigen::Index(i)) = es.eigenvectors().col(keep[i]);
    Mat small = hermitize(basis.adjoint() * q * basis);
    Mat qs = round_to_projection(small, tol.gap, tol).q;
    out.q = hermitize(basis * qs * basis.adjoint());

    out.moved = operator_norm(out.q - q);
    if (out.moved > 6 * out.delta + slack)
        throw Error(errk::Mismatch,
                    "||q' - q|| = " + fmt(out.moved) + " exceeded 6||pq|| = " + fmt(6 * out.delta));
    if (operator_norm(out.q * out.q - out.q) > tol.projection_residual ||
        operator_norm(comp * out.q * comp - out.q) > 2 * tol.input_slack + tol.projection_residual)
        throw Error(errk::Mismatch, "cut output left the complement corner");
    return out;
}

OrthogonalizedFamily orthogonalize_family(const std::vector<Mat>& a, const Tolerances& tol) {
    if (a.empty()) throw Error(errk::Mismatch, "empty family");
    Eigen::Index d = a[0].rows();
    for (auto& m : a) {
        require_square(m, "family member");
        if (m.rows() != d) throw Error(errk::Mismatch, "family members differ in dimension");
    }
    int n = int(a.size());
    Mat sum = Mat::Zero(d, d);
    for (auto& m : a) sum += m;
    double sum_dev = operator_norm(sum - Mat::Identity(d, d));
    if (sum_dev > tol.input_slack)
        throw Error(errk::CascadeExceeded,
                    "family sum differs from the identity by " + fmt(sum_dev));

    double d0 = sum_dev;
    for (int i = 0; i < n; ++i) {
        d0 = std::max(d0, herm_defect(a[size_t(i)]));
        d0 = std::max(d0, operator_norm(a[size_t(i)] * a[size_t(i)] - a[size_t(i)]));
        for (int j = 0; j < n; ++j)
            if (j != i) d0 = std::max(d0, frob(a[size_t(i)] * a[size_t(j)]));
    }

    OrthogonalizedFamily out;
    out.bound = std::max(6.0 * n * d0, 1e-9);
    Mat acc = Mat::Zero(d, d);
    for (int i = 0; i + 1 < n; ++i) {
        Mat comp = Mat::Identity(d, d) - acc;
        Mat corner = hermitize(comp * hermitize(a[size_t(i)]) * comp);
        try {
            out.p.push_back(round_to_projection(corner, tol.gap, tol).q);
        } catch (const Error& e) {
            if (std::string(e.kind()) == errk::SpectralGap)
                throw Error(errk::CascadeExceeded,
                            "stage " + std::to_string(i) + ": " + e.detail());
            throw;
        }
        acc = hermitize(acc + out.p.back());
    }
    out.p.push_back(hermitize(Mat::Identity(d, d) - acc));
    double res = operator_norm(out.p.back() * out.p.back() - out.p.back());
    if (res > tol.projection_residual)
        throw Error(errk::CascadeExceeded,
                    "complement member misses being a projection by " + fmt(res));

    for (int i = 0; i < n; ++i) {
        out.max_deviation = std::max(out.max_deviation, operator_norm(out.p[size_t(i)] - a[size_t(i)]));
        for (int j = i + 1; j < n; ++j) {
            double cross = frob(out.p[size_t(i)] * out.p[size_t(j)]);
            if (cross > tol.projection_residual)
                throw Error(errk::Mismatch, "orthogonalized members still overlap by " + fmt(cross));
        }
    }
    if (out.max_deviation > out.bound)
        throw Error(errk::CascadeExceeded, "deviation " + fmt(out.max_deviation) +
                                               " exceeds the cascade bound " + fmt(out.bound));
    return out;
}

Mat polar_unitary(const Mat& v_raw, const Tolerances& tol) {
    require_square(v_raw, "input");
    Eigen::JacobiSVD<Mat> svd(v_raw, Eigen::ComputeFullU | Eigen::ComputeFullV);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin < tol.singular_floor)
        throw Error(errk::Singular, "smallest singular value " + fmt(smin));
    Mat v = svd.matrixU() * svd.matrixV().adjoint();
    double dprime = operator_norm(v_raw * v_raw.adjoint() - Mat::Identity(v.rows(), v.cols()));
    double movedv = operator_norm(v - v_raw);
    if (movedv > dprime + 1e-9)
        throw Error(errk::Mismatch,
                    "polar factor moved " + fmt(movedv) + " > ||vv*-1|| = " + fmt(dprime));
    if (operator_norm(v * v.adjoint() - Mat::Identity(v.rows(), v.cols())) > tol.unitary_residual)
        throw Error(errk::Mismatch, "polar factor failed its unitary residual");
    return v;
}

namespace {

// state labels of a family of diagonal projections partitioning the identity
std::vector<int> diagonal_labels(const std::vector<Mat>& fam, const Tolerances& tol,
                                 const char* role) {
    Eigen::Index d = fam.at(0).rows();
    for (auto& m : fam) {
        require_square(m, role);
        if (m.rows() != d) throw Error(errk::Mismatch, "family members differ in dimension");
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) {
                double v = std::abs(m(i, j));
                bool diag_ok = i == j && (v < tol.input_slack || std::abs(v - 1) < tol.input_slack);
                if (i != j ? v > tol.input_slack : !diag_ok)
                    throw Error(errk::Mismatch,
                                std::string(role) + " is not a diagonal 0/1 projection");
            }
    }
    std::vector<int> label(size_t(d), -1);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (size_t i = 0; i < fam.size(); ++i)
            if (std::abs(fam[i](j, j)) > 0.5) {
                if (label[size_t(j)] >= 0)
                    throw Error(errk::Mismatch, "diagonal families overlap at state " +
                                                    std::to_string(j));
                label[size_t(j)] = int(i);
            }
        if (label[size_t(j)] < 0)
            throw Error(errk::Mismatch,
                        "diagonal families miss state " + std::to_string(j));
    }
    return label;
}

}  // namespace

std::vector<int> match_permutation(const std::vector<Mat>& P, const std::vector<Mat>& Q,
                                   const Tolerances& tol) {
    if (P.empty() || P.size() != Q.size())
        throw Error(errk::Mismatch, "families must be nonempty and equally long");
    auto lp = diagonal_labels(P, tol, "P member");
    auto lq = diagonal_labels(Q, tol, "Q member");
    if (lp.size() != lq.size()) throw Error(errk::Mismatch, "families differ in dimension");
    std::vector<long> cp(P.size(), 0), cq(P.size(), 0);
    for (int v : lp) ++cp[size_t(v)];
    for (int v : lq) ++cq[size_t(v)];
    for (size_t i = 0; i < P.size(); ++i)
        if (cp[i] != cq[i]) throw Error(errk::TraceMismatch, "family member " + std::to_string(i));

    // smallest image index first, scanning states in order: lexicographically
    // least among permutations matching the labels
    int d = int(lp.size());
    std::vector<char> used(size_t(d), 0);
    std::vector<int> perm(size_t(d), -1);
    for (int j = 0; j < d; ++j) {
        for (int a = 0; a < d; ++a) {
            if (!used[size_t(a)] && lq[size_t(a)] == lp[size_t(j)]) {
                perm[size_t(j)] = a;
                used[size_t(a)] = 1;
                break;
            }
        }
    }
    return perm;
}

Mat permutation_matrix(const std::vector<int>& perm) {
    Eigen::Index d = Eigen::Index(perm.size());
    Mat w = Mat::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) w(perm[size_t(j)], j) = 1;
    return w;
}

double tuple_defect(const MatrixTuple& t) {
    double d0 = 0;
    Eigen::Index d = t.dimension;
    Mat sum = Mat::Zero(d, d);
    for (auto& p : t.projections) {
        d0 = std::max(d0, herm_defect(p));
        d0 = std::max(d0, operator_norm(p * p - p));
        sum += p;
    }
    if (!t.projections.empty()) d0 = std::max(d0, operator_norm(sum - Mat::Identity(d, d)));
    for (auto& v : t.unitaries)
        d0 = std::max(d0, operator_norm(v * v.adjoint() - Mat::Identity(d, d)));
    return d0;
}

ExtractedAction extract_finite_action(const MatrixTuple& t, const Tolerances& tol) {
    if (t.dimension < 1) throw Error(errk::Mismatch, "empty tuple");
    if (t.projections.empty() || t.unitaries.empty())
        throw Error(errk::Mismatch, "tuple needs projections and unitaries");
    for (auto& m : t.projections)
        if (m.rows() != t.dimension || m.cols() != t.dimension)
            throw Error(errk::Mismatch, "member dimension disagrees with the header");
    for (auto& m : t.unitaries)
        if (m.rows() != t.dimension || m.cols() != t.dimension)
            throw Error(errk::Mismatch, "member dimension disagrees with the header");

    ExtractedAction out;
    out.delta = tuple_defect(t);
    double g = 1 + out.delta;
    double lhs = (g * g + g + 1) * out.delta;
    if (!(lhs < 0.25))
        throw Error(errk::ThresholdExceeded, "((1+d)^2 + (1+d) + 1) d = " + fmt(lhs) + " >= 1/4");

    // The rounding steps digest defects up to the threshold; their own
    // preconditions are wider than the tuple's.
    Tolerances wide = tol;
    wide.input_slack = std::max(tol.input_slack, 4 * out.delta + 1e-9);

    auto base = orthogonalize_family(t.projections, wide);
    Eigen::Index d = t.dimension;
    auto labels_of = [&](const std::vector<Mat>& fam) {
        std::vector<int> lab(size_t(d), -1);
        for (Eigen::Index j = 0; j < d; ++j) {
            double best = 0;
            for (size_t i = 0; i < fam.size(); ++i) {
                double w = std::real(fam[i](j, j));
                if (w > best) {
                    best = w;
                    lab[size_t(j)] = int(i);
                }
            }
            if (best <= 0.5)
                throw Error(errk::TraceMismatch,
                            "pure state " + std::to_string(j) + " does not concentrate");
        }
        return lab;
    };
    auto diagonal_form = [&](const std::vector<Mat>& fam, const std::vector<int>& lab) {
        std::vector<Mat> out_fam(fam.size(), Mat::Zero(d, d));
        for (Eigen::Index j = 0; j < d; ++j) out_fam[size_t(lab[size_t(j)])](j, j) = 1;
        return out_fam;
    };
    out.label_of = labels_of(base.p);
    for (size_t i = 0; i < base.p.size(); ++i) {
        long cnt = std::count(out.label_of.begin(), out.label_of.end(), int(i));
        double tr = std::real(base.p[i].trace());
        if (std::abs(tr - double(cnt)) > tol.trace_gap)
            throw Error(errk::TraceMismatch, "family member " + std::to_string(i));
    }
    auto psi_base = diagonal_form(base.p, out.label_of);

    std::vector<std::vector<int>> tables;
    for (auto& v_raw : t.unitaries) {
        Mat u = polar_unitary(v_raw, wide);
        std::vector<Mat> conj;
        for (auto& p : base.p) conj.push_back(hermitize(u * p * u.adjoint()));
        auto moved = orthogonalize_family(conj, wide);
        auto lab = labels_of(moved.p);
        tables.push_back(match_permutation(psi_base, diagonal_form(moved.p, lab), tol));
    }
    out.action = validate_action_description(t.dimension, tables);
    return out;
}

}  // namespace resfin
