#include "resfin/berg.hpp"

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

}  // namespace

BergReport berg_projection(const OrbitRepresentation& orbit, int n, long r, long s,
                           const Tolerances& tol) {
    long W = orbit.length();
    if (W == 0 || orbit.values.empty()) throw Error(errk::Mismatch, "empty orbit window");
    for (auto& row : orbit.values)
        if (long(row.size()) != W) throw Error(errk::Mismatch, "ragged orbit window");
    if (n < 1) throw Error(errk::PlacementError, "need n >= 1");
    if (!(r > n)) throw Error(errk::PlacementError, "need r > n");
    if (!(s < -2 * long(n))) throw Error(errk::PlacementError, "need s < -2n");
    if (W < 4 * (r - s))
        throw Error(errk::PlacementError, "window length " + std::to_string(W) +
                                              " < 4(r - s) = " + std::to_string(4 * (r - s)));
    if (orbit.lo > s || r + n >= orbit.lo + W)
        throw Error(errk::PlacementError, "tracks fall outside the window");

    auto id = [&](long j) { return Eigen::Index(((j - orbit.lo) % W + W) % W); };
    auto val = [&](size_t f, long j) { return orbit.values[f][size_t(id(j))]; };

    for (size_t f = 0; f < orbit.values.size(); ++f)
        for (int k = 0; k < n; ++k) {
            double diff = std::abs(val(f, r + k) - val(f, s + k));
            if (!(diff < 1.0 / n))
                throw Error(errk::HypothesisError, "function " + std::to_string(f) + " at offset " +
                                                       std::to_string(k) + ": |gap| = " + fmt(diff) +
                                                       " >= 1/n");
        }

    Eigen::Index D = Eigen::Index(W);
    Mat u = Mat::Zero(D, D);
    for (long j = 0; j < W; ++j) u(id(orbit.lo + j + 1), id(orbit.lo + j)) = 1;

    // Basis pair at interpolation step k; step n lands on the opposite track.
    auto zeta = [&](int k) {
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(D);
        if (k == n) {
            x(id(s + n)) = 1;
        } else {
            x(id(r + k)) = std::cos(k * M_PI / (2 * n));
            x(id(s + k)) = std::sin(k * M_PI / (2 * n));
        }
        return x;
    };
    auto eta = [&](int k) {
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(D);
        if (k == n) {
            x(id(r + n)) = -1;
        } else {
            x(id(r + k)) = -std::sin(k * M_PI / (2 * n));
            x(id(s + k)) = std::cos(k * M_PI / (2 * n));
        }
        return x;
    };

    BergReport out;
    out.v = u;
    for (int k = 0; k < n; ++k) {
        double c = std::cos(k * M_PI / (2 * n)), sn = std::sin(k * M_PI / (2 * n));
        out.v.col(id(r + k)) = c * zeta(k + 1) - sn * eta(k + 1);
        out.v.col(id(s + k)) = sn * zeta(k + 1) + c * eta(k + 1);
    }
    if (operator_norm(out.v * out.v.adjoint() - Mat::Identity(D, D)) > tol.unitary_residual)
        throw Error(errk::Mismatch, "interpolated shift failed its unitary residual");

    out.p = Mat::Zero(D, D);
    for (long j = r + n; j < W + s; ++j) out.p(id(j), id(j)) = 1;
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXcd e = eta(k);
        out.p += e * e.adjoint();
    }
    out.p = (out.p + out.p.adjoint()) / 2.0;
    if (operator_norm(out.p * out.p - out.p) > tol.projection_residual)
        throw Error(errk::Mismatch, "cut subspace failed its projection residual");

    out.u_minus_v = operator_norm(u - out.v);
    out.pv_comm = operator_norm(out.p * out.v - out.v * out.p);
    out.pu_comm = operator_norm(out.p * u - u * out.p);
    for (size_t f = 0; f < orbit.values.size(); ++f) {
        Mat df = Mat::Zero(D, D);
        for (long j = 0; j < W; ++j) df(j, j) = orbit.values[f][size_t(j)];
        out.pf_comm = std::max(out.pf_comm, operator_norm(out.p * df - df * out.p));
    }

    if (!(out.u_minus_v < 4.0 / n))
        throw Error(errk::Mismatch, "||u - v|| = " + fmt(out.u_minus_v) + " not below 4/n");
    if (out.pv_comm > tol.commutant_zero)
        throw Error(errk::Mismatch, "||[p, v]|| = " + fmt(out.pv_comm) + " not exactly zero");
    if (!(out.pu_comm < 8.0 / n))
        throw Error(errk::Mismatch, "||[p, u]|| = " + fmt(out.pu_comm) + " not below 8/n");
    if (!(out.pf_comm < 2.0 / n))
        throw Error(errk::Mismatch, "||[p, f]|| = " + fmt(out.pf_comm) + " not below 2/n");
    return out;
}

}  // namespace resfin
