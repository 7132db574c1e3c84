#pragma once

#include "resfin/matrix_approx.hpp"

namespace resfin {

// A stretch of one orbit, periodized: index j stands for T^j x, arithmetic is
// modulo the window length, and the cyclic shift plays the bilateral one.
struct OrbitRepresentation {
    long lo = 0;                            // window covers indices [lo, lo + length)
    std::vector<std::vector<Cplx>> values;  // one row per test function

    long length() const { return values.empty() ? 0 : long(values[0].size()); }
};

struct BergReport {
    Mat v;  // unitary agreeing with the shift off the interpolation blocks
    Mat p;  // projection spanned by v-cyclic vectors, [p, v] = 0
    double u_minus_v = 0;  // asserted < 4/n
    double pv_comm = 0;    // asserted <= commutant_zero
    double pu_comm = 0;    // asserted < 8/n
    double pf_comm = 0;    // max over test functions, asserted < 2/n
};

// Interpolates the shift between the near-recurrent tracks at r and s through
// n planar rotation steps of angle pi/(2n), and cuts the invariant projection
// between them.
BergReport berg_projection(const OrbitRepresentation& orbit, int n, long r, long s,
                           const Tolerances& tol = {});

}  // namespace resfin
