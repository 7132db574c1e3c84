#pragma once

#include <random>
#include <vector>

#include "resfin/berg.hpp"
#include "resfin/matrix_approx.hpp"
#include "resfin/symbolic.hpp"
#include "resfin/system.hpp"
#include "resfin/witness.hpp"
#include "resfin/word.hpp"

namespace resfin {

// Deterministic example systems shared by the CLI selftest, the acceptance
// binary and the unit tests. Everything here is exact data; the seeded
// builders below are the only source of randomness and are reproducible from
// the seed alone.

// One copy of Z glued to two distinct endpoints; the translation n -> n+1.
CompactifiedZSystem compactified_translation();

// n points at i/n on the circle, rotated by one step. Exact circle metric.
FiniteSampleSystem rotation_sample(int n);

// Sampled compactified translation: positions -range..range then +inf, -inf.
// No on-sample map (T range leaves the sample); image distances are exact.
FiniteSampleSystem compactified_sample(int range);

// The two fixed points and the two-cycle of the full 2-shift, as a sampled
// system with an exact bijective on-sample map.
FiniteSampleSystem shift_sample();

ZShiftSystem full_shift(int alphabet);
ZShiftSystem golden_mean_shift();  // forbidden word 11

FiniteQuotient cyclic_quotient(int n);

// All reduced words of length <= radius (identity included), sorted.
std::vector<Word> ball_words(int rank, int radius);

GroupRingElement doubling_ring();  // 2*1
GroupRingElement laplace_ring();   // 3 - t - t^{-1}

// Arithmetic progressions mod 1: the relation x_{i+2} - 2x_{i+1} + x_i = 0.
// Hosts exact rational-rotation orbits as periodic points.
AlgebraicZSystem rotation_system();

// The orbit x_j = j * num/den mod 1 as a periodic point of rotation_system().
TorusPeriodicPoint rotation_orbit_point(int num, int den);

// Window [lo, lo+length) of the first Fourier mode along that orbit.
OrbitRepresentation rotation_orbit_window(long lo, long length, int num, int den);

// ---------------------------------------------------------------------------
// Seeded builders.
// ---------------------------------------------------------------------------

// Random sampled system: n <= max_n points with exact rational coordinates on
// a square (max metric) and a random total self-map.
FiniteSampleSystem random_metric_sample(std::mt19937_64& rng, int max_n);

// Random directed graph in eps-graph form, edge probability num/den percent.
struct RandomGraph {
    int nodes = 0;
    std::vector<std::vector<int>> out;
};
RandomGraph random_graph(std::mt19937_64& rng, int max_nodes, int edge_percent);

FiniteAction random_f2_action(std::mt19937_64& rng, int size);

// Rank-one diagonal projections plus permutation unitaries encoding the
// action on the d pure states of the diagonal.
MatrixTuple encode_action(const FiniteAction& a);

// Independent hermitian perturbations of every member, bounded by eps in
// operator norm; the projection noise is recentred so the family still sums
// to the identity exactly up to roundoff.
void perturb_tuple(std::mt19937_64& rng, MatrixTuple& t, double eps);

Mat hermitian_noise(std::mt19937_64& rng, int d, double norm);
Mat random_unitary(std::mt19937_64& rng, int d);

// Standard simplex in R^{dim+1} with an exact affine contraction toward an
// interior rational fixed point (a scaled coordinate permutation around it).
struct SimplexFixture {
    PolytopeSystem K;
    std::vector<Rational> fixed;
};
SimplexFixture random_simplex_map(std::mt19937_64& rng, int dim);

}  // namespace resfin
