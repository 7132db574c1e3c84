#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "resfin/witness.hpp"

namespace resfin {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Numeric tolerances, centralized so the CLI can override them by name.
struct Tolerances {
    double projection_residual = 1e-10;  // ||q^2 - q||, ||q - q*|| on outputs
    double unitary_residual = 1e-10;     // ||v v* - 1|| on outputs
    double input_slack = 1e-8;           // distance inputs may sit from their stated roles
    double commutant_zero = 1e-12;       // asserts on exact-by-construction commutators
    double gap = 0.1;                    // default spectral clearance around 1/2
    double trace_gap = 0.4;              // trace comparisons round within < 1/2
    double singular_floor = 1e-12;       // smallest singular value accepted as invertible

    void set(const std::string& name, double value);
};

double operator_norm(const Mat& m);

struct ProjectionRounding {
    Mat q;
    double distance = 0;  // max spectral distance of the input to {0, 1}
};

// Spectral rounding at threshold 1/2. Eigenvalues inside the gap are refused.
ProjectionRounding round_to_projection(const Mat& a, double gap_tol, const Tolerances& tol = {});

struct CutResult {
    Mat q;                  // projection supported inside the complement of p
    double delta = 0;       // measured ||p q_in||
    double q_minus_a = 0;   // measured, asserted <= 3 delta
    double a_residual = 0;  // measured, asserted <= 9 delta
    double moved = 0;       // measured ||q - q_in||, asserted <= 6 delta
};

// Pushes q off p through the compressed corner a = (1-p) q (1-p). The two
// proof stages ||q - a|| <= 3||pq|| and ||a^2 - a|| <= 9||pq|| are asserted.
CutResult cut_projection(const Mat& p, const Mat& q, double delta_cap, const Tolerances& tol = {});

struct OrthogonalizedFamily {
    std::vector<Mat> p;       // pairwise orthogonal, summing to the identity
    double max_deviation = 0;  // max ||p_i - a_i||
    double bound = 0;          // cascade bound the deviation was checked against
};

// Rounds a near-partition of unity to an exact one, earlier members first;
// the last member is the complement, so the sum is the identity by
// construction.
OrthogonalizedFamily orthogonalize_family(const std::vector<Mat>& a, const Tolerances& tol = {});

// Unitary polar factor; moves the input by at most ||v v* - 1||.
Mat polar_unitary(const Mat& v_raw, const Tolerances& tol = {});

// Lexicographically least permutation w with w P_i w* = Q_i for families of
// diagonal projections partitioning the identity. Returned as index map
// (w e_j = e_{perm[j]}).
std::vector<int> match_permutation(const std::vector<Mat>& P, const std::vector<Mat>& Q,
                                   const Tolerances& tol = {});

Mat permutation_matrix(const std::vector<int>& perm);

// Approximate images of indicator projections and generator unitaries,
// with whatever defect the encoding picked up.
struct MatrixTuple {
    int dimension = 0;
    std::vector<Mat> projections;
    std::vector<Mat> unitaries;
    std::map<std::string, double> tolerances;
};

// Largest role defect over the members: distance to self-adjoint / to an
// exact projection family sum / to a unitary.
double tuple_defect(const MatrixTuple& t);

struct ExtractedAction {
    FiniteAction action;        // permutation action on the diagonal pure states
    std::vector<int> label_of;  // pure state -> projection family index
    double delta = 0;           // measured tuple defect
};

// Rounds the family, polar-corrects the unitaries, conjugates, rounds again,
// and matches the two diagonal forms by a permutation; the permutations are
// the recovered action.
ExtractedAction extract_finite_action(const MatrixTuple& t, const Tolerances& tol = {});

}  // namespace resfin
