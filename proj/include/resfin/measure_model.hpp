#pragma once

#include <string>
#include <vector>

#include "resfin/system.hpp"
#include "resfin/witness.hpp"

namespace resfin {

// Finite model synthesized from approximate invariant masses. The cells are
// the join of the window partition with its translate; `solution` is an
// exactly invariant, strictly positive rational mass vector near `target`
// (radius reports the distance), and the witness realizes it with |E_Q| =
// denominator * solution_Q points per cell and order-preserving wiring.
struct ModelFromMeasure {
    Witness witness;
    std::vector<std::string> cells;   // join atom labels
    std::vector<Rational> solution;   // sums to 1, every entry > 0
    Rational radius;                  // max_Q |solution_Q - target_Q|
    long denominator = 1;             // least M with M * solution integral
    std::vector<int> cell_of;         // model element -> join atom
    std::vector<int> block_of;        // join atom -> partition atom containing it
    std::vector<int> image_block_of;  // join atom -> partition atom p with cell inside T p
};

// Builds the join partition of the system at `window`, solves the invariance
// equations exactly near `target` (denominators searched smallest first, up
// to 10^6; NoPositiveRationalSolution past the bound), and wires generator
// bijections cell-block by cell-block in canonical order.
ModelFromMeasure measure_to_model(const SystemDescriptor& sys, int window,
                                  const std::vector<Rational>& target, const Rational& epsilon,
                                  const DensityGridCaps& caps = {});

// Push a witness to the m-quantized measures on its zeta image: elements are
// compositions c of m over E, acted on by relabeling, compared in the
// pseudometric d(mu, nu) = max_f |mu(f) - nu(f)| over the test family. The
// lifted equivariance defect never exceeds the base one (convexity).
struct AffineLiftResult {
    Witness witness;
    Rational base_defect;  // d_Omega defect of the base witness
    Rational lift_defect;
    long count = 0;  // number of quantized measures
};

AffineLiftResult affine_lift(const Witness& base, int m, const std::vector<TestFunction>& omega,
                             const DensityGridCaps& caps = {});

// Cyclic interpolation model around a verified fixed point of the polytope
// map: E = V x {-m..m}, zeta(v, k) = (1-|k|/m) T^k v + (|k|/m) w. The
// equivariance defect is bounded by (2/m) max vertex coordinate magnitude;
// the bound is recomputed and enforced. NotFixed when T(w) != w.
struct FixedPointModel {
    Witness witness;
    Rational bound;
};

FixedPointModel fixed_point_model(const PolytopeSystem& K,
                                  const std::vector<std::vector<Rational>>& orbit_starts,
                                  const std::vector<Rational>& fixed, int m, const Rational& epsilon,
                                  const DensityGridCaps& caps = {});

// Exact barycentre of a finitely supported measure on the polytope. When the
// measure is invariant under the polytope map (pushforward equality, checked
// exactly), the barycentre is a fixed point and this is verified.
struct BarycentreResult {
    std::vector<Rational> point;
    bool invariant = false;
};

BarycentreResult barycentre(const PolytopeSystem& K, const std::vector<std::vector<Rational>>& pts,
                            const std::vector<Rational>& weights);

}  // namespace resfin
