#pragma once

#include <vector>

#include "resfin/clopen.hpp"
#include "resfin/smith.hpp"
#include "resfin/system.hpp"
#include "resfin/witness.hpp"
#include "resfin/word.hpp"

namespace resfin {

// Finite quotient of F_r: one permutation of {0..order-1} per generator. The
// permutations must generate a transitive action; any assignment of
// permutations extends to a homomorphism, freeness gives the rest.
struct FiniteQuotient {
    int order = 0;
    std::vector<std::vector<int>> gen_images;

    int rank() const { return int(gen_images.size()); }
    bool operator==(const FiniteQuotient&) const = default;
};

void validate_quotient(const FiniteQuotient& q);

// Image of `elem` under the letter +-(i+1) / under a reduced word (letters
// applied right to left, matching left multiplication).
int quotient_apply(const FiniteQuotient& q, int letter, int elem);
int quotient_eval(const FiniteQuotient& q, const Word& w, int elem);

// Exact image g.C(prefix) of a boundary cylinder, as a disjoint list of
// cylinder prefixes. An empty prefix denotes the full boundary.
std::vector<Word> boundary_translate_cylinders(int rank, const Word& g, const Word& prefix);

// Same image as a clopen set over the sphere atoms at the smallest window
// that covers every produced cylinder.
ClopenSet boundary_translate(const FrBoundarySystem& sys, const Word& g, const Word& prefix,
                             const DensityGridCaps& caps = {});
ClopenSet boundary_translate_set(const FrBoundarySystem& sys, const Word& g, const ClopenSet& s,
                                 const DensityGridCaps& caps = {});

// Bernoulli model pulled back along a finite quotient: E is the set of
// labelings Q -> {0..alphabet-1} with the translated-index action, zeta sends
// a labeling to its pullback configuration. Equivariance defect is exactly 0;
// the density defect depends on how faithfully Q resolves the ball.
// SizeOverflow when alphabet^|Q| exceeds the pattern cap.
Witness bernoulli_model(int alphabet, const FiniteQuotient& q, const Rational& epsilon,
                        const DensityGridCaps& caps = {});

void validate_group_ring(const GroupRingElement& f);

// Circulant matrix of f at period n: row i holds the defining relation
// sum_k c_k x_{i+k} at index i, so M[i][(i+k) mod n] += c_k.
IntMatrix circulant_matrix(const GroupRingElement& f, int n);

struct FixedPointGroup {
    Int order;                 // |Z^n / M Z^n| = |det M|
    std::vector<Int> factors;  // nontrivial invariant factors, product = order
};

// Error(Infinite) when the circulant is singular.
FixedPointGroup algebraic_fixed_points(const GroupRingElement& f, int n);

// All n-periodic solutions of f in (Q/Z)^Z, one period per row, entries in
// [0,1). Enumerated through the Smith decomposition D = L M R: the solutions
// are R y for y_i in (1/d_i)Z/Z, so there are exactly det-many and no
// duplicates (R is unimodular).
std::vector<std::vector<Rational>> character_points(const GroupRingElement& f, int n,
                                                    long cap = DensityGridCaps{}.max_patterns);

enum class FourierVerdict { Ok, Inconclusive, NotInvertible };

// Heuristic invertibility gate: min |f^(j/1024)| over the grid, compared to
// 1e-9 and 1e-6 times sum|c_k| (floating point by design; the margins are
// part of the contract).
FourierVerdict fourier_precheck(const GroupRingElement& f);

// Deterministic density grid at a resolution radius: the periodic solutions
// at the least period n' >= 2*radius+1 whose circulant is nonsingular. The
// grid depends only on (f, radius), so models at indices n | n' can only get
// denser.
std::vector<TorusPeriodicPoint> algebraic_density_grid(const GroupRingElement& f, int radius,
                                                       const DensityGridCaps& caps = {});

// Finite model of the torus system of f from its n-periodic solutions, with
// the index-shift action and zeta the periodic extension (an exact embedding,
// so the equivariance defect vanishes).
Witness algebraic_model_witness(const GroupRingElement& f, int n, const Rational& epsilon,
                                const DensityGridCaps& caps = {});

}  // namespace resfin
