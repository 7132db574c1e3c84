#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resfin/rational.hpp"
#include "resfin/word.hpp"

namespace resfin {

// ---------------------------------------------------------------------------
// Point representations. Every point is finite exact data; group elements act
// on points within the same representation (except finite samples with
// off-sample images, which carry image distance tables instead).
// ---------------------------------------------------------------------------

struct SamplePoint {
    int index = 0;
    bool operator==(const SamplePoint&) const = default;
};

// Two-sided sequence, eventually periodic on both sides:
//   coordinate t for t <  start              : left[((t-start) mod L + L) mod L]
//   coordinate t for start <= t < start+|core|: core[t-start]
//   coordinate t beyond the core             : right[(t-start-|core|) mod R]
// so coordinate start-1 reads left.back(). Purely periodic points have an
// empty core.
struct EvSeqPoint {
    std::vector<int> left, core, right;
    long start = 0;

    int at(long t) const;
    bool operator==(const EvSeqPoint&) const = default;
};

// Pullback of a labeling of a finite transitive F_r-set along the orbit map
// g -> g.base: the configuration value at the reduced word g is
// labels[g.base]. action[i][q] is the image of q under generator i+1.
struct QuotientPoint {
    std::vector<std::vector<int>> action;
    std::vector<int> labels;
    int base = 0;

    int size() const { return int(labels.size()); }
    int apply_letter(int letter, int q) const;  // letter = +-(i+1)
    int at(const Word& g) const;
    bool operator==(const QuotientPoint&) const = default;
};

// Infinite reduced word prefix.period^inf; period cyclically reduced and the
// junctions prefix|period and period|period reduced.
struct BoundaryPoint {
    Word prefix, period;

    int at(int i) const;  // i-th letter, 0-based
    bool operator==(const BoundaryPoint&) const = default;
};

struct CompactZPoint {
    bool at_class = false;
    int cls = 0;   // endpoint class id when at_class
    int copy = 0;  // copy id and integer position otherwise
    long pos = 0;
    bool operator==(const CompactZPoint&) const = default;
};

struct PolytopePoint {
    std::vector<Rational> coords;
    bool operator==(const PolytopePoint&) const = default;
};

// n-periodic point of the torus shift: theta_j = values[j mod n], each value
// in [0,1) representing Q/Z.
struct TorusPeriodicPoint {
    std::vector<Rational> values;
    bool operator==(const TorusPeriodicPoint&) const = default;
};

using Point = std::variant<SamplePoint, EvSeqPoint, QuotientPoint, BoundaryPoint, CompactZPoint,
                           PolytopePoint, TorusPeriodicPoint>;

// ---------------------------------------------------------------------------
// System descriptors.
// ---------------------------------------------------------------------------

// Finite metric sample with a map table. `map_index` is the image when it
// stays on-sample (empty otherwise); `image_dist[i][j] = d(T x_i, x_j)` is
// always available so witnesses can be checked against off-sample images.
struct FiniteSampleSystem {
    int n = 0;
    std::vector<std::vector<Rational>> dist;
    std::vector<int> map_index;
    std::vector<std::vector<Rational>> image_dist;

    bool on_sample() const { return !map_index.empty(); }
    bool bijective() const;
    bool operator==(const FiniteSampleSystem&) const = default;
};

// Subshift of alphabet^Z cut out by forbidden contiguous words.
struct ZShiftSystem {
    int alphabet = 2;
    std::vector<std::vector<int>> forbidden;
    bool operator==(const ZShiftSystem&) const = default;
};

// Full shift alphabet^{F_rank}. Forbidden patterns are not supported for
// rank >= 2; the field stays empty.
struct FrShiftSystem {
    int rank = 2;
    int alphabet = 2;
    bool operator==(const FrShiftSystem&) const = default;
};

struct FrBoundarySystem {
    int rank = 2;
    bool operator==(const FrBoundarySystem&) const = default;
};

// Disjoint copies of Z, each compactified by two endpoints, endpoints glued
// into classes. classes[c] lists (copy, sign) pairs; every endpoint appears in
// exactly one class. The metric is the path metric of the metric graph whose
// arcs are the copies under n -> n/(1+|n|), each of length 2.
struct CompactifiedZSystem {
    int copies = 1;
    std::vector<std::vector<std::pair<int, int>>> classes;

    int class_of(int copy, int sign) const;
    bool operator==(const CompactifiedZSystem&) const = default;
};

// Convex hull of rational vertices with an affine self-map x -> Ax + b.
// Metric: max over coordinates (the coordinate-function pseudometric family).
struct PolytopeSystem {
    std::vector<std::vector<Rational>> vertices;
    std::vector<std::vector<Rational>> A;
    std::vector<Rational> b;

    int dim() const { return vertices.empty() ? 0 : int(vertices[0].size()); }
    std::vector<Rational> apply(const std::vector<Rational>& x) const;
    std::vector<Rational> apply_inverse(const std::vector<Rational>& x) const;  // Error if det A = 0
    bool contains(const std::vector<Rational>& x) const;                        // exact LP membership
    bool operator==(const PolytopeSystem&) const = default;
};

// Integer Laurent polynomial sum c_k t^k as (exponent, coefficient) pairs.
// Exponents distinct, coefficients nonzero.
struct GroupRingElement {
    std::vector<std::pair<long, Int>> terms;
    bool operator==(const GroupRingElement&) const = default;
};

// Solution set of f in the torus shift: configurations xi in (Q/Z)^Z with
// sum_k c_k xi_{i+k} = 0 mod 1 for every i, under the index shift. Points are
// periodic (TorusPeriodicPoint); d(xi, eta) = sup_j 2^-|j| |xi_j - eta_j|_T.
struct AlgebraicZSystem {
    GroupRingElement f;
    bool operator==(const AlgebraicZSystem&) const = default;
};

using SystemDescriptor = std::variant<FiniteSampleSystem, ZShiftSystem, FrShiftSystem,
                                      FrBoundarySystem, CompactifiedZSystem, PolytopeSystem,
                                      AlgebraicZSystem>;

std::string kind_name(const SystemDescriptor& sys);

// Number of acting generators (1 for Z-systems, rank for free-group systems).
int generator_count(const SystemDescriptor& sys);

// Structural validation: metric axioms on samples, gluing table consistency,
// affine map sends vertices into the hull, alphabet sanity. Error on failure.
void validate_system(const SystemDescriptor& sys);

// Point validity against a system (representation kind, ranges, forbidden
// words, reducedness, hull membership). Error(InvalidPoint) on failure.
void validate_point(const SystemDescriptor& sys, const Point& p);

// Exact distance between two valid points of the system.
Rational distance(const SystemDescriptor& sys, const Point& a, const Point& b);

// Image of a point under generator `gen` (0-based) to the power sign = +-1.
// Error(NonInvertible) where no exact representation exists (off-sample
// finite-sample images, non-invertible affine maps for sign < 0).
Point apply_generator(const SystemDescriptor& sys, int gen, int sign, const Point& p);

Point apply_word(const SystemDescriptor& sys, const Word& w, const Point& p);

// d(T^{sign} x, y) where x is a sample point: supports off-sample images.
Rational image_distance(const FiniteSampleSystem& s, int x, int y);

// Resolution radius r of epsilon: least r >= 0 with 2^-r <= epsilon.
int resolution_radius(const Rational& epsilon);

// Deep structural equality of descriptors.
bool same_system(const SystemDescriptor& a, const SystemDescriptor& b);

// Shortest-path distances between endpoint classes (each copy is an arc of
// length 2 between its two endpoint classes).
std::vector<std::vector<Rational>> compactz_class_distances(const CompactifiedZSystem& c);
// Cost from a point to each endpoint class along the path metric.
std::vector<Rational> compactz_costs_to_classes(const CompactifiedZSystem& c, const CompactZPoint& p);

inline Rational pow2neg(int r) { return Rational(Int(1), Int(1) << r); }

// Deterministic density grid of the system at epsilon's resolution, as
// points. For symbolic systems the sup over the grid of the distance to a
// finite set is computed by dedicated code (see witness.cpp); this helper
// exposes the grid points used for sampling-style kinds.
struct DensityGridCaps {
    long max_patterns = 1 << 21;  // symbolic pattern budget before ResolutionOverflow
    int polytope_quantization = 4;
};

}  // namespace resfin
