#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resfin/rational.hpp"
#include "resfin/system.hpp"
#include "resfin/word.hpp"

namespace resfin {

// Finite model: |E| elements acted on by r permutations.
struct FiniteAction {
    int size = 0;
    std::vector<std::vector<int>> generators;  // one permutation per generator
    std::vector<std::vector<int>> inverses;    // precomputed

    int apply(int gen, int sign, int z) const {
        return sign > 0 ? generators[gen][z] : inverses[gen][z];
    }
    int rank() const { return int(generators.size()); }
};

FiniteAction validate_action_description(int size, const std::vector<std::vector<int>>& tables);

// Order of the permutation group generated by the action tables.
long generated_group_order(const FiniteAction& a, long cap = 1000000);

using ZetaMap = std::vector<Point>;

struct Witness {
    SystemDescriptor system;
    FiniteAction action;
    ZetaMap zeta;
    Rational epsilon;
    Rational density_defect;
    Rational equivariance_defect;
    std::vector<int> generator_scope;  // generator indices checked

    bool pass() const { return density_defect < epsilon && equivariance_defect < epsilon; }
};

Witness check_witness(const SystemDescriptor& sys, const FiniteAction& action, const ZetaMap& zeta,
                      const std::vector<int>& scope, const Rational& epsilon,
                      const DensityGridCaps& caps = {});

Witness merge_local_witnesses(const std::vector<Witness>& parts);

// sup over the system of the distance to the finite set zeta (the density
// defect), measured on the resolution grid at radius r. Exposed separately
// because model builders reuse it.
Rational density_defect_at(const SystemDescriptor& sys, const ZetaMap& zeta, int radius,
                           const DensityGridCaps& caps = {});

Rational equivariance_defect_of(const SystemDescriptor& sys, const FiniteAction& action,
                                const ZetaMap& zeta, const std::vector<int>& scope);

struct DiscreteMeasure {
    ZetaMap support;
    std::vector<Rational> weights;
};

struct EmpiricalMeasureResult {
    DiscreteMeasure measure;
    Rational invariance_defect;
    Rational lipschitz_bound;  // max Lipschitz constant of the test family used
};

// Test functions evaluable everywhere on a system.
struct TestFunction {
    enum class Kind { CylinderZ, CylinderFr, CylinderBoundary, PointIndicator, Coordinate, ClassIndicator, PositionIndicator } kind;
    std::vector<int> pattern;      // CylinderZ: window letters; CylinderFr: labels in ball order
    Word prefix;                   // CylinderBoundary
    int index = 0;                 // PointIndicator / Coordinate / ClassIndicator / copy for PositionIndicator
    int radius = 0;                // window radius for cylinders
    long position = 0;             // PositionIndicator
};

std::vector<TestFunction> standard_test_family(const SystemDescriptor& sys, int radius,
                                               const DensityGridCaps& caps = {});
Rational eval_function(const SystemDescriptor& sys, const TestFunction& f, const Point& p);
Rational sup_norm(const SystemDescriptor& sys, const TestFunction& f);
Rational lipschitz_constant(const SystemDescriptor& sys, const TestFunction& f);

EmpiricalMeasureResult empirical_measure(const Witness& w, int radius);

struct UcpDefects {
    Rational mult_defect;
    Rational norm_defect;
    Rational equivariance_defect;
};

UcpDefects ucp_defects(const Witness& w, const std::vector<TestFunction>& family,
                       const std::vector<int>& scope);

}  // namespace resfin
