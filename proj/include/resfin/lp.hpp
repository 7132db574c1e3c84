#pragma once

#include <optional>
#include <vector>

#include "resfin/rational.hpp"

namespace resfin {

// Exact rational linear programming, dense two-phase simplex with Bland's
// rule (termination guaranteed, no tolerance anywhere).
//
// Standard form: minimize c.x subject to A x = b, x >= 0. Rows with b < 0 are
// negated internally. Use slack variables to encode inequalities.
struct LpResult {
    bool feasible = false;
    bool unbounded = false;
    std::vector<Rational> x;   // primal solution when feasible (and bounded)
    Rational objective = 0;
};

class LpProblem {
  public:
    explicit LpProblem(int num_vars) : n_(num_vars), c_(num_vars, Rational(0)) {}

    int num_vars() const { return n_; }

    // Adds the constraint sum coeff_i * x_i (rel) rhs, rel in {-1: <=, 0: =, +1: >=}.
    void add_constraint(const std::vector<std::pair<int, Rational>>& coeffs, int rel, const Rational& rhs);

    void set_objective(int var, const Rational& coeff) { c_[var] = coeff; }

    LpResult solve() const;

    // Phase 1 only: is the system feasible, and if so return one vertex.
    LpResult feasible_point() const;

  private:
    struct Row {
        std::vector<std::pair<int, Rational>> coeffs;
        int rel;
        Rational rhs;
    };
    int n_;
    std::vector<Rational> c_;
    std::vector<Row> rows_;

    LpResult run(bool optimize) const;
};

}  // namespace resfin
