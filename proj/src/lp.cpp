#include "resfin/lp.hpp"

#include <algorithm>

#include "resfin/error.hpp"

namespace resfin {

void LpProblem::add_constraint(const std::vector<std::pair<int, Rational>>& coeffs, int rel,
                               const Rational& rhs) {
    for (auto& [v, c] : coeffs)
        if (v < 0 || v >= n_) throw Error(errk::Mismatch, "constraint variable out of range");
    rows_.push_back(Row{coeffs, rel, rhs});
}

LpResult LpProblem::solve() const { return run(true); }
LpResult LpProblem::feasible_point() const { return run(false); }

namespace {

// Dense tableau simplex. Columns: structural + slack + artificial, one basic
// variable per row. Bland's rule throughout.
struct Tableau {
    int m, n;  // rows, total columns (excluding rhs)
    std::vector<std::vector<Rational>> a;  // m x (n+1), last column = rhs
    std::vector<Rational> cost;            // n
    std::vector<int> basis;                // m

    Rational reduced_cost(int j, const std::vector<Rational>& cb) const {
        Rational r = cost[j];
        for (int i = 0; i < m; ++i)
            if (a[i][j] != 0) r -= cb[i] * a[i][j];
        return r;
    }

    void pivot(int row, int col) {
        Rational piv = a[row][col];
        for (auto& v : a[row]) v /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == row || a[i][col] == 0) continue;
            Rational f = a[i][col];
            for (int j = 0; j <= n; ++j)
                if (a[row][j] != 0) a[i][j] -= f * a[row][j];
        }
        basis[row] = col;
    }

    // Returns false if unbounded.
    bool iterate() {
        while (true) {
            std::vector<Rational> cb(m);
            for (int i = 0; i < m; ++i) cb[i] = cost[basis[i]];
            int enter = -1;
            for (int j = 0; j < n; ++j) {
                bool basic = false;
                for (int i = 0; i < m; ++i)
                    if (basis[i] == j) basic = true;
                if (basic) continue;
                if (reduced_cost(j, cb) < 0) {
                    enter = j;  // Bland: least index
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            Rational best;
            for (int i = 0; i < m; ++i) {
                if (a[i][enter] <= 0) continue;
                Rational ratio = a[i][n] / a[i][enter];
                if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpResult LpProblem::run(bool optimize) const {
    int m = int(rows_.size());
    // Column layout: [structural n_][slacks][artificials].
    int num_slack = 0;
    for (auto& r : rows_)
        if (r.rel != 0) ++num_slack;
    int n_total = n_ + num_slack + m;

    Tableau t;
    t.m = m;
    t.n = n_total;
    t.a.assign(m, std::vector<Rational>(n_total + 1, Rational(0)));
    t.cost.assign(n_total, Rational(0));
    t.basis.assign(m, -1);

    int slack_at = n_;
    for (int i = 0; i < m; ++i) {
        const Row& r = rows_[i];
        int sgn = r.rhs < 0 ? -1 : 1;  // normalize rhs >= 0
        for (auto& [v, c] : r.coeffs) t.a[i][v] += sgn * c;
        t.a[i][n_total] = sgn * r.rhs;
        if (r.rel != 0) {
            // rel -1: lhs <= rhs -> lhs + s = rhs; rel +1: lhs - s = rhs.
            t.a[i][slack_at] = sgn * (r.rel < 0 ? Rational(1) : Rational(-1));
            ++slack_at;
        }
    }
    // Artificials with +1 coefficient form the initial basis.
    for (int i = 0; i < m; ++i) {
        int art = n_ + num_slack + i;
        t.a[i][art] = 1;
        t.basis[i] = art;
        t.cost[art] = 1;
    }

    if (!t.iterate()) throw Error(errk::Unbounded, "phase 1 unbounded");  // cannot happen: cost >= 0
    Rational phase1 = 0;
    for (int i = 0; i < m; ++i) phase1 += t.cost[t.basis[i]] * t.a[i][n_total];

    LpResult res;
    if (phase1 != 0) return res;  // infeasible
    res.feasible = true;

    // Drive artificials out of the basis; rows where that fails are redundant
    // (all-zero over structural+slack columns) and are deleted. Artificial
    // columns are then dropped so phase 2 cannot re-enter them.
    for (int i = int(t.m) - 1; i >= 0; --i) {
        if (t.basis[i] < n_ + num_slack) continue;
        int col = -1;
        for (int j = 0; j < n_ + num_slack; ++j)
            if (t.a[i][j] != 0) {
                col = j;
                break;
            }
        if (col >= 0) {
            t.pivot(i, col);
        } else {
            t.a.erase(t.a.begin() + i);
            t.basis.erase(t.basis.begin() + i);
            --t.m;
        }
    }
    int rhs_col = n_total;
    for (auto& row : t.a) {
        row[n_ + num_slack] = row[rhs_col];
        row.resize(n_ + num_slack + 1);
    }
    t.n = n_ + num_slack;
    t.cost.resize(t.n);

    if (optimize) {
        for (int j = 0; j < t.n; ++j) t.cost[j] = j < n_ ? c_[j] : Rational(0);
        if (!t.iterate()) {
            res.unbounded = true;
            return res;
        }
    }

    res.x.assign(n_, Rational(0));
    for (int i = 0; i < t.m; ++i)
        if (t.basis[i] < n_) res.x[t.basis[i]] = t.a[i][t.n];
    res.objective = 0;
    for (int j = 0; j < n_; ++j) res.objective += c_[j] * res.x[j];
    return res;
}

}  // namespace resfin
