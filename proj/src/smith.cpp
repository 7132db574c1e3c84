#include "resfin/smith.hpp"

#include <algorithm>

#include "resfin/error.hpp"

namespace resfin {

namespace {

IntMatrix identity(size_t n) {
    IntMatrix id(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
}

}  // namespace

SmithResult smith_normal_form(IntMatrix m) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    SmithResult res;
    res.L = identity(rows);
    res.R = identity(cols);
    auto row_add = [&](size_t dst, size_t src, const Int& f) {  // row dst += f * row src
        for (size_t j = 0; j < cols; ++j) m[dst][j] += f * m[src][j];
        for (size_t j = 0; j < rows; ++j) res.L[dst][j] += f * res.L[src][j];
    };
    auto col_add = [&](size_t dst, size_t src, const Int& f) {
        for (size_t i = 0; i < rows; ++i) m[i][dst] += f * m[i][src];
        for (size_t i = 0; i < cols; ++i) res.R[i][dst] += f * res.R[i][src];
    };
    auto row_swap = [&](size_t a, size_t b) {
        std::swap(m[a], m[b]);
        std::swap(res.L[a], res.L[b]);
    };
    auto col_swap = [&](size_t a, size_t b) {
        for (size_t i = 0; i < rows; ++i) std::swap(m[i][a], m[i][b]);
        for (size_t i = 0; i < cols; ++i) std::swap(res.R[i][a], res.R[i][b]);
    };
    auto row_negate = [&](size_t a) {
        for (size_t j = 0; j < cols; ++j) m[a][j] = -m[a][j];
        for (size_t j = 0; j < rows; ++j) res.L[a][j] = -res.L[a][j];
    };

    size_t t = 0;
    while (t < rows && t < cols) {
        // find a nonzero pivot in the remaining block
        size_t pi = t, pj = t;
        bool found = false;
        for (size_t i = t; i < rows && !found; ++i)
            for (size_t j = t; j < cols && !found; ++j)
                if (m[i][j] != 0) {
                    pi = i;
                    pj = j;
                    found = true;
                }
        if (!found) break;
        row_swap(t, pi);
        col_swap(t, pj);
        // reduce until the pivot divides its row and column, then clear them
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (size_t i = t + 1; i < rows; ++i) {
                if (m[i][t] == 0) continue;
                Int q = m[i][t] / m[t][t];
                row_add(i, t, -q);
                if (m[i][t] != 0) {
                    row_swap(t, i);  // smaller remainder becomes the pivot
                    dirty = true;
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                if (m[t][j] == 0) continue;
                Int q = m[t][j] / m[t][t];
                col_add(j, t, -q);
                if (m[t][j] != 0) {
                    col_swap(t, j);
                    dirty = true;
                }
            }
        }
        ++t;
    }
    // normalize signs and enforce the divisibility chain
    for (size_t i = 0; i < std::min(rows, cols); ++i)
        if (m[i][i] < 0) row_negate(i);
    for (size_t i = 0; i + 1 < std::min(rows, cols); ++i)
        for (size_t j = i + 1; j < std::min(rows, cols); ++j) {
            if (m[i][i] == 0 && m[j][j] != 0) {  // push zeros to the end
                row_swap(i, j);
                col_swap(i, j);
            }
            if (m[i][i] == 0) continue;
            if (m[j][j] % m[i][i] == 0) continue;
            // standard trick: fold m[j][j] into column i, re-reduce the 2x2
            col_add(i, j, 1);
            bool dirty = true;
            while (dirty) {
                dirty = false;
                if (m[j][i] != 0) {
                    Int q = m[j][i] / m[i][i];
                    row_add(j, i, -q);
                    if (m[j][i] != 0) {
                        row_swap(i, j);
                        dirty = true;
                    }
                }
                if (m[i][j] != 0) {
                    Int q = m[i][j] / m[i][i];
                    col_add(j, i, -q);
                    if (m[i][j] != 0) {
                        col_swap(i, j);
                        dirty = true;
                    }
                }
            }
            if (m[i][i] < 0) row_negate(i);
            if (m[j][j] < 0) row_negate(j);
        }
    res.diag.resize(std::min(rows, cols));
    for (size_t i = 0; i < res.diag.size(); ++i) res.diag[i] = m[i][i];
    return res;
}

Int smith_determinant(const IntMatrix& m) {
    if (m.empty()) return 1;
    if (m.size() != m[0].size()) throw Error(errk::Mismatch, "determinant of non-square matrix");
    auto s = smith_normal_form(m);
    Int det = 1;
    for (auto& d : s.diag) det *= d;
    return det;
}

}  // namespace resfin
