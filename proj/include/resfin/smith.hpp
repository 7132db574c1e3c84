#pragma once

#include <vector>

#include "resfin/rational.hpp"

namespace resfin {

using IntMatrix = std::vector<std::vector<Int>>;

// D = L * M * R with L, R unimodular and D diagonal, diag[i] >= 0 and
// diag[i] | diag[i+1].
struct SmithResult {
    std::vector<Int> diag;
    IntMatrix L, R;
};

SmithResult smith_normal_form(IntMatrix m);

Int smith_determinant(const IntMatrix& m);  // |det|, via the diagonal product

}  // namespace resfin
