#pragma once

#include <array>

#include "swpm/vec3.hpp"

namespace swpm {

/// Eigendecomposition of a symmetric 3x3 matrix, eigenvalues sorted
/// descending. Deterministic: fixed cyclic rotation order, fixed sort.
struct EigenDecomposition {
    std::array<double, 3> values{};
    std::array<Vec3, 3> vectors{};
};

/// Cyclic Jacobi iteration; converges to off-diagonal Frobenius norm below
/// 1e-13 * max(|trace|, 1e-300).
EigenDecomposition eigenSymmetric3(const Mat3& m);

}  // namespace swpm
