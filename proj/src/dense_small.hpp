/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_SRC_DENSE_SMALL_HPP_
#define TRAJGP_SRC_DENSE_SMALL_HPP_

#include <cmath>
#include <string>

#include "trajgp/errors.hpp"

namespace trajgp {
namespace detail {

// In-place lower Cholesky of the leading w x w block of row-major R (leading
// dimension ld). Tuned for the small conditioning windows (w <= m); plain
// loops beat a general library call at these sizes.
inline void dense_chol_lower(double* R, int w, int ld, int context_index) {
  for (int j = 0; j < w; ++j) {
    double* rowj = R + static_cast<std::size_t>(j) * ld;
    double s = rowj[j];
    for (int k = 0; k < j; ++k) s -= rowj[k] * rowj[k];
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw numeric_error(
          "conditioning block not positive definite near index " +
          std::to_string(context_index));
    }
    const double ljj = std::sqrt(s);
    rowj[j] = ljj;
    const double inv = 1.0 / ljj;
    for (int i = j + 1; i < w; ++i) {
      double* rowi = R + static_cast<std::size_t>(i) * ld;
      double s2 = rowi[j];
      for (int k = 0; k < j; ++k) s2 -= rowi[k] * rowj[k];
      rowi[j] = s2 * inv;
    }
  }
}

// Solve (L L^T) a = b given the factor from dense_chol_lower; b is
// overwritten with the solution.
inline void dense_chol_solve(const double* R, int w, int ld, double* b) {
  for (int r = 0; r < w; ++r) {
    const double* rowr = R + static_cast<std::size_t>(r) * ld;
    double s = b[r];
    for (int k = 0; k < r; ++k) s -= rowr[k] * b[k];
    b[r] = s / rowr[r];
  }
  for (int r = w - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < w; ++k) {
      s -= R[static_cast<std::size_t>(k) * ld + r] * b[k];
    }
    b[r] = s / R[static_cast<std::size_t>(r) * ld + r];
  }
}

}  // namespace detail
}  // namespace trajgp

#endif  // TRAJGP_SRC_DENSE_SMALL_HPP_
