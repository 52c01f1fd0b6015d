/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace trajgp {

double exp_cov(double dt, const KernelParams& kp) {
  if (dt < 0.0) {
    throw std::domain_error("exp_cov: negative lag");
  }
  return kp.sigma2 * std::exp(-kp.phi * dt);
}

Eigen::MatrixXd cov_matrix(const Eigen::VectorXd& times, const KernelParams& kp) {
  const Eigen::Index n = times.size();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    c(j, j) = kp.sigma2;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = kp.sigma2 * std::exp(-kp.phi * std::abs(times[i] - times[j]));
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

void gap_decay_factors(const double* times, int n, double phi, double* g) {
  if (n <= 0) return;
  g[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    g[i] = std::exp(-phi * (times[i] - times[i - 1]));
  }
}

void corr_from_gaps(const double* g, int n, double* R, int ld) {
  for (int j = 0; j < n; ++j) {
    double* col = R + j;  // walk down column j
    col[j * ld] = 1.0;
    double acc = 1.0;
    for (int i = j + 1; i < n; ++i) {
      acc *= g[i];
      col[i * ld] = acc;
    }
  }
}

}  // namespace trajgp
