/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_KERNEL_HPP_
#define TRAJGP_KERNEL_HPP_

#include <Eigen/Dense>

namespace trajgp {

// Exponential (Ornstein-Uhlenbeck) covariance in time:
//   cov(w(s), w(t)) = sigma2 * exp(-phi * |s - t|)
// Plain aggregates: positivity is validated at configuration boundaries, not
// here, because the sampler builds candidates via exp() on a log scale and a
// degenerate candidate must surface as a -inf likelihood, not an exception.
struct KernelParams {
  double sigma2 = 1.0;  // marginal variance
  double phi = 1.0;     // decay rate; effective range 3/phi (corr < 0.05 beyond)
};

struct NoiseParams {
  double tau2 = 1.0;  // measurement-error (nugget) variance
};

// Covariance at lag dt >= 0. Throws std::domain_error for negative lags.
double exp_cov(double dt, const KernelParams& kp);

// Dense covariance matrix of the process at the given (arbitrary) times.
// Empty input yields a 0 x 0 matrix.
Eigen::MatrixXd cov_matrix(const Eigen::VectorXd& times, const KernelParams& kp);

// Per-gap correlation factors for ordered times: g[i] = exp(-phi * (t[i] - t[i-1]))
// for i >= 1, g[0] = 1. For consecutive windows the correlation between points
// a < b is the running product g[a+1] * ... * g[b]; precomputing the factors
// once per likelihood evaluation removes all exp() calls from the O(n m^2)
// factor-assembly loops.
void gap_decay_factors(const double* times, int n, double phi, double* g);

// Correlation matrix (lower triangle incl. diagonal) of n consecutive points
// from their gap factors g[1..n-1]; writes R(i,j) for i >= j into row-major
// storage with leading dimension ld. R(i,j) = prod_{k=j+1..i} g[k].
void corr_from_gaps(const double* g, int n, double* R, int ld);

}  // namespace trajgp

#endif  // TRAJGP_KERNEL_HPP_
