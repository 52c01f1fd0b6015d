/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_VECCHIA_HPP_
#define TRAJGP_VECCHIA_HPP_

#include <Eigen/Dense>
#include <vector>

#include "trajgp/banded.hpp"
#include "trajgp/kernel.hpp"

namespace trajgp {

// Past-nearest-neighbor conditioning sets on time-ordered points: point i
// conditions on its (up to) m immediate predecessors. Because time ordering
// makes the nearest past points the most correlated ones under a monotone
// decay, the windows are contiguous index ranges [window_start(i), i).
struct NeighborIndex {
  int n = 0;
  int m = 0;

  static NeighborIndex build(int n, int m);

  int window_start(int i) const { return i > m ? i - m : 0; }
  int window_size(int i) const { return i - window_start(i); }
  std::vector<int> neighbors(int i) const;  // explicit set, for diagnostics
};

// Sparse factorization of the approximate inverse covariance:
//   Ctilde^{-1} = (I - A)^T D^{-1} (I - A)
// with A strictly lower triangular and banded (row i carries weights on the
// conditioning window of i) and D = diag(d) the conditional variances.
struct VecchiaFactor {
  int n = 0;
  int m = 0;
  std::vector<double> coef;  // n*m row-major; row i weights times window_start(i)+r
  std::vector<double> d;     // conditional variances, all > 0

  int window_start(int i) const { return i > m ? i - m : 0; }
  int window_size(int i) const { return i - window_start(i); }

  double log_det() const;                 // log det Ctilde = sum log d_i
  double quadform(const double* w) const; // w^T Ctilde^{-1} w, O(n m)
  void apply_whitening(const double* w, double* out) const;  // out = (I - A) w
};

// Reusable scratch for factor construction (avoids per-call allocation in
// the sampler's hot loop).
struct FactorWorkspace {
  std::vector<double> gaps;   // per-gap decay factors
  std::vector<double> corr;   // (m+1)^2 window correlation block
  std::vector<double> cross;  // correlations to the conditioned point
  std::vector<double> sol;    // conditional weights
};

// Builds the factor for one individual's strictly increasing times. Each row
// solves Corr[N(i),N(i)] a_i = Corr[N(i),i] (the marginal variance cancels);
// d_i = sigma2 (1 - c_i^T a_i). All window correlations come from running
// products of per-gap decay factors, so the build does n exp() calls total.
// Throws data_error if times are not strictly increasing, numeric_error if a
// conditional variance is not positive.
void build_factors_into(VecchiaFactor& f, const Eigen::VectorXd& times,
                        const KernelParams& kp, int m, FactorWorkspace& ws);
VecchiaFactor build_factors(const Eigen::VectorXd& times, const KernelParams& kp,
                            int m);

// Cholesky factor of Omega = Ctilde^{-1} + tau^{-2} I (bandwidth m). Its
// log_det() feeds the collapsed likelihood determinant identity
//   log det(Ctilde + tau2 I) = n log tau2 + log det Ctilde + log det Omega.
BandCholesky build_omega(const VecchiaFactor& f, double tau2);

// Observations of one individual: times (strictly increasing, seconds), the
// outcome, and its rows of the regression design (may have zero columns).
struct IndividualBlock {
  Eigen::VectorXd times;
  Eigen::VectorXd y;
  Eigen::MatrixXd X;
};

// Per-individual state reused across likelihood evaluations at fixed
// parameters; the sampler keeps two sets (current / candidate) and swaps.
struct BlockState {
  VecchiaFactor factor;
  BandCholesky omega;
  Eigen::VectorXd v;  // Omega^{-1} r for the most recent residual
  double sum_log_d = 0.0;
};

// Marginal (collapsed) Gaussian log likelihood
//   log N(y | X psi, sigma2 Ctilde_corr + tau2 I)
// accumulated over individuals through the banded Woodbury route; never forms
// an n x n matrix. Returns -inf for degenerate parameters (any of sigma2,
// phi, tau2 not strictly positive and finite). When `states` is non-null it
// is resized and filled so callers can reuse the factored quantities.
double collapsed_loglik(const std::vector<IndividualBlock>& blocks,
                        const Eigen::VectorXd& psi, const KernelParams& kp,
                        const NoiseParams& np, int m,
                        std::vector<BlockState>* states = nullptr);

}  // namespace trajgp

#endif  // TRAJGP_VECCHIA_HPP_
