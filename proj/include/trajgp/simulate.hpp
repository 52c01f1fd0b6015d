/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_SIMULATE_HPP_
#define TRAJGP_SIMULATE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trajgp/dataset.hpp"
#include "trajgp/kernel.hpp"
#include "trajgp/splines.hpp"

namespace trajgp {

struct SurfaceConfig {
  int n_basis_x = 9;
  int n_basis_y = 9;
  int degree = 2;
  double coef_variance = 0.5;  // variance of the independent coefficient draws
};

struct SimConfig {
  int individuals = 1;
  long points_per_individual = 1000;
  double waiting_rate = 5.0;  // exponential gap rate; mean gap 1/rate seconds
  double lo_x = 1.0, hi_x = 10.0, lo_y = 1.0, hi_y = 10.0;
  KernelParams kernel;  // sigma2 >= 0 accepted (0 switches the process off)
  NoiseParams noise;    // tau2 >= 0 accepted
  std::vector<double> intercepts;  // per individual, or a single shared value
  bool common_intercept = false;
  std::vector<double> slopes;  // one i.i.d. N(0,1) covariate per slope
  std::optional<SurfaceConfig> surface;
  double rw_step_variance = 0.01;  // per-axis position step variance per second
  std::uint64_t seed = 0;
  std::string start_timestamp = "2017-05-01T07:00:00.000Z";

  void validate() const;  // throws config_error
};

struct SimTruth {
  Eigen::VectorXd surface_coef;  // empty when no surface configured
};

// Event times with i.i.d. Exponential(rate) waiting gaps, first time 0.
Eigen::VectorXd gen_times(long t_count, double rate, std::mt19937_64& rng);
Eigen::VectorXd gen_times(long t_count, double rate, std::uint64_t seed);

// Per-axis Gaussian random walk started uniformly inside the rectangle, step
// variance step_var * elapsed seconds, clamped coordinate-wise to the border.
Eigen::MatrixXd gen_trajectory(const Eigen::VectorXd& times, double lo_x, double hi_x,
                               double lo_y, double hi_y, double step_var,
                               std::mt19937_64& rng);

// Exact sequential draw of the exponential-kernel process at the given times:
//   w_1 ~ N(0, sigma2),  w_{i+1} | w_i ~ N(rho_i w_i, sigma2 (1 - rho_i^2)),
// rho_i = exp(-phi dt_i). Marginally reproduces cov_matrix exactly, with O(T)
// work, which is what makes 10^5-point replicates practical.
Eigen::VectorXd gen_ou_process(const Eigen::VectorXd& times, const KernelParams& kp,
                               std::mt19937_64& rng);

Eigen::VectorXd gen_surface_coef(int count, double variance, std::mt19937_64& rng);

// Full generative draw: y = intercept + slopes . covariates + surface + w + noise.
// Times are committed to the 1 ms wall-clock grid (rounded, then bumped
// forward to stay strictly increasing) so that a written dataset re-ingests
// bit-identically; at the default 0.2 s mean gap the perturbation is
// statistically invisible. Deterministic per seed via per-individual,
// per-component sub-streams.
TrajectoryDataset gen_dataset(const SimConfig& config, SimTruth* truth = nullptr);

}  // namespace trajgp

#endif  // TRAJGP_SIMULATE_HPP_
