/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_PREDICT_HPP_
#define TRAJGP_PREDICT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "trajgp/banded.hpp"
#include "trajgp/kernel.hpp"
#include "trajgp/sampler.hpp"
#include "trajgp/vecchia.hpp"

namespace trajgp {

// Evaluation points of one individual, aligned with a training block: new
// times (any order relative to training times) and their design rows.
struct EvalBlock {
  int train_index = 0;     // which FitInputs block these points belong to
  Eigen::VectorXd times;
  Eigen::MatrixXd X;       // n_points x p*
};

struct PredictionResult {
  Eigen::VectorXd mean, lo, hi;  // per point, dataset order
};

// Conditional draw (or mean, when rng is null) of the latent process at the
// observed times: w | y, psi, theta, tau2 ~ N(Omega^{-1} r / tau2, Omega^{-1})
// with r the residual y - X psi.
Eigen::VectorXd recover_w(const BandCholesky& omega, const Eigen::VectorXd& r,
                          double tau2, std::mt19937_64* rng);

// Kriging moments of w(t0) conditioned on the m observed points nearest to t0
// by |dt| (both sides; the time-ordered window is contiguous). Returns
// {mean, variance}. Throws data_error on an empty observed set.
std::pair<double, double> interpolate_w(const Eigen::VectorXd& times,
                                        const Eigen::VectorXd& w, double t0,
                                        const KernelParams& kp, int m);

// Composition sampling over retained chain draws (burn-in dropped, every
// thin-th draw kept): for each draw, recover w on the training block,
// interpolate it at the evaluation times, add the regression mean and
// predictive noise; summarize pointwise by mean and equal-tailed intervals.
PredictionResult predict(const PosteriorChain& chain, long burnin, int thin,
                         const FitInputs& fit, const std::vector<EvalBlock>& eval,
                         double level, std::uint64_t seed);

struct Metrics {
  double coverage = 0.0;
  double rmspe = 0.0;
  double rel_rmspe = 0.0;  // rmspe / rmspe of the training-mean predictor
  double piw = 0.0;
};

// train_mean is the training-outcome average defining the trivial reference
// predictor for rel_rmspe. Throws data_error on empty/misaligned input.
Metrics compute_metrics(const PredictionResult& pred, const Eigen::VectorXd& truth,
                        double train_mean);

// Deviance information criterion over the retained draws: 2 * mean deviance
// minus the deviance at the posterior-mean parameters, deviance being -2x the
// collapsed log likelihood (normalizing constant included).
double dic(const PosteriorChain& chain, long burnin, int thin, const FitInputs& fit);

// Equal-tailed empirical quantile (linear interpolation between order
// statistics); exposed for reuse in reports.
double quantile(std::vector<double>& values, double p);

}  // namespace trajgp

#endif  // TRAJGP_PREDICT_HPP_
