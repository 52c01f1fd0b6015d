/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_SAMPLER_HPP_
#define TRAJGP_SAMPLER_HPP_

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "trajgp/design.hpp"
#include "trajgp/vecchia.hpp"

namespace trajgp {

struct McmcConfig {
  long n_iter = 1000;
  long n_burnin = 0;
  std::uint64_t seed = 0;

  // Adaptive random-walk proposal on (log sigma2, log phi, log tau2): fixed
  // diagonal steps until adapt_start observations, then the mixture
  //   (1 - w) * (2.38^2/dim * empirical chain covariance + jitter I)
  //   + w * diag(init_step^2).
  long adapt_start = 500;
  double adapt_mixture_weight = 0.05;
  double adapt_jitter = 1e-6;
  bool adapt = true;
  std::array<double, 3> init_step{0.1, 0.1, 0.1};

  double init_sigma2 = 1.0, init_phi = 1.0, init_tau2 = 1.0, init_lambda = 1.0;
  std::optional<Eigen::VectorXd> init_psi;  // default: least-squares fit

  enum class LambdaUpdate { kPaper, kConjugate };
  // kPaper follows the source algorithm verbatim: shape alpha + 1/2, rate
  // beta + b'Pb. kConjugate is the textbook update for the same prior:
  // shape alpha + rank(P)/2, rate beta + b'Pb/2.
  LambdaUpdate lambda_update = LambdaUpdate::kPaper;

  bool update_psi = true;
  bool update_lambda = true;
  std::array<bool, 3> sample_theta{true, true, true};  // sigma2, phi, tau2
  bool prior_only = false;  // drop the likelihood from the MH target
  bool use_cache = true;    // rejection-aware reuse of factored quantities
  long flush_every = 500;

  void validate() const;  // throws config_error
};

struct PosteriorChain {
  Eigen::MatrixXd psi;  // n_iter x p*
  Eigen::VectorXd sigma2, phi, tau2, lambda;
  std::vector<std::uint8_t> accepted;

  long size() const { return static_cast<long>(sigma2.size()); }
  double acceptance_rate(long from = 0) const;
};

// Streaming consumer of chain rows (the CLI's append-to-disk writer
// implements this; tests use in-memory fakes).
class ChainSink {
 public:
  virtual ~ChainSink() = default;
  virtual void begin(const std::vector<std::string>& psi_names) { (void)psi_names; }
  virtual void row(long iteration, bool accepted, double sigma2, double phi,
                   double tau2, double lambda, const Eigen::VectorXd& psi) = 0;
  virtual void finish() {}
};

// Everything run_mcmc needs, assembled once per dataset/model pair.
struct FitInputs {
  std::vector<IndividualBlock> blocks;
  DesignInfo design;
  Priors priors;
  Eigen::MatrixXd penalty;  // n_spatial x n_spatial; 0 x 0 when no spatial term
  int penalty_rank = 0;
  int m = 10;
};

FitInputs prepare_fit(const TrajectoryDataset& data, const ModelSpec& spec);

// Draw from N(G^{-1} g, G^{-1}) with G = xtlx + prior_precision and
// g = xtly + prior_precision * prior_mean, via dense Cholesky of G.
// Throws numeric_error (with diagonal diagnostics) if G is not numerically PD.
Eigen::VectorXd gibbs_psi(const Eigen::MatrixXd& xtlx, const Eigen::VectorXd& xtly,
                          const Eigen::MatrixXd& prior_precision,
                          const Eigen::VectorXd& prior_mean, std::mt19937_64& rng);

// Full-conditional draw of the smoothing precision lambda.
double gibbs_lambda(const Eigen::VectorXd& beta_s, const Eigen::MatrixXd& penalty,
                    double shape, double rate, McmcConfig::LambdaUpdate kind,
                    int rank, std::mt19937_64& rng);

// Adaptive multivariate random-walk proposal (exposed for direct testing).
// Components with mask[i] == false never move. The empirical covariance is
// accumulated over the whole observed chain history.
class AdaptiveProposal {
 public:
  AdaptiveProposal(const std::array<double, 3>& init_step,
                   const std::array<bool, 3>& mask, long adapt_start,
                   double mixture_weight, double jitter, bool adapt);

  void observe(const Eigen::Vector3d& state);
  Eigen::Vector3d sample_increment(std::mt19937_64& rng);
  long observed() const { return count_; }
  Eigen::MatrixXd empirical_cov() const;  // active components only

 private:
  std::array<double, 3> init_step_;
  std::array<bool, 3> mask_;
  long adapt_start_;
  double mixture_weight_, jitter_;
  bool adapt_;
  int dim_ = 0;            // number of active components
  std::array<int, 3> active_{};  // active slot -> component index
  long count_ = 0;
  Eigen::Vector3d mean_ = Eigen::Vector3d::Zero();   // over active slots
  Eigen::Matrix3d ssq_ = Eigen::Matrix3d::Zero();    // centered sum of squares
};

PosteriorChain run_mcmc(const FitInputs& fit, const McmcConfig& config,
                        ChainSink* sink = nullptr);

}  // namespace trajgp

#endif  // TRAJGP_SAMPLER_HPP_
