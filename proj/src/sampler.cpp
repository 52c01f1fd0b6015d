/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "trajgp/errors.hpp"
#include "trajgp/rng.hpp"

namespace trajgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int this_thread() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace

void McmcConfig::validate() const {
  if (n_iter < 0) throw config_error("mcmc: n_iter must be non-negative");
  if (n_burnin < 0) throw config_error("mcmc: n_burnin must be non-negative");
  if (n_iter > 0 && n_burnin >= n_iter) {
    throw config_error("mcmc: n_burnin must be smaller than n_iter");
  }
  if (!(adapt_mixture_weight > 0.0) || !(adapt_mixture_weight < 1.0)) {
    throw config_error("mcmc: adaptation mixture weight must lie in (0,1)");
  }
  if (!(adapt_jitter > 0.0)) throw config_error("mcmc: adaptation jitter must be positive");
  if (adapt_start < 2) throw config_error("mcmc: adapt_start must be at least 2");
  if (!(init_sigma2 > 0.0) || !(init_phi > 0.0) || !(init_tau2 > 0.0) ||
      !(init_lambda > 0.0)) {
    throw config_error("mcmc: initial parameter values must be positive");
  }
  for (int i = 0; i < 3; ++i) {
    if (sample_theta[i] && !(init_step[i] > 0.0)) {
      throw config_error("mcmc: init_step must be positive for sampled components");
    }
  }
  if (flush_every < 1) throw config_error("mcmc: flush_every must be positive");
}

double PosteriorChain::acceptance_rate(long from) const {
  if (from < 0) from = 0;
  const long n = static_cast<long>(accepted.size());
  if (from >= n) return 0.0;
  long acc = 0;
  for (long i = from; i < n; ++i) acc += accepted[i];
  return static_cast<double>(acc) / static_cast<double>(n - from);
}

FitInputs prepare_fit(const TrajectoryDataset& data, const ModelSpec& spec) {
  Design design = assemble_design(data, spec);
  FitInputs fit;
  fit.design = std::move(design.info);
  fit.priors = spec.priors;
  fit.m = spec.neighbors;
  if (fit.m < 1) throw config_error("prepare_fit: neighbor budget must be >= 1");
  if (spec.spatial_spline) {
    const auto& s = *spec.spatial_spline;
    fit.penalty = build_penalty(s.penalty, s.n_basis_x, s.n_basis_y);
    fit.penalty_rank = penalty_rank(s.penalty, s.n_basis_x, s.n_basis_y);
  }
  fit.blocks.reserve(data.individuals.size());
  for (std::size_t k = 0; k < data.individuals.size(); ++k) {
    IndividualBlock b;
    b.times = data.individuals[k].time;
    b.y = data.individuals[k].outcome;
    b.X = std::move(design.blocks[k]);
    fit.blocks.push_back(std::move(b));
  }
  return fit;
}

Eigen::VectorXd gibbs_psi(const Eigen::MatrixXd& xtlx, const Eigen::VectorXd& xtly,
                          const Eigen::MatrixXd& prior_precision,
                          const Eigen::VectorXd& prior_mean, std::mt19937_64& rng) {
  Eigen::MatrixXd g_mat = xtlx + prior_precision;
  Eigen::LLT<Eigen::MatrixXd> llt(g_mat);
  if (llt.info() != Eigen::Success) {
    throw numeric_error(
        "gibbs_psi: coefficient precision not positive definite (diagonal range [" +
        std::to_string(g_mat.diagonal().minCoeff()) + ", " +
        std::to_string(g_mat.diagonal().maxCoeff()) + "])");
  }
  Eigen::VectorXd g_vec = xtly;
  g_vec.noalias() += prior_precision * prior_mean;
  Eigen::VectorXd draw = llt.solve(g_vec);
  std::normal_distribution<double> z;
  Eigen::VectorXd noise(draw.size());
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = z(rng);
  llt.matrixU().solveInPlace(noise);  // cov(U^{-1} z) = G^{-1}
  draw += noise;
  return draw;
}

double gibbs_lambda(const Eigen::VectorXd& beta_s, const Eigen::MatrixXd& penalty,
                    double shape, double rate, McmcConfig::LambdaUpdate kind,
                    int rank, std::mt19937_64& rng) {
  double h = beta_s.dot(penalty.selfadjointView<Eigen::Lower>() * beta_s);
  const double tol = 1e-8 * (1.0 + beta_s.squaredNorm());
  if (h < -tol) {
    throw numeric_error("gibbs_lambda: negative penalty quadratic form " +
                        std::to_string(h));
  }
  if (h < 0.0) h = 0.0;
  double post_shape, post_rate;
  if (kind == McmcConfig::LambdaUpdate::kPaper) {
    post_shape = shape + 0.5;
    post_rate = rate + h;
  } else {
    post_shape = shape + 0.5 * rank;
    post_rate = rate + 0.5 * h;
  }
  std::gamma_distribution<double> gamma(post_shape, 1.0 / post_rate);
  return gamma(rng);
}

AdaptiveProposal::AdaptiveProposal(const std::array<double, 3>& init_step,
                                   const std::array<bool, 3>& mask, long adapt_start,
                                   double mixture_weight, double jitter, bool adapt)
    : init_step_(init_step),
      mask_(mask),
      adapt_start_(std::max<long>(adapt_start, 2)),
      mixture_weight_(mixture_weight),
      jitter_(jitter),
      adapt_(adapt) {
  for (int i = 0; i < 3; ++i) {
    if (mask_[i]) active_[dim_++] = i;
  }
}

void AdaptiveProposal::observe(const Eigen::Vector3d& state) {
  if (dim_ == 0) return;
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (int s = 0; s < dim_; ++s) x[s] = state[active_[s]];
  ++count_;
  const Eigen::Vector3d delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  ssq_.noalias() += delta * (x - mean_).transpose();
}

Eigen::MatrixXd AdaptiveProposal::empirical_cov() const {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim_, dim_);
  if (count_ > 1) {
    cov = ssq_.topLeftCorner(dim_, dim_) / static_cast<double>(count_ - 1);
  }
  return cov;
}

Eigen::Vector3d AdaptiveProposal::sample_increment(std::mt19937_64& rng) {
  Eigen::Vector3d out = Eigen::Vector3d::Zero();
  if (dim_ == 0) return out;
  std::normal_distribution<double> dist;
  Eigen::VectorXd z(dim_);
  for (int s = 0; s < dim_; ++s) z[s] = dist(rng);

  Eigen::VectorXd inc(dim_);
  const bool adaptive = adapt_ && count_ >= adapt_start_;
  if (!adaptive) {
    for (int s = 0; s < dim_; ++s) inc[s] = init_step_[active_[s]] * z[s];
  } else {
    const double scale = 2.38 * 2.38 / static_cast<double>(dim_);
    Eigen::MatrixXd cov = (1.0 - mixture_weight_) *
                          (scale * empirical_cov() +
                           jitter_ * Eigen::MatrixXd::Identity(dim_, dim_));
    for (int s = 0; s < dim_; ++s) {
      const double step = init_step_[active_[s]];
      cov(s, s) += mixture_weight_ * step * step;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
      inc = llt.matrixL() * z;
    } else {
      for (int s = 0; s < dim_; ++s) inc[s] = init_step_[active_[s]] * z[s];
    }
  }
  for (int s = 0; s < dim_; ++s) out[active_[s]] = inc[s];
  return out;
}

namespace {

// Log prior density of (sigma2, phi, tau2) expressed in the log-transformed
// coordinates (inverse-gamma, gamma, inverse-gamma plus the log-scale
// Jacobian). Normalizing constants are dropped; they cancel in MH ratios.
double log_prior_theta(const Eigen::Vector3d& x, const Priors& pr) {
  const double s2 = std::exp(x[0]);
  const double phi = std::exp(x[1]);
  const double t2 = std::exp(x[2]);
  if (!(s2 > 0.0) || !(phi > 0.0) || !(t2 > 0.0) || !std::isfinite(s2) ||
      !std::isfinite(phi) || !std::isfinite(t2)) {
    return kNegInf;
  }
  double lp = 0.0;
  lp += -(pr.sigma2_shape + 1.0) * std::log(s2) - pr.sigma2_rate / s2;
  lp += (pr.phi_shape - 1.0) * std::log(phi) - pr.phi_rate * phi;
  lp += -(pr.tau2_shape + 1.0) * std::log(t2) - pr.tau2_rate / t2;
  lp += x[0] + x[1] + x[2];  // Jacobian of the log transform
  return lp;
}

class Engine {
 public:
  Engine(const FitInputs& fit, const McmcConfig& cfg, ChainSink* sink)
      : fit_(fit), cfg_(cfg), sink_(sink), rng_(make_rng(cfg.seed)) {
    cfg_.validate();
    fit_.priors.validate();
    k_ = static_cast<int>(fit_.blocks.size());
    p_ = fit_.design.p_star();
    for (const auto& b : fit_.blocks) {
      n_ += b.y.size();
      if (b.X.cols() != p_) {
        throw config_error("run_mcmc: design width " + std::to_string(b.X.cols()) +
                           " does not match model width " + std::to_string(p_));
      }
    }
    const int ns = fit_.design.n_spatial;
    if (ns > 0 && (fit_.penalty.rows() != ns || fit_.penalty.cols() != ns)) {
      throw config_error("run_mcmc: penalty size does not match the spatial block");
    }

    if (p_ > 0) {
      xtx_ = Eigen::MatrixXd::Zero(p_, p_);
      xty_ = Eigen::VectorXd::Zero(p_);
      for (const auto& b : fit_.blocks) {
        xtx_.noalias() += b.X.transpose() * b.X;
        xty_.noalias() += b.X.transpose() * b.y;
      }
      prior_prec_base_ = Eigen::MatrixXd::Zero(p_, p_);
      const double beta_prec = 1.0 / fit_.priors.beta_variance;
      for (int j = 0; j < fit_.design.p_unpenalized; ++j) prior_prec_base_(j, j) = beta_prec;
      prior_mean_ = Eigen::VectorXd::Zero(p_);
      prior_mean_.head(fit_.design.p_unpenalized).setConstant(fit_.priors.beta_mean);
      xtoix_ = Eigen::MatrixXd::Zero(p_, p_);
      xtoiy_ = Eigen::VectorXd::Zero(p_);
    }

    ws_.resize(max_threads());
    resid_.resize(k_);
    block_ll_.assign(k_, 0.0);
    cur_.resize(k_);
    prop_.resize(k_);
  }

  PosteriorChain run();

 private:
  // Residuals y - X psi for the current psi, shared by both likelihood
  // evaluations of the iteration.
  void update_residuals() {
    for (int k = 0; k < k_; ++k) {
      const auto& b = fit_.blocks[k];
      resid_[k] = b.y;
      if (p_ > 0) resid_[k].noalias() -= b.X * psi_;
    }
  }

  // Rebuild factors and Omega for all blocks at the given parameters and
  // compute the collapsed log likelihood. allow_fail turns numerical
  // breakdowns (bad proposals) into -inf instead of exceptions.
  double eval_rebuild(const Eigen::Vector3d& x, std::vector<BlockState>& states,
                      bool allow_fail) {
    const KernelParams kp{std::exp(x[0]), std::exp(x[1])};
    const NoiseParams np{std::exp(x[2])};
    if (!(kp.sigma2 > 0.0) || !(kp.phi > 0.0) || !(np.tau2 > 0.0) ||
        !std::isfinite(kp.sigma2) || !std::isfinite(kp.phi) || !std::isfinite(np.tau2)) {
      return kNegInf;
    }
    bool failed = false;
    std::string first_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < k_; ++k) {
      if (failed) continue;
      try {
        BlockState& st = states[k];
        build_factors_into(st.factor, fit_.blocks[k].times, kp, fit_.m, ws_[this_thread()]);
        st.sum_log_d = st.factor.log_det();
        st.omega = build_omega(st.factor, np.tau2);
        block_ll_[k] = block_pieces(st, resid_[k], np.tau2);
      } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
        {
          if (!failed) first_error = e.what();
          failed = true;
        }
      }
    }
    if (failed) {
      if (allow_fail) return kNegInf;
      throw numeric_error("run_mcmc: likelihood evaluation failed: " + first_error);
    }
    double ll = 0.0;
    for (int k = 0; k < k_; ++k) ll += block_ll_[k];  // fixed order
    return ll;
  }

  // Likelihood at the current parameters reusing the cached factors; only the
  // residual-dependent parts are recomputed.
  double eval_cached(std::vector<BlockState>& states, double tau2) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int k = 0; k < k_; ++k) {
      block_ll_[k] = block_pieces(states[k], resid_[k], tau2);
    }
    double ll = 0.0;
    for (int k = 0; k < k_; ++k) ll += block_ll_[k];
    return ll;
  }

  double block_pieces(BlockState& st, const Eigen::VectorXd& r, double tau2) {
    const double inv_t2 = 1.0 / tau2;
    st.v = r;
    st.omega.solve_in_place(st.v);
    const double n_k = static_cast<double>(r.size());
    const double q2 = (r.dot(r) - r.dot(st.v) * inv_t2) * inv_t2;
    const double log_q1 = n_k * std::log(tau2) + st.sum_log_d + st.omega.log_det();
    return -0.5 * (n_k * kLog2Pi + log_q1 + q2);
  }

  // X' Omega^{-1} X and X' Omega^{-1} y at the current parameters, computed
  // blockwise with multi-right-hand-side banded solves. This is the only
  // p*-quadratic work in an iteration and runs only when a proposal was
  // accepted (or caching is off).
  void recompute_quadratics() {
    xtoix_.setZero();
    xtoiy_.setZero();
    constexpr int kChunk = 16;
    for (int k = 0; k < k_; ++k) {
      const auto& x_blk = fit_.blocks[k].X;
      const auto& y_blk = fit_.blocks[k].y;
      const long t = x_blk.rows();
      if (t == 0) continue;
      const BandCholesky& omega = cur_[k].omega;
      buf_.resize(static_cast<std::size_t>(t) * kChunk);
      for (int c0 = 0; c0 < p_; c0 += kChunk) {
        const int bc = std::min(kChunk, p_ - c0);
        // Row-major staging so the banded solves vectorize across columns.
        for (long i = 0; i < t; ++i) {
          for (int j = 0; j < bc; ++j) buf_[i * bc + j] = x_blk(i, c0 + j);
        }
        omega.solve_block_in_place(buf_.data(), bc);
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>
            z(buf_.data(), t, bc);
        xtoix_.middleCols(c0, bc).noalias() += x_blk.transpose() * z;
        xtoiy_.segment(c0, bc).noalias() += z.transpose() * y_blk;
      }
    }
  }

  const FitInputs& fit_;
  McmcConfig cfg_;
  ChainSink* sink_;
  int k_ = 0;
  int p_ = 0;
  long n_ = 0;

  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
  Eigen::MatrixXd prior_prec_base_;
  Eigen::VectorXd prior_mean_;

  Eigen::VectorXd psi_;
  Eigen::Vector3d x_ = Eigen::Vector3d::Zero();
  double lambda_ = 1.0;
  double ll_cur_ = 0.0;
  std::vector<BlockState> cur_, prop_;
  Eigen::MatrixXd xtoix_;
  Eigen::VectorXd xtoiy_;

  std::vector<FactorWorkspace> ws_;
  std::vector<Eigen::VectorXd> resid_;
  std::vector<double> block_ll_;
  std::vector<double> buf_;
  std::mt19937_64 rng_;
};

PosteriorChain Engine::run() {
  const int ns = fit_.design.n_spatial;
  const bool with_likelihood = !cfg_.prior_only && n_ > 0;

  // Starting coefficients: configured, or a ridge-stabilized least-squares
  // fit (exactly collinear columns are possible: intercepts + partition-of-
  // unity spline blocks).
  if (p_ > 0) {
    if (cfg_.init_psi) {
      if (cfg_.init_psi->size() != p_) {
        throw config_error("mcmc: init_psi length does not match design width");
      }
      psi_ = *cfg_.init_psi;
    } else if (n_ > 0) {
      const double ridge = 1e-8 * std::max(1.0, xtx_.diagonal().maxCoeff());
      Eigen::MatrixXd a = xtx_;
      a.diagonal().array() += ridge;
      psi_ = Eigen::LDLT<Eigen::MatrixXd>(a).solve(xty_);
    } else {
      psi_ = prior_mean_;
    }
  } else {
    psi_.resize(0);
  }
  x_ = Eigen::Vector3d(std::log(cfg_.init_sigma2), std::log(cfg_.init_phi),
                       std::log(cfg_.init_tau2));
  lambda_ = cfg_.init_lambda;

  PosteriorChain chain;
  chain.psi.resize(cfg_.n_iter, p_);
  chain.sigma2.resize(cfg_.n_iter);
  chain.phi.resize(cfg_.n_iter);
  chain.tau2.resize(cfg_.n_iter);
  chain.lambda.resize(cfg_.n_iter);
  chain.accepted.assign(cfg_.n_iter, 0);
  if (sink_) sink_->begin(fit_.design.column_names);
  if (cfg_.n_iter == 0) {
    if (sink_) sink_->finish();
    return chain;
  }

  if (with_likelihood) {
    update_residuals();
    ll_cur_ = eval_rebuild(x_, cur_, /*allow_fail=*/false);
    if (!std::isfinite(ll_cur_)) {
      throw numeric_error("run_mcmc: non-finite log likelihood at the initial state");
    }
    if (p_ > 0 && cfg_.update_psi) recompute_quadratics();
  }

  AdaptiveProposal proposal(cfg_.init_step, cfg_.sample_theta, cfg_.adapt_start,
                            cfg_.adapt_mixture_weight, cfg_.adapt_jitter, cfg_.adapt);
  const bool any_theta =
      cfg_.sample_theta[0] || cfg_.sample_theta[1] || cfg_.sample_theta[2];
  std::uniform_real_distribution<double> unif;

  for (long iter = 0; iter < cfg_.n_iter; ++iter) {
    bool accepted = false;
    if (with_likelihood) {
      update_residuals();
      if (cfg_.use_cache) {
        ll_cur_ = eval_cached(cur_, std::exp(x_[2]));
      } else {
        ll_cur_ = eval_rebuild(x_, cur_, /*allow_fail=*/false);
      }
    }
    if (any_theta) {
      const Eigen::Vector3d inc = proposal.sample_increment(rng_);
      const Eigen::Vector3d x_prop = x_ + inc;
      const double ll_prop =
          with_likelihood ? eval_rebuild(x_prop, prop_, /*allow_fail=*/true) : 0.0;
      const double target_cur =
          (with_likelihood ? ll_cur_ : 0.0) + log_prior_theta(x_, fit_.priors);
      const double target_prop =
          (std::isfinite(ll_prop) ? ll_prop : kNegInf) + log_prior_theta(x_prop, fit_.priors);
      const double log_u = std::log(unif(rng_));
      if (std::isfinite(target_prop) && log_u < target_prop - target_cur) {
        accepted = true;
        x_ = x_prop;
        ll_cur_ = ll_prop;
        std::swap(cur_, prop_);
        if (with_likelihood && p_ > 0 && cfg_.update_psi) recompute_quadratics();
      }
      proposal.observe(x_);
    }

    if (cfg_.update_psi && p_ > 0) {
      const double tau2 = std::exp(x_[2]);
      const double inv_t2 = 1.0 / tau2;
      Eigen::MatrixXd prior_prec = prior_prec_base_;
      if (ns > 0) {
        prior_prec.bottomRightCorner(ns, ns) += lambda_ * fit_.penalty;
      }
      if (with_likelihood) {
        Eigen::MatrixXd xtlx = xtx_ * inv_t2 - xtoix_ * (inv_t2 * inv_t2);
        Eigen::VectorXd xtly = xty_ * inv_t2 - xtoiy_ * (inv_t2 * inv_t2);
        psi_ = gibbs_psi(xtlx, xtly, prior_prec, prior_mean_, rng_);
      } else {
        psi_ = gibbs_psi(Eigen::MatrixXd::Zero(p_, p_), Eigen::VectorXd::Zero(p_),
                         prior_prec, prior_mean_, rng_);
      }
    }

    if (cfg_.update_lambda && ns > 0) {
      lambda_ = gibbs_lambda(psi_.tail(ns), fit_.penalty, fit_.priors.lambda_shape,
                             fit_.priors.lambda_rate, cfg_.lambda_update,
                             fit_.penalty_rank, rng_);
    }

    chain.sigma2[iter] = std::exp(x_[0]);
    chain.phi[iter] = std::exp(x_[1]);
    chain.tau2[iter] = std::exp(x_[2]);
    chain.lambda[iter] = lambda_;
    if (p_ > 0) chain.psi.row(iter) = psi_.transpose();
    chain.accepted[iter] = accepted ? 1 : 0;
    if (sink_) {
      sink_->row(iter, accepted, chain.sigma2[iter], chain.phi[iter],
                 chain.tau2[iter], lambda_, psi_);
    }
  }
  if (sink_) sink_->finish();
  return chain;
}

}  // namespace

PosteriorChain run_mcmc(const FitInputs& fit, const McmcConfig& config,
                        ChainSink* sink) {
  Engine engine(fit, config, sink);
  return engine.run();
}

}  // namespace trajgp
