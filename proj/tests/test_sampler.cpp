/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "trajgp/errors.hpp"
#include "trajgp/kernel.hpp"
#include "trajgp/rng.hpp"
#include "trajgp/sampler.hpp"
#include "trajgp/simulate.hpp"
#include "trajgp/splines.hpp"

using namespace trajgp;

namespace {

template <typename A, typename B>
bool bit_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.derived().array() == b.derived().array()).all();
}

// One-block inputs with outcome from the exact generative model.
FitInputs toy_fit(int t_count, int p, int m, std::uint64_t seed,
                  const KernelParams& kp = {1.0, 1.0},
                  const NoiseParams& np = {1.0}) {
  auto rng = make_rng(seed);
  IndividualBlock b;
  b.times = test_util::random_times(t_count, 5.0, rng);
  b.X.resize(t_count, p);
  std::normal_distribution<double> z;
  for (int i = 0; i < t_count; ++i) {
    for (int j = 0; j < p; ++j) b.X(i, j) = j == 0 ? 1.0 : z(rng);
  }
  const Eigen::VectorXd w = gen_ou_process(b.times, kp, rng);
  b.y.resize(t_count);
  for (int i = 0; i < t_count; ++i) {
    b.y[i] = (p > 0 ? b.X(i, 0) * 0.7 : 0.0) + w[i] + std::sqrt(np.tau2) * z(rng);
  }
  FitInputs fit;
  fit.blocks.push_back(std::move(b));
  fit.design.p_unpenalized = p;
  for (int j = 0; j < p; ++j) {
    fit.design.column_names.push_back("c" + std::to_string(j));
  }
  fit.m = m;
  return fit;
}

// Piecewise-linear CDF interpolation over a grid.
double grid_cdf(const std::vector<double>& x, const std::vector<double>& cdf,
                double q) {
  if (q <= x.front()) return 0.0;
  if (q >= x.back()) return 1.0;
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const double w = (q - x[j - 1]) / (x[j] - x[j - 1]);
  return cdf[j - 1] + w * (cdf[j] - cdf[j - 1]);
}

class CountingSink : public ChainSink {
 public:
  int begins = 0, finishes = 0;
  long rows = 0, last_iteration = -1;
  std::vector<std::string> names;
  void begin(const std::vector<std::string>& psi_names) override {
    ++begins;
    names = psi_names;
  }
  void row(long iteration, bool, double, double, double, double,
           const Eigen::VectorXd&) override {
    CHECK(iteration == last_iteration + 1);
    last_iteration = iteration;
    ++rows;
  }
  void finish() override { ++finishes; }
};

}  // namespace

TEST_SUITE("sampler") {

TEST_CASE("coefficient draw targets N(G^-1 g, G^-1)") {
  Eigen::MatrixXd a(5, 3);
  a << 1.0, 0.2, -0.5, 0.7, 1.1, 0.3, -0.4, 0.6, 1.2, 0.1, -0.9, 0.8, 0.5, 0.4,
      -0.3;
  const Eigen::MatrixXd xtlx = a.transpose() * a;
  Eigen::VectorXd xtly(3);
  xtly << 1.4, -0.6, 2.1;
  const Eigen::MatrixXd prior_prec = 0.5 * Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd prior_mean(3);
  prior_mean << 1.0, -1.0, 2.0;

  const Eigen::MatrixXd g_mat = xtlx + prior_prec;
  const Eigen::MatrixXd cov = g_mat.inverse();
  const Eigen::VectorXd mean = cov * (xtly + prior_prec * prior_mean);

  const int n = 30000;
  auto rng = make_rng(101);
  Eigen::MatrixXd draws(n, 3);
  for (int i = 0; i < n; ++i) {
    draws.row(i) =
        gibbs_psi(xtlx, xtly, prior_prec, prior_mean, rng).transpose();
  }
  const Eigen::RowVectorXd mc_mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mc_mean;
  const Eigen::MatrixXd mc_cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(mc_mean[i] - mean[i]) < 5 * std::sqrt(cov(i, i) / n));
    for (int j = 0; j <= i; ++j) {
      const double se =
          std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / n);
      CHECK(std::abs(mc_cov(i, j) - cov(i, j)) < 5 * se);
    }
  }
}

TEST_CASE("coefficient draw rejects an indefinite precision") {
  auto rng = make_rng(1);
  const Eigen::MatrixXd bad = -10.0 * Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(gibbs_psi(bad, Eigen::VectorXd::Zero(2),
                            Eigen::MatrixXd::Identity(2, 2),
                            Eigen::VectorXd::Zero(2), rng),
                  numeric_error);
}

TEST_CASE("smoothing-precision draw matches its gamma full conditional") {
  const Eigen::MatrixXd penalty = build_penalty(PenaltyKind::kRandomWalk, 2, 2);
  const int rank = penalty_rank(PenaltyKind::kRandomWalk, 2, 2);
  REQUIRE(rank == 3);
  Eigen::VectorXd beta(4);
  beta << 0.3, -0.7, 0.5, 0.1;
  const double h = beta.dot(penalty * beta);
  REQUIRE(h > 0.0);
  const double shape = 1.0, rate = 1.0;

  const int n = 20000;
  std::vector<double> draws(n);

  SUBCASE("source-algorithm update") {
    auto rng = make_rng(55);
    for (int i = 0; i < n; ++i) {
      draws[static_cast<std::size_t>(i)] =
          gibbs_lambda(beta, penalty, shape, rate,
                       McmcConfig::LambdaUpdate::kPaper, rank, rng);
    }
    const double d = test_util::ks_distance(draws, [&](double x) {
      return test_util::gamma_cdf(x, shape + 0.5, rate + h);
    });
    CHECK(d < test_util::ks_crit_1pct(draws.size()));
  }

  SUBCASE("conjugate update uses the penalty rank") {
    auto rng = make_rng(56);
    for (int i = 0; i < n; ++i) {
      draws[static_cast<std::size_t>(i)] =
          gibbs_lambda(beta, penalty, shape, rate,
                       McmcConfig::LambdaUpdate::kConjugate, rank, rng);
    }
    const double d = test_util::ks_distance(draws, [&](double x) {
      return test_util::gamma_cdf(x, shape + 0.5 * rank, rate + 0.5 * h);
    });
    CHECK(d < test_util::ks_crit_1pct(draws.size()));
  }
}

TEST_CASE("proposal: masked components never move") {
  AdaptiveProposal prop({0.2, 0.3, 0.4}, {true, false, true}, 10, 0.05, 1e-6,
                        true);
  auto rng = make_rng(8);
  double sum0 = 0.0, sum2 = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d inc = prop.sample_increment(rng);
    CHECK(inc[1] == 0.0);
    sum0 += inc[0] * inc[0];
    sum2 += inc[2] * inc[2];
  }
  // Pre-adaptation the increments are independent N(0, step^2).
  CHECK(std::sqrt(sum0 / n) == doctest::Approx(0.2).epsilon(0.02));
  CHECK(std::sqrt(sum2 / n) == doctest::Approx(0.4).epsilon(0.02));
}

TEST_CASE("proposal: streaming covariance matches a direct computation") {
  AdaptiveProposal prop({0.1, 0.1, 0.1}, {true, true, true}, 1000000, 0.05,
                        1e-6, true);
  auto rng = make_rng(9);
  std::normal_distribution<double> z;
  const int n = 500;
  Eigen::MatrixXd obs(n, 3);
  for (int i = 0; i < n; ++i) {
    const double u = z(rng), v = z(rng), w = z(rng);
    obs.row(i) << u, 0.7 * u + v, 0.2 * u - 0.5 * v + 2.0 * w;
    prop.observe(obs.row(i).transpose());
  }
  REQUIRE(prop.observed() == n);
  const Eigen::RowVectorXd mean = obs.colwise().mean();
  const Eigen::MatrixXd centered = obs.rowwise() - mean;
  const Eigen::MatrixXd direct =
      centered.transpose() * centered / static_cast<double>(n - 1);
  const Eigen::MatrixXd streamed = prop.empirical_cov();
  REQUIRE(streamed.rows() == 3);
  CHECK((streamed - direct).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("proposal: adapted increments follow the mixture covariance") {
  const std::array<double, 3> step{0.15, 0.25, 0.35};
  AdaptiveProposal prop(step, {true, true, true}, 2, 0.05, 1e-6, true);
  auto rng = make_rng(10);
  std::normal_distribution<double> z;
  for (int i = 0; i < 5000; ++i) {
    const double u = z(rng), v = z(rng), w = z(rng);
    prop.observe(Eigen::Vector3d(u, 0.6 * u + 0.8 * v, -0.3 * v + 1.5 * w));
  }
  const Eigen::MatrixXd emp = prop.empirical_cov();
  Eigen::MatrixXd target =
      0.95 * ((2.38 * 2.38 / 3.0) * emp +
              1e-6 * Eigen::MatrixXd::Identity(3, 3));
  for (int s = 0; s < 3; ++s) {
    target(s, s) += 0.05 * step[static_cast<std::size_t>(s)] *
                    step[static_cast<std::size_t>(s)];
  }

  const int n = 200000;
  Eigen::MatrixXd incs(n, 3);
  for (int i = 0; i < n; ++i) incs.row(i) = prop.sample_increment(rng).transpose();
  const Eigen::RowVectorXd mean = incs.colwise().mean();
  const Eigen::MatrixXd centered = incs.rowwise() - mean;
  const Eigen::MatrixXd mc = centered.transpose() * centered /
                             static_cast<double>(n - 1);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double se = std::sqrt(
          (target(i, i) * target(j, j) + target(i, j) * target(i, j)) / n);
      CHECK(std::abs(mc(i, j) - target(i, j)) < 5 * se);
    }
  }
}

TEST_CASE("with no data the chain samples the parameter priors") {
  FitInputs fit;  // zero blocks, zero-width design: target reduces to the prior
  fit.m = 10;
  McmcConfig cfg;
  cfg.n_iter = 170000;
  cfg.seed = 2024;
  const PosteriorChain chain = run_mcmc(fit, cfg);

  const long burn = 20000, thin = 60;
  std::vector<double> s2, ph, t2;
  for (long i = burn; i < chain.size(); i += thin) {
    s2.push_back(chain.sigma2[i]);
    ph.push_back(chain.phi[i]);
    t2.push_back(chain.tau2[i]);
  }
  REQUIRE(s2.size() == 2500);
  const double crit = test_util::ks_crit_1pct(s2.size());
  CHECK(test_util::ks_distance(s2, [](double x) {
          return test_util::inv_gamma_cdf(x, 2.0, 2.0);
        }) < crit);
  CHECK(test_util::ks_distance(ph, [](double x) {
          return test_util::gamma_cdf(x, 1.0, 1.0);
        }) < crit);
  CHECK(test_util::ks_distance(t2, [](double x) {
          return test_util::inv_gamma_cdf(x, 2.0, 2.0);
        }) < crit);
  // Spot check against the closed inverse-gamma form (shape 2, rate 2).
  CHECK(test_util::inv_gamma_cdf(2.0, 2.0, 2.0) ==
        doctest::Approx((1.0 + 1.0) * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("variance chain matches a quadrature of its exact posterior") {
  // One individual, decay and noise held fixed, only sigma2 sampled: the
  // marginal posterior is one-dimensional and can be tabulated exactly.
  FitInputs fit = toy_fit(40, 0, 5, 314, {1.4, 1.1}, {0.8});
  const double phi0 = 1.1, tau20 = 0.8;

  McmcConfig cfg;
  cfg.n_iter = 40000;
  cfg.seed = 77;
  cfg.sample_theta = {true, false, false};
  cfg.init_phi = phi0;
  cfg.init_tau2 = tau20;
  cfg.update_psi = false;
  cfg.update_lambda = false;
  const PosteriorChain chain = run_mcmc(fit, cfg);
  CHECK(chain.phi.minCoeff() == chain.phi.maxCoeff());  // held fixed

  // Log target over a log-variance grid: collapsed likelihood + IG(2,2)
  // density + the log-scale Jacobian.
  const Eigen::VectorXd psi(0);
  std::vector<double> xg, logf;
  for (double x = -4.0; x <= 4.0; x += 0.005) {
    const double s2 = std::exp(x);
    const double ll = collapsed_loglik(fit.blocks, psi, {s2, phi0}, {tau20},
                                       fit.m);
    logf.push_back(ll - 3.0 * std::log(s2) - 2.0 / s2 + x);
    xg.push_back(x);
  }
  const double peak = *std::max_element(logf.begin(), logf.end());
  std::vector<double> cdf(xg.size(), 0.0);
  for (std::size_t j = 1; j < xg.size(); ++j) {
    const double area = 0.5 * (std::exp(logf[j] - peak) +
                               std::exp(logf[j - 1] - peak)) *
                        (xg[j] - xg[j - 1]);
    cdf[j] = cdf[j - 1] + area;
  }
  const double total = cdf.back();
  REQUIRE(total > 0.0);
  for (double& c : cdf) c /= total;

  std::vector<double> sample;
  for (long i = 5000; i < chain.size(); i += 20) {
    sample.push_back(std::log(chain.sigma2[i]));
  }
  const double d = test_util::ks_distance(
      sample, [&](double q) { return grid_cdf(xg, cdf, q); });
  CHECK(d < test_util::ks_crit_1pct(sample.size()));
}

TEST_CASE("coefficient conditional at fixed covariance parameters") {
  const KernelParams kp{1.3, 0.9};
  const NoiseParams np{0.6};
  FitInputs fit = toy_fit(30, 2, 29, 271, kp, np);
  fit.priors.beta_variance = 4.0;

  McmcConfig cfg;
  cfg.n_iter = 20000;
  cfg.seed = 13;
  cfg.sample_theta = {false, false, false};
  cfg.init_sigma2 = kp.sigma2;
  cfg.init_phi = kp.phi;
  cfg.init_tau2 = np.tau2;
  cfg.update_lambda = false;
  const PosteriorChain chain = run_mcmc(fit, cfg);

  // Dense reference: with the window budget at T-1 the likelihood is exact.
  const IndividualBlock& b = fit.blocks[0];
  const Eigen::MatrixXd lam =
      cov_matrix(b.times, kp) +
      np.tau2 * Eigen::MatrixXd::Identity(b.times.size(), b.times.size());
  const Eigen::MatrixXd lam_inv = lam.inverse();
  const Eigen::MatrixXd g_mat =
      b.X.transpose() * lam_inv * b.X +
      (1.0 / fit.priors.beta_variance) * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd cov = g_mat.inverse();
  const Eigen::VectorXd mean = cov * (b.X.transpose() * (lam_inv * b.y));

  // Draws are i.i.d. here (nothing else updates), so plain MC bounds apply.
  const int n = static_cast<int>(chain.size());
  const Eigen::RowVectorXd mc_mean = chain.psi.colwise().mean();
  const Eigen::MatrixXd centered = chain.psi.rowwise() - mc_mean;
  const Eigen::MatrixXd mc_cov =
      centered.transpose() * centered / static_cast<double>(n - 1);
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(mc_mean[j] - mean[j]) < 5 * std::sqrt(cov(j, j) / n));
    const double se_var = cov(j, j) * std::sqrt(2.0 / (n - 1));
    CHECK(std::abs(mc_cov(j, j) - cov(j, j)) < 5 * se_var);
  }
  CHECK(std::abs(mc_cov(0, 1) - cov(0, 1)) <
        5 * std::sqrt((cov(0, 0) * cov(1, 1) + cov(0, 1) * cov(0, 1)) / n));
}

TEST_CASE("factor caching does not change the chain") {
  FitInputs fit = toy_fit(200, 2, 10, 5150);
  McmcConfig cfg;
  cfg.n_iter = 500;
  cfg.seed = 31;
  cfg.use_cache = true;
  const PosteriorChain with_cache = run_mcmc(fit, cfg);
  cfg.use_cache = false;
  const PosteriorChain without = run_mcmc(fit, cfg);

  CHECK(bit_equal(with_cache.sigma2, without.sigma2));
  CHECK(bit_equal(with_cache.phi, without.phi));
  CHECK(bit_equal(with_cache.tau2, without.tau2));
  CHECK(bit_equal(with_cache.lambda, without.lambda));
  CHECK(bit_equal(with_cache.psi, without.psi));
  CHECK(with_cache.accepted == without.accepted);
}

TEST_CASE("chain sink receives every row in order") {
  FitInputs fit = toy_fit(50, 2, 10, 99);
  McmcConfig cfg;
  cfg.n_iter = 20;
  cfg.seed = 1;
  CountingSink sink;
  const PosteriorChain chain = run_mcmc(fit, cfg, &sink);
  CHECK(sink.begins == 1);
  CHECK(sink.finishes == 1);
  CHECK(sink.rows == 20);
  CHECK(sink.last_iteration == 19);
  CHECK(sink.names == fit.design.column_names);
  CHECK(chain.size() == 20);
  CHECK(chain.acceptance_rate() ==
        doctest::Approx(std::accumulate(chain.accepted.begin(),
                                        chain.accepted.end(), 0.0) /
                        20.0));

  // A zero-iteration run still opens and closes the sink.
  cfg.n_iter = 0;
  cfg.n_burnin = 0;
  CountingSink empty;
  const PosteriorChain none = run_mcmc(fit, cfg, &empty);
  CHECK(none.size() == 0);
  CHECK(empty.begins == 1);
  CHECK(empty.finishes == 1);
  CHECK(empty.rows == 0);
}

TEST_CASE("configuration validation rejects bad settings") {
  McmcConfig cfg;
  cfg.n_iter = 100;
  cfg.n_burnin = 100;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = McmcConfig{};
  cfg.adapt_start = 1;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = McmcConfig{};
  cfg.init_sigma2 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = McmcConfig{};
  cfg.adapt_mixture_weight = 1.0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = McmcConfig{};
  cfg.init_step = {0.0, 0.1, 0.1};
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = McmcConfig{};
  cfg.init_step = {0.0, 0.1, 0.1};
  cfg.sample_theta = {false, true, true};  // unused step may be zero
  CHECK_NOTHROW(cfg.validate());
  cfg = McmcConfig{};
  cfg.flush_every = 0;
  CHECK_THROWS_AS(cfg.validate(), config_error);
}

}  // TEST_SUITE
