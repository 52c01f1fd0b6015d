/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dense_small.hpp"
#include "trajgp/errors.hpp"
#include "trajgp/rng.hpp"

namespace trajgp {

namespace {

// Contiguous window [start, start+size) of the m observed times nearest to
// t0 by absolute distance (two-pointer expansion from the insertion point).
void nearest_window(const Eigen::VectorXd& times, double t0, int m, int& start,
                    int& size) {
  const int n = static_cast<int>(times.size());
  size = std::min(m, n);
  const double* t = times.data();
  int right = static_cast<int>(std::lower_bound(t, t + n, t0) - t);
  int left = right - 1;
  int lo = right;  // window is [lo, hi)
  int hi = right;
  for (int picked = 0; picked < size; ++picked) {
    const double dl = left >= 0 ? t0 - t[left] : std::numeric_limits<double>::infinity();
    const double dr = hi < n ? t[hi] - t0 : std::numeric_limits<double>::infinity();
    if (dl <= dr) {
      lo = left--;
    } else {
      ++hi;
    }
  }
  start = lo;
}

}  // namespace

Eigen::VectorXd recover_w(const BandCholesky& omega, const Eigen::VectorXd& r,
                          double tau2, std::mt19937_64* rng) {
  Eigen::VectorXd w = r;
  omega.solve_in_place(w);
  w /= tau2;
  if (rng) {
    std::normal_distribution<double> z;
    Eigen::VectorXd noise(r.size());
    for (Eigen::Index i = 0; i < noise.size(); ++i) noise[i] = z(*rng);
    omega.backward_solve_in_place(noise.data());  // cov(L^{-T} z) = Omega^{-1}
    w += noise;
  }
  return w;
}

std::pair<double, double> interpolate_w(const Eigen::VectorXd& times,
                                        const Eigen::VectorXd& w, double t0,
                                        const KernelParams& kp, int m) {
  if (times.size() == 0) throw data_error("interpolate_w: no observed points");
  if (m < 1) throw config_error("interpolate_w: neighbor count must be >= 1");
  int start = 0, size = 0;
  nearest_window(times, t0, m, start, size);

  constexpr int kMax = 64;
  double corr[kMax * kMax], cross[kMax], sol[kMax];
  if (size > kMax) throw config_error("interpolate_w: neighbor count too large");
  for (int i = 0; i < size; ++i) {
    cross[i] = std::exp(-kp.phi * std::abs(t0 - times[start + i]));
    corr[i * kMax + i] = 1.0;
    for (int j = 0; j < i; ++j) {
      corr[i * kMax + j] = std::exp(-kp.phi * (times[start + i] - times[start + j]));
    }
  }
  detail::dense_chol_lower(corr, size, kMax, start);
  std::copy(cross, cross + size, sol);
  detail::dense_chol_solve(corr, size, kMax, sol);

  double mean = 0.0, explained = 0.0;
  for (int i = 0; i < size; ++i) {
    mean += sol[i] * w[start + i];
    explained += sol[i] * cross[i];
  }
  double var = kp.sigma2 * (1.0 - explained);
  if (var < 0.0) var = 0.0;  // roundoff at exactly-observed points
  return {mean, var};
}

double quantile(std::vector<double>& values, double p) {
  if (values.empty()) throw data_error("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const std::size_t k = static_cast<std::size_t>(pos);
  if (k + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(k);
  return values[k] + frac * (values[k + 1] - values[k]);
}

PredictionResult predict(const PosteriorChain& chain, long burnin, int thin,
                         const FitInputs& fit, const std::vector<EvalBlock>& eval,
                         double level, std::uint64_t seed) {
  if (thin < 1) throw config_error("predict: thin must be >= 1");
  if (!(level > 0.0) || !(level < 1.0)) throw config_error("predict: level in (0,1)");
  const long n_iter = chain.size();
  if (burnin < 0 || burnin >= n_iter) {
    throw config_error("predict: burn-in leaves no retained draws");
  }
  long n_points = 0;
  for (const auto& e : eval) {
    if (e.train_index < 0 || e.train_index >= static_cast<int>(fit.blocks.size())) {
      throw config_error("predict: evaluation block references unknown individual");
    }
    n_points += e.times.size();
  }

  std::vector<long> draws;
  for (long j = burnin; j < n_iter; j += thin) draws.push_back(j);
  const long n_draws = static_cast<long>(draws.size());

  // Per-point sample matrix, filled draw-by-draw.
  Eigen::MatrixXd samples(n_points, n_draws);

  FactorWorkspace ws;
  VecchiaFactor factor;
  for (long dj = 0; dj < n_draws; ++dj) {
    const long it = draws[dj];
    const KernelParams kp{chain.sigma2[it], chain.phi[it]};
    const NoiseParams np{chain.tau2[it]};
    const Eigen::VectorXd psi = chain.psi.cols() > 0
                                    ? Eigen::VectorXd(chain.psi.row(it))
                                    : Eigen::VectorXd();
    auto rng = make_rng(seed, static_cast<std::uint64_t>(it) + 1);
    const double tau = std::sqrt(np.tau2);
    std::normal_distribution<double> z;

    long row0 = 0;
    for (const auto& e : eval) {
      const IndividualBlock& blk = fit.blocks[e.train_index];
      build_factors_into(factor, blk.times, kp, fit.m, ws);
      BandCholesky omega = build_omega(factor, np.tau2);
      Eigen::VectorXd r = blk.y;
      if (blk.X.cols() > 0) r.noalias() -= blk.X * psi;
      const Eigen::VectorXd w = recover_w(omega, r, np.tau2, &rng);

      for (Eigen::Index i = 0; i < e.times.size(); ++i) {
        const auto [mu, var] = interpolate_w(blk.times, w, e.times[i], kp, fit.m);
        double value = mu + std::sqrt(var) * z(rng) + tau * z(rng);
        if (e.X.cols() > 0) value += e.X.row(i).dot(psi);
        samples(row0 + i, dj) = value;
      }
      row0 += e.times.size();
    }
  }

  PredictionResult out;
  out.mean.resize(n_points);
  out.lo.resize(n_points);
  out.hi.resize(n_points);
  const double alpha = 1.0 - level;
  std::vector<double> buf(n_draws);
  for (long i = 0; i < n_points; ++i) {
    out.mean[i] = samples.row(i).mean();
    for (long j = 0; j < n_draws; ++j) buf[j] = samples(i, j);
    std::sort(buf.begin(), buf.end());
    out.lo[i] = quantile(buf, alpha / 2.0);
    out.hi[i] = quantile(buf, 1.0 - alpha / 2.0);
  }
  return out;
}

Metrics compute_metrics(const PredictionResult& pred, const Eigen::VectorXd& truth,
                        double train_mean) {
  const Eigen::Index n = truth.size();
  if (n == 0) throw data_error("metrics: empty evaluation set");
  if (pred.mean.size() != n || pred.lo.size() != n || pred.hi.size() != n) {
    throw data_error("metrics: prediction/truth length mismatch");
  }
  double sse = 0.0, sse_trivial = 0.0, width = 0.0;
  long covered = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = pred.mean[i] - truth[i];
    sse += e * e;
    const double et = train_mean - truth[i];
    sse_trivial += et * et;
    width += pred.hi[i] - pred.lo[i];
    if (truth[i] >= pred.lo[i] && truth[i] <= pred.hi[i]) ++covered;
  }
  Metrics m;
  m.rmspe = std::sqrt(sse / static_cast<double>(n));
  const double rmspe_trivial = std::sqrt(sse_trivial / static_cast<double>(n));
  m.rel_rmspe = rmspe_trivial > 0.0 ? m.rmspe / rmspe_trivial
                                    : std::numeric_limits<double>::infinity();
  m.coverage = static_cast<double>(covered) / static_cast<double>(n);
  m.piw = width / static_cast<double>(n);
  return m;
}

double dic(const PosteriorChain& chain, long burnin, int thin, const FitInputs& fit) {
  if (thin < 1) throw config_error("dic: thin must be >= 1");
  const long n_iter = chain.size();
  if (burnin < 0 || burnin >= n_iter) throw config_error("dic: no retained draws");

  const int p = fit.design.p_star();
  double mean_dev = 0.0;
  long count = 0;
  Eigen::VectorXd psi_bar = Eigen::VectorXd::Zero(p);
  double s2_bar = 0.0, phi_bar = 0.0, t2_bar = 0.0;
  for (long it = burnin; it < n_iter; it += thin) {
    const KernelParams kp{chain.sigma2[it], chain.phi[it]};
    const NoiseParams np{chain.tau2[it]};
    Eigen::VectorXd psi =
        p > 0 ? Eigen::VectorXd(chain.psi.row(it)) : Eigen::VectorXd();
    const double ll = collapsed_loglik(fit.blocks, psi, kp, np, fit.m);
    mean_dev += -2.0 * ll;
    if (p > 0) psi_bar += psi;
    s2_bar += chain.sigma2[it];
    phi_bar += chain.phi[it];
    t2_bar += chain.tau2[it];
    ++count;
  }
  mean_dev /= static_cast<double>(count);
  psi_bar /= static_cast<double>(count);
  s2_bar /= static_cast<double>(count);
  phi_bar /= static_cast<double>(count);
  t2_bar /= static_cast<double>(count);
  const double dev_at_mean =
      -2.0 * collapsed_loglik(fit.blocks, psi_bar, KernelParams{s2_bar, phi_bar},
                              NoiseParams{t2_bar}, fit.m);
  return 2.0 * mean_dev - dev_at_mean;
}

}  // namespace trajgp
