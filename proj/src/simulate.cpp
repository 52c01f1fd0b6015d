/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "trajgp/errors.hpp"
#include "trajgp/rng.hpp"
#include "trajgp/timeparse.hpp"

namespace trajgp {

namespace {

// Disjoint sub-stream indices per individual; keeps every generated component
// independent of the others and of the individual count.
enum Stream : std::uint64_t {
  kSurfaceStream = 0,
  kTimes = 1,
  kTrajectory = 2,
  kProcess = 3,
  kCovariates = 4,
  kNoise = 5,
  kStride = 8,
};

std::mt19937_64 stream_rng(std::uint64_t seed, int individual, Stream what) {
  return make_rng(seed, kStride * (static_cast<std::uint64_t>(individual) + 1) + what);
}

}  // namespace

void SimConfig::validate() const {
  if (individuals < 1) throw config_error("simulate: need at least one individual");
  if (points_per_individual < 1) throw config_error("simulate: need at least one point");
  if (!(waiting_rate > 0.0)) throw config_error("simulate: waiting rate must be positive");
  if (!(hi_x > lo_x) || !(hi_y > lo_y)) throw config_error("simulate: degenerate square");
  if (kernel.sigma2 < 0.0 || noise.tau2 < 0.0 || kernel.phi < 0.0) {
    throw config_error("simulate: negative variance or decay parameter");
  }
  if (!(rw_step_variance >= 0.0)) throw config_error("simulate: negative step variance");
  if (common_intercept) {
    if (intercepts.size() != 1) {
      throw config_error("simulate: common intercept takes exactly one value");
    }
  } else if (intercepts.size() != static_cast<std::size_t>(individuals)) {
    throw config_error("simulate: need one intercept per individual (got " +
                       std::to_string(intercepts.size()) + " for " +
                       std::to_string(individuals) + ")");
  }
  if (surface) {
    if (surface->coef_variance < 0.0) throw config_error("simulate: negative surface variance");
    BSplineBasis check_x(lo_x, hi_x, surface->degree, surface->n_basis_x);
    BSplineBasis check_y(lo_y, hi_y, surface->degree, surface->n_basis_y);
  }
}

Eigen::VectorXd gen_times(long t_count, double rate, std::mt19937_64& rng) {
  if (t_count < 1) throw config_error("gen_times: need at least one time");
  if (!(rate > 0.0)) throw config_error("gen_times: rate must be positive");
  std::exponential_distribution<double> gap(rate);
  Eigen::VectorXd t(t_count);
  double acc = 0.0;
  t[0] = 0.0;
  for (long i = 1; i < t_count; ++i) {
    acc += gap(rng);
    t[i] = acc;
  }
  return t;
}

Eigen::VectorXd gen_times(long t_count, double rate, std::uint64_t seed) {
  auto rng = make_rng(seed, kTimes);
  return gen_times(t_count, rate, rng);
}

Eigen::MatrixXd gen_trajectory(const Eigen::VectorXd& times, double lo_x, double hi_x,
                               double lo_y, double hi_y, double step_var,
                               std::mt19937_64& rng) {
  const Eigen::Index t = times.size();
  Eigen::MatrixXd pos(t, 2);
  std::uniform_real_distribution<double> ux(lo_x, hi_x);
  std::uniform_real_distribution<double> uy(lo_y, hi_y);
  std::normal_distribution<double> z;
  double x = ux(rng);
  double y = uy(rng);
  pos(0, 0) = x;
  pos(0, 1) = y;
  for (Eigen::Index i = 1; i < t; ++i) {
    const double sd = std::sqrt(step_var * (times[i] - times[i - 1]));
    x = std::clamp(x + sd * z(rng), lo_x, hi_x);
    y = std::clamp(y + sd * z(rng), lo_y, hi_y);
    pos(i, 0) = x;
    pos(i, 1) = y;
  }
  return pos;
}

Eigen::VectorXd gen_ou_process(const Eigen::VectorXd& times, const KernelParams& kp,
                               std::mt19937_64& rng) {
  const Eigen::Index t = times.size();
  Eigen::VectorXd w(t);
  if (t == 0) return w;
  std::normal_distribution<double> z;
  const double sigma = std::sqrt(kp.sigma2);
  w[0] = sigma * z(rng);
  for (Eigen::Index i = 1; i < t; ++i) {
    const double rho = std::exp(-kp.phi * (times[i] - times[i - 1]));
    w[i] = rho * w[i - 1] + sigma * std::sqrt(1.0 - rho * rho) * z(rng);
  }
  return w;
}

Eigen::VectorXd gen_surface_coef(int count, double variance, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  const double sd = std::sqrt(variance);
  Eigen::VectorXd b(count);
  for (int i = 0; i < count; ++i) b[i] = sd * z(rng);
  return b;
}

TrajectoryDataset gen_dataset(const SimConfig& config, SimTruth* truth) {
  config.validate();
  const ParsedStamp start = parse_iso8601(config.start_timestamp);

  Eigen::VectorXd surface_coef;
  std::optional<TensorBasis> surface_basis;
  if (config.surface) {
    surface_basis.emplace(
        BSplineBasis(config.lo_x, config.hi_x, config.surface->degree,
                     config.surface->n_basis_x),
        BSplineBasis(config.lo_y, config.hi_y, config.surface->degree,
                     config.surface->n_basis_y));
    auto rng = make_rng(config.seed, kSurfaceStream);
    surface_coef = gen_surface_coef(surface_basis->size(),
                                    config.surface->coef_variance, rng);
  }
  if (truth) truth->surface_coef = surface_coef;

  const int q = static_cast<int>(config.slopes.size());
  TrajectoryDataset data;
  data.origin_ms = start.epoch_ms;
  data.utc_offset_min = start.offset_min;
  for (int j = 0; j < q; ++j) data.numeric_names.push_back("x" + std::to_string(j + 1));

  Eigen::VectorXd basis_vals;
  if (surface_basis) basis_vals.resize(surface_basis->size());

  for (int k = 0; k < config.individuals; ++k) {
    const long t_count = config.points_per_individual;
    IndividualSeries ind;
    ind.id = "ind" + std::to_string(k + 1);

    auto times_rng = stream_rng(config.seed, k, kTimes);
    Eigen::VectorXd raw = gen_times(t_count, config.waiting_rate, times_rng);
    // Commit to the serialization grid: round to 1 ms, keep strictly increasing.
    ind.time.resize(t_count);
    ind.stamp_ms.resize(t_count);
    std::int64_t prev_ms = -1;
    for (long i = 0; i < t_count; ++i) {
      std::int64_t ms = std::llround(raw[i] * 1000.0);
      if (ms <= prev_ms) ms = prev_ms + 1;
      prev_ms = ms;
      ind.time[i] = static_cast<double>(ms) / 1000.0;
      ind.stamp_ms[i] = start.epoch_ms + ms;
    }
    ind.hour.resize(t_count);
    for (long i = 0; i < t_count; ++i) {
      ind.hour[i] = local_hour(ind.stamp_ms[i], start.offset_min);
    }

    if (surface_basis) {
      auto rng = stream_rng(config.seed, k, kTrajectory);
      ind.position = gen_trajectory(ind.time, config.lo_x, config.hi_x, config.lo_y,
                                    config.hi_y, config.rw_step_variance, rng);
    } else {
      ind.position = Eigen::MatrixXd::Constant(
          t_count, 2, std::numeric_limits<double>::quiet_NaN());
    }

    auto process_rng = stream_rng(config.seed, k, kProcess);
    Eigen::VectorXd w = gen_ou_process(ind.time, config.kernel, process_rng);

    ind.numeric_cov.resize(t_count, q);
    {
      auto rng = stream_rng(config.seed, k, kCovariates);
      std::normal_distribution<double> z;
      for (long i = 0; i < t_count; ++i) {
        for (int j = 0; j < q; ++j) ind.numeric_cov(i, j) = z(rng);
      }
    }
    ind.categorical.resize(t_count, 0);

    const double intercept =
        config.common_intercept ? config.intercepts[0] : config.intercepts[k];
    auto noise_rng = stream_rng(config.seed, k, kNoise);
    std::normal_distribution<double> z;
    const double tau = std::sqrt(config.noise.tau2);
    ind.outcome.resize(t_count);
    for (long i = 0; i < t_count; ++i) {
      double mean = intercept;
      for (int j = 0; j < q; ++j) mean += config.slopes[j] * ind.numeric_cov(i, j);
      if (surface_basis) {
        surface_basis->eval(ind.position(i, 0), ind.position(i, 1), basis_vals.data());
        mean += basis_vals.dot(surface_coef);
      }
      ind.outcome[i] = mean + w[i] + tau * z(noise_rng);
    }
    data.individuals.push_back(std::move(ind));
  }
  return data;
}

}  // namespace trajgp
