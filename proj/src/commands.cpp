/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajgp/errors.hpp"
#include "trajgp/io.hpp"
#include "trajgp/predict.hpp"
#include "trajgp/sampler.hpp"
#include "trajgp/simulate.hpp"

namespace trajgp {

namespace {

using nlohmann::json;

std::string path_join(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open output file for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw data_error("failed writing output file: " + path);
}

// Rows without a position cannot enter a spatial-surface design; they are
// removed up front (individuals left empty disappear entirely).
void drop_unpositioned(TrajectoryDataset& data, std::ostream& log) {
  long dropped_rows = 0;
  std::vector<IndividualSeries> kept;
  for (auto& s : data.individuals) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      if (s.has_position(i)) idx.push_back(i);
    }
    dropped_rows += s.rows() - static_cast<Eigen::Index>(idx.size());
    if (idx.empty()) {
      log << "note: individual '" << s.id
          << "' has no positioned rows; excluded from the spatial fit\n";
      continue;
    }
    kept.push_back(static_cast<Eigen::Index>(idx.size()) == s.rows()
                       ? std::move(s)
                       : subset_rows(s, idx));
  }
  data.individuals = std::move(kept);
  if (dropped_rows > 0) {
    log << "note: dropped " << dropped_rows
        << " rows without a position (spatial model requires one)\n";
  }
  if (data.individuals.empty()) {
    throw data_error("no positioned rows remain; cannot fit a spatial model");
  }
}

TrajectoryDataset load_and_prepare(const RunConfig& config, std::ostream& log) {
  if (config.data.dataset.empty()) {
    throw config_error("data.dataset path is required for this command");
  }
  TrajectoryDataset data = ingest(config.data.dataset, config.model);
  log << "ingested " << data.rows() << " rows across " << data.k()
      << " individuals from " << config.data.dataset << '\n';
  if (!config.data.gps.empty()) {
    join_gps(data, read_gps_csv(config.data.gps));
    long positioned = 0;
    for (const auto& s : data.individuals) {
      for (Eigen::Index i = 0; i < s.rows(); ++i) {
        if (s.has_position(i)) ++positioned;
      }
    }
    log << "joined GPS fixes from " << config.data.gps << "; " << positioned
        << " rows positioned\n";
  }
  if (config.model.spatial_spline) drop_unpositioned(data, log);
  return data;
}

std::pair<TrajectoryDataset, TrajectoryDataset> split_logged(
    const RunConfig& config, const TrajectoryDataset& data, std::ostream& log) {
  std::vector<std::string> warnings;
  auto parts = split(data, config.data.split_fraction, config.data.split_seed,
                     &warnings);
  for (const auto& w : warnings) log << "warning: " << w << '\n';
  log << "split: " << parts.first.rows() << " train rows, "
      << parts.second.rows() << " test rows (fraction "
      << config.data.split_fraction << ", seed " << config.data.split_seed
      << ")\n";
  return parts;
}

std::string default_chain_path(const RunConfig& config, const std::string& given) {
  return given.empty() ? path_join(config.output_dir, "chain.csv") : given;
}

json sim_truth_json(const SimConfig& sim, const SimTruth& truth) {
  json j;
  j["individuals"] = sim.individuals;
  j["points_per_individual"] = sim.points_per_individual;
  j["waiting_rate"] = sim.waiting_rate;
  j["domain"] = {sim.lo_x, sim.hi_x, sim.lo_y, sim.hi_y};
  j["sigma2"] = sim.kernel.sigma2;
  j["phi"] = sim.kernel.phi;
  j["tau2"] = sim.noise.tau2;
  j["intercepts"] = sim.intercepts;
  j["common_intercept"] = sim.common_intercept;
  j["slopes"] = sim.slopes;
  if (sim.surface) {
    j["surface"] = {{"n_basis_x", sim.surface->n_basis_x},
                    {"n_basis_y", sim.surface->n_basis_y},
                    {"degree", sim.surface->degree},
                    {"coef_variance", sim.surface->coef_variance}};
    j["surface_coef"] = std::vector<double>(
        truth.surface_coef.data(),
        truth.surface_coef.data() + truth.surface_coef.size());
  } else {
    j["surface"] = nullptr;
    j["surface_coef"] = json::array();
  }
  j["rw_step_variance"] = sim.rw_step_variance;
  j["seed"] = sim.seed;
  j["start_timestamp"] = sim.start_timestamp;
  return j;
}

}  // namespace

void cmd_simulate(const RunConfig& config, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  SimTruth truth;
  const TrajectoryDataset data = gen_dataset(config.sim, &truth);

  const std::string data_path = path_join(config.output_dir, "dataset.csv");
  write_dataset_csv(data_path, data);
  write_json(path_join(config.output_dir, "truth.json"),
             sim_truth_json(config.sim, truth));

  log << "simulated " << data.rows() << " rows for " << data.k()
      << " individuals -> " << data_path << " (" << fmt(elapsed_seconds(t0))
      << " s)\n";
}

void cmd_fit(const RunConfig& config, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrajectoryDataset data = load_and_prepare(config, log);
  const auto [train, test] = split_logged(config, data, log);

  const FitInputs fit = prepare_fit(train, config.model);
  log << "design: " << fit.design.p_star() << " columns ("
      << fit.design.p_unpenalized << " unpenalized + " << fit.design.n_spatial
      << " spatial), conditioning on up to " << fit.m << " neighbors\n";

  const std::string chain_path = path_join(config.output_dir, "chain.csv");
  ChainFileWriter sink(chain_path, config.mcmc.flush_every);
  const PosteriorChain chain = run_mcmc(fit, config.mcmc, &sink);

  const double accept = chain.acceptance_rate(config.mcmc.n_burnin);
  const double secs = elapsed_seconds(t0);
  log << "sampler finished: " << chain.size() << " iterations, acceptance rate "
      << fmt(accept) << " after burn-in -> " << chain_path << " ("
      << fmt(secs) << " s)\n";

  json j;
  j["iterations"] = chain.size();
  j["burnin"] = config.mcmc.n_burnin;
  j["acceptance_rate"] = accept;
  j["elapsed_seconds"] = secs;
  j["individuals"] = static_cast<long>(train.k());
  j["train_rows"] = static_cast<long>(train.rows());
  j["test_rows"] = static_cast<long>(test.rows());
  j["parameters"] = fit.design.p_star();
  j["chain"] = chain_path;
  write_json(path_join(config.output_dir, "fit.json"), j);
}

void cmd_predict(const RunConfig& config, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrajectoryDataset data = load_and_prepare(config, log);
  const auto [train, test] = split_logged(config, data, log);
  if (test.rows() == 0) {
    throw data_error("the held-out side of the split is empty; nothing to predict");
  }

  const std::string chain_path = default_chain_path(config, config.predict.chain);
  const ChainData chain_data = read_chain_csv(chain_path);
  const PosteriorChain& chain = chain_data.chain;
  log << "chain: " << chain.size() << " rows, "
      << chain_data.psi_names.size() << " coefficients from " << chain_path
      << '\n';

  const FitInputs fit = prepare_fit(train, config.model);
  if (static_cast<std::size_t>(fit.design.p_star()) != chain_data.psi_names.size()) {
    throw config_error(
        "chain has " + std::to_string(chain_data.psi_names.size()) +
        " coefficient columns but the configured model implies " +
        std::to_string(fit.design.p_star()));
  }

  const Design test_design = assemble_design(test, config.model);
  std::vector<EvalBlock> eval;
  std::vector<const IndividualSeries*> eval_series;
  for (std::size_t k = 0; k < test.individuals.size(); ++k) {
    const IndividualSeries& s = test.individuals[k];
    if (s.rows() == 0) continue;
    eval.push_back(EvalBlock{static_cast<int>(k), s.time, test_design.blocks[k]});
    eval_series.push_back(&s);
  }

  const PredictionResult pred =
      predict(chain, config.predict.burnin, config.predict.thin, fit, eval,
              config.predict.level, config.seed);

  Eigen::VectorXd truth(pred.mean.size());
  Eigen::Index at = 0;
  for (const IndividualSeries* s : eval_series) {
    truth.segment(at, s->rows()) = s->outcome;
    at += s->rows();
  }
  double train_sum = 0.0;
  for (const auto& s : train.individuals) train_sum += s.outcome.sum();
  const double train_mean = train_sum / static_cast<double>(train.rows());

  Metrics metrics = compute_metrics(pred, truth, train_mean);
  const double dic_value =
      dic(chain, config.predict.burnin, config.predict.thin, fit);

  const std::string pred_path = path_join(config.output_dir, "predictions.csv");
  std::ofstream out(pred_path);
  if (!out) throw data_error("cannot open output file for writing: " + pred_path);
  out << "id,t,x,y,mean,lo,hi\n";
  at = 0;
  for (const IndividualSeries* s : eval_series) {
    for (Eigen::Index i = 0; i < s->rows(); ++i, ++at) {
      out << s->id << ',' << fmt(s->time[i]) << ',';
      if (s->has_position(i)) {
        out << fmt(s->position(i, 0)) << ',' << fmt(s->position(i, 1));
      } else {
        out << ',';
      }
      out << ',' << fmt(pred.mean[at]) << ',' << fmt(pred.lo[at]) << ','
          << fmt(pred.hi[at]) << '\n';
    }
  }
  if (!out) throw data_error("failed writing output file: " + pred_path);

  json j;
  j["coverage"] = metrics.coverage;
  j["rmspe"] = metrics.rmspe;
  j["rel_rmspe"] = metrics.rel_rmspe;
  j["piw"] = metrics.piw;
  j["dic"] = dic_value;
  write_json(path_join(config.output_dir, "metrics.json"), j);

  log << "predicted " << pred.mean.size() << " held-out rows: coverage "
      << fmt(metrics.coverage) << ", rmspe " << fmt(metrics.rmspe) << " ("
      << fmt(elapsed_seconds(t0)) << " s)\n";
}

void cmd_report(const RunConfig& config, std::ostream& log) {
  const std::string chain_path = default_chain_path(config, config.report.chain);
  const ChainData chain_data = read_chain_csv(chain_path);
  const PosteriorChain& chain = chain_data.chain;
  if (config.report.burnin >= chain.size()) {
    throw config_error("report.burnin leaves no retained draws");
  }
  std::vector<long> kept;
  for (long it = config.report.burnin; it < chain.size(); it += config.report.thin) {
    kept.push_back(it);
  }
  log << "chain: " << chain.size() << " rows, keeping " << kept.size()
      << " draws from " << chain_path << '\n';

  const auto summarize = [&](auto value_at) {
    std::vector<double> v(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) v[i] = value_at(kept[i]);
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    std::sort(v.begin(), v.end());
    return std::array<double, 3>{mean, quantile(v, 0.025), quantile(v, 0.975)};
  };

  const std::string coef_path = path_join(config.output_dir, "coefficients.csv");
  std::ofstream out(coef_path);
  if (!out) throw data_error("cannot open output file for writing: " + coef_path);
  out << "parameter,mean,q025,q975\n";
  const auto emit = [&](const std::string& name, const std::array<double, 3>& s) {
    out << name << ',' << fmt(s[0]) << ',' << fmt(s[1]) << ',' << fmt(s[2])
        << '\n';
  };
  emit("sigma2", summarize([&](long i) { return chain.sigma2[i]; }));
  emit("phi", summarize([&](long i) { return chain.phi[i]; }));
  emit("tau2", summarize([&](long i) { return chain.tau2[i]; }));
  emit("lambda", summarize([&](long i) { return chain.lambda[i]; }));
  for (std::size_t jcol = 0; jcol < chain_data.psi_names.size(); ++jcol) {
    emit(chain_data.psi_names[jcol], summarize([&](long i) {
           return chain.psi(i, static_cast<Eigen::Index>(jcol));
         }));
  }
  if (!out) throw data_error("failed writing output file: " + coef_path);
  log << "wrote " << coef_path << '\n';

  long n_spatial = 0;
  for (const auto& name : chain_data.psi_names) {
    if (name.rfind("space[", 0) == 0) ++n_spatial;
  }
  if (n_spatial == 0) return;

  if (!config.model.spatial_spline) {
    throw config_error(
        "chain has spatial coefficients; report needs model.spatial_spline to "
        "reconstruct the surface geometry");
  }
  const SpatialSplineSpec& ss = *config.model.spatial_spline;
  if (n_spatial != static_cast<long>(ss.n_basis_x) * ss.n_basis_y) {
    throw config_error("chain has " + std::to_string(n_spatial) +
                       " spatial coefficients but model.spatial_spline implies " +
                       std::to_string(ss.n_basis_x * ss.n_basis_y));
  }
  const std::size_t first_spatial = chain_data.psi_names.size() -
                                    static_cast<std::size_t>(n_spatial);
  TensorBasis basis(BSplineBasis(ss.lo_x, ss.hi_x, ss.degree, ss.n_basis_x),
                    BSplineBasis(ss.lo_y, ss.hi_y, ss.degree, ss.n_basis_y));

  const int g = config.report.surface_grid;
  const long n_points = static_cast<long>(g) * g;
  Eigen::MatrixXd B(n_points, n_spatial);
  std::vector<double> gx(static_cast<std::size_t>(g)), gy(gx);
  for (int i = 0; i < g; ++i) {
    const double u = static_cast<double>(i) / (g - 1);
    gx[static_cast<std::size_t>(i)] = ss.lo_x + u * (ss.hi_x - ss.lo_x);
    gy[static_cast<std::size_t>(i)] = ss.lo_y + u * (ss.hi_y - ss.lo_y);
  }
  long row = 0;
  Eigen::VectorXd brow(n_spatial);
  for (int ix = 0; ix < g; ++ix) {
    for (int iy = 0; iy < g; ++iy, ++row) {
      basis.eval(gx[static_cast<std::size_t>(ix)],
                 gy[static_cast<std::size_t>(iy)], brow.data());
      B.row(row) = brow;
    }
  }

  Eigen::MatrixXd coef(n_spatial, static_cast<long>(kept.size()));
  for (std::size_t d = 0; d < kept.size(); ++d) {
    coef.col(static_cast<long>(d)) =
        chain.psi.row(kept[d])
            .segment(static_cast<Eigen::Index>(first_spatial), n_spatial)
            .transpose();
  }
  const Eigen::MatrixXd values = B * coef;  // grid points x draws

  const std::string surf_path = path_join(config.output_dir, "surface.csv");
  std::ofstream sout(surf_path);
  if (!sout) throw data_error("cannot open output file for writing: " + surf_path);
  sout << "x,y,mean,q025,q975,width\n";
  std::vector<double> buf(kept.size());
  row = 0;
  for (int ix = 0; ix < g; ++ix) {
    for (int iy = 0; iy < g; ++iy, ++row) {
      for (std::size_t d = 0; d < kept.size(); ++d) {
        buf[d] = values(row, static_cast<long>(d));
      }
      std::sort(buf.begin(), buf.end());
      const double lo = quantile(buf, 0.025);
      const double hi = quantile(buf, 0.975);
      sout << fmt(gx[static_cast<std::size_t>(ix)]) << ','
           << fmt(gy[static_cast<std::size_t>(iy)]) << ','
           << fmt(values.row(row).mean()) << ',' << fmt(lo) << ',' << fmt(hi)
           << ',' << fmt(hi - lo) << '\n';
    }
  }
  if (!sout) throw data_error("failed writing output file: " + surf_path);
  log << "wrote " << surf_path << " (" << g << "x" << g << " grid)\n";
}

}  // namespace trajgp
