/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "trajgp/errors.hpp"

namespace trajgp {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) {
    throw config_error(where + " must be a JSON object");
  }
}

void reject_unknown_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw config_error("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_number(const json& j, const std::string& where, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_number()) {
    throw config_error(where + "." + key + " must be a number");
  }
  return j[key].get<T>();
}

bool get_bool(const json& j, const std::string& where, const char* key,
              bool fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_boolean()) {
    throw config_error(where + "." + key + " must be a boolean");
  }
  return j[key].get<bool>();
}

std::string get_string(const json& j, const std::string& where, const char* key,
                       const std::string& fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_string()) {
    throw config_error(where + "." + key + " must be a string");
  }
  return j[key].get<std::string>();
}

void check_positive(double v, const std::string& where, const char* key) {
  if (!(v > 0.0)) {
    throw config_error(where + "." + key + " must be positive");
  }
}

Priors parse_priors(const json& j, const std::string& where) {
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"beta_mean", "beta_variance", "sigma2_shape", "sigma2_rate",
                       "tau2_shape", "tau2_rate", "phi_shape", "phi_rate",
                       "lambda_shape", "lambda_rate"});
  Priors p;
  p.beta_mean = get_number(j, where, "beta_mean", p.beta_mean);
  p.beta_variance = get_number(j, where, "beta_variance", p.beta_variance);
  p.sigma2_shape = get_number(j, where, "sigma2_shape", p.sigma2_shape);
  p.sigma2_rate = get_number(j, where, "sigma2_rate", p.sigma2_rate);
  p.tau2_shape = get_number(j, where, "tau2_shape", p.tau2_shape);
  p.tau2_rate = get_number(j, where, "tau2_rate", p.tau2_rate);
  p.phi_shape = get_number(j, where, "phi_shape", p.phi_shape);
  p.phi_rate = get_number(j, where, "phi_rate", p.phi_rate);
  p.lambda_shape = get_number(j, where, "lambda_shape", p.lambda_shape);
  p.lambda_rate = get_number(j, where, "lambda_rate", p.lambda_rate);
  p.validate();
  return p;
}

ModelSpec parse_model(const json& j) {
  const std::string where = "model";
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"per_individual_intercept", "numeric_covariates",
                       "categorical_covariates", "hour_spline", "spatial_spline",
                       "neighbors", "priors"});
  ModelSpec spec;
  spec.per_individual_intercept =
      get_bool(j, where, "per_individual_intercept", spec.per_individual_intercept);

  if (j.contains("numeric_covariates") && !j["numeric_covariates"].is_null()) {
    if (!j["numeric_covariates"].is_array()) {
      throw config_error("model.numeric_covariates must be an array of strings");
    }
    for (const auto& v : j["numeric_covariates"]) {
      if (!v.is_string()) {
        throw config_error("model.numeric_covariates must be an array of strings");
      }
      spec.numeric_covariates.push_back(v.get<std::string>());
    }
  }

  if (j.contains("categorical_covariates") && !j["categorical_covariates"].is_null()) {
    if (!j["categorical_covariates"].is_array()) {
      throw config_error("model.categorical_covariates must be an array");
    }
    for (const auto& c : j["categorical_covariates"]) {
      const std::string cw = "model.categorical_covariates[]";
      require_object(c, cw);
      reject_unknown_keys(c, cw, {"name", "levels"});
      CategoricalSpec cs;
      cs.name = get_string(c, cw, "name", "");
      if (cs.name.empty()) throw config_error(cw + ".name is required");
      if (!c.contains("levels") || !c["levels"].is_array() || c["levels"].size() < 2) {
        throw config_error(cw + ".levels must list at least two levels");
      }
      for (const auto& v : c["levels"]) {
        if (!v.is_string()) throw config_error(cw + ".levels must be strings");
        cs.levels.push_back(v.get<std::string>());
      }
      spec.categoricals.push_back(std::move(cs));
    }
  }

  if (j.contains("hour_spline") && !j["hour_spline"].is_null()) {
    const json& h = j["hour_spline"];
    const std::string hw = "model.hour_spline";
    require_object(h, hw);
    reject_unknown_keys(h, hw, {"n_basis", "degree", "lo", "hi"});
    HourSplineSpec hs;
    hs.n_basis = get_number(h, hw, "n_basis", hs.n_basis);
    hs.degree = get_number(h, hw, "degree", hs.degree);
    hs.lo = get_number(h, hw, "lo", hs.lo);
    hs.hi = get_number(h, hw, "hi", hs.hi);
    if (hs.n_basis < hs.degree + 1 || hs.degree < 0 || !(hs.hi > hs.lo)) {
      throw config_error(hw + ": need n_basis >= degree+1, degree >= 0, hi > lo");
    }
    spec.hour_spline = hs;
  }

  if (j.contains("spatial_spline") && !j["spatial_spline"].is_null()) {
    const json& s = j["spatial_spline"];
    const std::string sw = "model.spatial_spline";
    require_object(s, sw);
    reject_unknown_keys(s, sw,
                        {"n_basis_x", "n_basis_y", "degree", "lo_x", "hi_x",
                         "lo_y", "hi_y", "penalty"});
    SpatialSplineSpec ss;
    ss.n_basis_x = get_number(s, sw, "n_basis_x", ss.n_basis_x);
    ss.n_basis_y = get_number(s, sw, "n_basis_y", ss.n_basis_y);
    ss.degree = get_number(s, sw, "degree", ss.degree);
    ss.lo_x = get_number(s, sw, "lo_x", ss.lo_x);
    ss.hi_x = get_number(s, sw, "hi_x", ss.hi_x);
    ss.lo_y = get_number(s, sw, "lo_y", ss.lo_y);
    ss.hi_y = get_number(s, sw, "hi_y", ss.hi_y);
    const std::string pen = get_string(s, sw, "penalty", "random_walk");
    if (pen == "random_walk") {
      ss.penalty = PenaltyKind::kRandomWalk;
    } else if (pen == "ridge") {
      ss.penalty = PenaltyKind::kRidge;
    } else {
      throw config_error(sw + ".penalty must be 'random_walk' or 'ridge'");
    }
    if (ss.n_basis_x < ss.degree + 1 || ss.n_basis_y < ss.degree + 1 ||
        ss.degree < 0 || !(ss.hi_x > ss.lo_x) || !(ss.hi_y > ss.lo_y)) {
      throw config_error(sw + ": need n_basis >= degree+1 per axis and hi > lo");
    }
    spec.spatial_spline = ss;
  }

  spec.neighbors = get_number(j, where, "neighbors", spec.neighbors);
  if (spec.neighbors < 1) throw config_error("model.neighbors must be >= 1");

  if (j.contains("priors") && !j["priors"].is_null()) {
    spec.priors = parse_priors(j["priors"], "model.priors");
  }
  return spec;
}

McmcConfig parse_mcmc(const json& j) {
  const std::string where = "mcmc";
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"iterations", "burnin", "adapt_start", "adapt_mixture_weight",
                       "adapt_jitter", "adapt", "init_step", "init_sigma2",
                       "init_phi", "init_tau2", "init_lambda", "lambda_update",
                       "flush_every"});
  McmcConfig c;
  c.n_iter = get_number<long>(j, where, "iterations", c.n_iter);
  c.n_burnin = get_number<long>(j, where, "burnin", c.n_burnin);
  c.adapt_start = get_number<long>(j, where, "adapt_start", c.adapt_start);
  c.adapt_mixture_weight =
      get_number(j, where, "adapt_mixture_weight", c.adapt_mixture_weight);
  c.adapt_jitter = get_number(j, where, "adapt_jitter", c.adapt_jitter);
  c.adapt = get_bool(j, where, "adapt", c.adapt);
  if (j.contains("init_step") && !j["init_step"].is_null()) {
    if (!j["init_step"].is_array() || j["init_step"].size() != 3) {
      throw config_error("mcmc.init_step must be an array of 3 numbers");
    }
    for (int i = 0; i < 3; ++i) {
      if (!j["init_step"][i].is_number()) {
        throw config_error("mcmc.init_step must be an array of 3 numbers");
      }
      c.init_step[static_cast<std::size_t>(i)] = j["init_step"][i].get<double>();
    }
  }
  c.init_sigma2 = get_number(j, where, "init_sigma2", c.init_sigma2);
  c.init_phi = get_number(j, where, "init_phi", c.init_phi);
  c.init_tau2 = get_number(j, where, "init_tau2", c.init_tau2);
  c.init_lambda = get_number(j, where, "init_lambda", c.init_lambda);
  check_positive(c.init_sigma2, where, "init_sigma2");
  check_positive(c.init_phi, where, "init_phi");
  check_positive(c.init_tau2, where, "init_tau2");
  check_positive(c.init_lambda, where, "init_lambda");
  const std::string lu = get_string(j, where, "lambda_update", "paper");
  if (lu == "paper") {
    c.lambda_update = McmcConfig::LambdaUpdate::kPaper;
  } else if (lu == "conjugate") {
    c.lambda_update = McmcConfig::LambdaUpdate::kConjugate;
  } else {
    throw config_error("mcmc.lambda_update must be 'paper' or 'conjugate'");
  }
  c.flush_every = get_number<long>(j, where, "flush_every", c.flush_every);
  c.validate();
  return c;
}

SimConfig parse_sim(const json& j) {
  const std::string where = "simulate";
  require_object(j, where);
  reject_unknown_keys(j, where,
                      {"individuals", "points_per_individual", "waiting_rate",
                       "domain", "sigma2", "phi", "tau2", "intercept",
                       "intercepts", "slopes", "surface", "rw_step_variance",
                       "start_timestamp"});
  SimConfig c;
  c.individuals = get_number(j, where, "individuals", c.individuals);
  c.points_per_individual =
      get_number<long>(j, where, "points_per_individual", c.points_per_individual);
  c.waiting_rate = get_number(j, where, "waiting_rate", c.waiting_rate);
  if (j.contains("domain") && !j["domain"].is_null()) {
    if (!j["domain"].is_array() || j["domain"].size() != 4) {
      throw config_error("simulate.domain must be [lo_x, hi_x, lo_y, hi_y]");
    }
    for (int i = 0; i < 4; ++i) {
      if (!j["domain"][i].is_number()) {
        throw config_error("simulate.domain must be [lo_x, hi_x, lo_y, hi_y]");
      }
    }
    c.lo_x = j["domain"][0].get<double>();
    c.hi_x = j["domain"][1].get<double>();
    c.lo_y = j["domain"][2].get<double>();
    c.hi_y = j["domain"][3].get<double>();
  }
  c.kernel.sigma2 = get_number(j, where, "sigma2", c.kernel.sigma2);
  c.kernel.phi = get_number(j, where, "phi", c.kernel.phi);
  c.noise.tau2 = get_number(j, where, "tau2", c.noise.tau2);
  if (j.contains("intercept") && j.contains("intercepts")) {
    throw config_error("simulate: give either 'intercept' or 'intercepts', not both");
  }
  if (j.contains("intercept") && !j["intercept"].is_null()) {
    c.common_intercept = true;
    c.intercepts = {get_number(j, where, "intercept", 0.0)};
  }
  if (j.contains("intercepts") && !j["intercepts"].is_null()) {
    if (!j["intercepts"].is_array()) {
      throw config_error("simulate.intercepts must be an array of numbers");
    }
    for (const auto& v : j["intercepts"]) {
      if (!v.is_number()) {
        throw config_error("simulate.intercepts must be an array of numbers");
      }
      c.intercepts.push_back(v.get<double>());
    }
  }
  if (j.contains("slopes") && !j["slopes"].is_null()) {
    if (!j["slopes"].is_array()) {
      throw config_error("simulate.slopes must be an array of numbers");
    }
    for (const auto& v : j["slopes"]) {
      if (!v.is_number()) {
        throw config_error("simulate.slopes must be an array of numbers");
      }
      c.slopes.push_back(v.get<double>());
    }
  }
  if (j.contains("surface") && !j["surface"].is_null()) {
    const json& s = j["surface"];
    const std::string sw = "simulate.surface";
    require_object(s, sw);
    reject_unknown_keys(s, sw, {"n_basis_x", "n_basis_y", "degree", "coef_variance"});
    SurfaceConfig sc;
    sc.n_basis_x = get_number(s, sw, "n_basis_x", sc.n_basis_x);
    sc.n_basis_y = get_number(s, sw, "n_basis_y", sc.n_basis_y);
    sc.degree = get_number(s, sw, "degree", sc.degree);
    sc.coef_variance = get_number(s, sw, "coef_variance", sc.coef_variance);
    c.surface = sc;
  }
  c.rw_step_variance = get_number(j, where, "rw_step_variance", c.rw_step_variance);
  c.start_timestamp = get_string(j, where, "start_timestamp", c.start_timestamp);
  c.validate();
  return c;
}

}  // namespace

RunConfig parse_config_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw config_error(origin + ": JSON parse failure: " + e.what());
  }
  require_object(j, origin);
  reject_unknown_keys(j, origin,
                      {"seed", "threads", "output_dir", "data", "model", "mcmc",
                       "simulate", "predict", "report"});

  RunConfig cfg;
  try {
    cfg.seed = get_number<std::uint64_t>(j, origin, "seed", cfg.seed);
    cfg.threads = get_number(j, origin, "threads", cfg.threads);
    if (cfg.threads < 0) throw config_error("threads must be >= 0");
    cfg.output_dir = get_string(j, origin, "output_dir", cfg.output_dir);

    if (j.contains("data") && !j["data"].is_null()) {
      const json& d = j["data"];
      require_object(d, "data");
      reject_unknown_keys(d, "data",
                          {"dataset", "gps", "split_fraction", "split_seed"});
      cfg.data.dataset = get_string(d, "data", "dataset", "");
      cfg.data.gps = get_string(d, "data", "gps", "");
      cfg.data.split_fraction =
          get_number(d, "data", "split_fraction", cfg.data.split_fraction);
      cfg.data.split_seed =
          get_number<std::uint64_t>(d, "data", "split_seed", cfg.data.split_seed);
      if (!(cfg.data.split_fraction > 0.0) || !(cfg.data.split_fraction < 1.0)) {
        throw config_error("data.split_fraction must lie in (0,1)");
      }
    }
    if (j.contains("model") && !j["model"].is_null()) {
      cfg.model = parse_model(j["model"]);
    }
    if (j.contains("mcmc") && !j["mcmc"].is_null()) {
      cfg.mcmc = parse_mcmc(j["mcmc"]);
    }
    if (j.contains("simulate") && !j["simulate"].is_null()) {
      cfg.sim = parse_sim(j["simulate"]);
    }
    if (j.contains("predict") && !j["predict"].is_null()) {
      const json& p = j["predict"];
      require_object(p, "predict");
      reject_unknown_keys(p, "predict", {"chain", "burnin", "thin", "level"});
      cfg.predict.chain = get_string(p, "predict", "chain", "");
      cfg.predict.burnin = get_number<long>(p, "predict", "burnin", cfg.predict.burnin);
      cfg.predict.thin = get_number(p, "predict", "thin", cfg.predict.thin);
      cfg.predict.level = get_number(p, "predict", "level", cfg.predict.level);
      if (cfg.predict.burnin < 0) throw config_error("predict.burnin must be >= 0");
      if (cfg.predict.thin < 1) throw config_error("predict.thin must be >= 1");
      if (!(cfg.predict.level > 0.0) || !(cfg.predict.level < 1.0)) {
        throw config_error("predict.level must lie in (0,1)");
      }
    }
    if (j.contains("report") && !j["report"].is_null()) {
      const json& r = j["report"];
      require_object(r, "report");
      reject_unknown_keys(r, "report", {"chain", "burnin", "thin", "surface_grid"});
      cfg.report.chain = get_string(r, "report", "chain", "");
      cfg.report.burnin = get_number<long>(r, "report", "burnin", cfg.report.burnin);
      cfg.report.thin = get_number(r, "report", "thin", cfg.report.thin);
      cfg.report.surface_grid =
          get_number(r, "report", "surface_grid", cfg.report.surface_grid);
      if (cfg.report.burnin < 0) throw config_error("report.burnin must be >= 0");
      if (cfg.report.thin < 1) throw config_error("report.thin must be >= 1");
      if (cfg.report.surface_grid < 2) {
        throw config_error("report.surface_grid must be >= 2");
      }
    }
  } catch (const json::exception& e) {
    throw config_error(origin + ": " + e.what());
  }

  // Per-command seeds default to the run seed; command-line --seed replaces
  // the run seed before dispatch.
  cfg.mcmc.seed = cfg.seed;
  cfg.sim.seed = cfg.seed;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str(), path);
}

}  // namespace trajgp
