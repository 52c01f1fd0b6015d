/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_CONFIG_HPP_
#define TRAJGP_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "trajgp/sampler.hpp"
#include "trajgp/simulate.hpp"

namespace trajgp {

// Input data and train/test split settings. `split_seed` is independent of
// the run seed so that `fit` and `predict` reproduce the same split even if
// the sampler seed is overridden between the two commands.
struct DataConfig {
  std::string dataset;
  std::string gps;  // empty = no GPS joining
  double split_fraction = 0.7;
  std::uint64_t split_seed = 0;
};

struct PredictConfig {
  std::string chain;  // empty = <output_dir>/chain.csv
  long burnin = 0;
  int thin = 1;
  double level = 0.95;
};

struct ReportConfig {
  std::string chain;  // empty = <output_dir>/chain.csv
  long burnin = 0;
  int thin = 1;
  int surface_grid = 50;  // grid resolution per axis for surface output
};

// One JSON document drives every command; sections irrelevant to a command
// may be omitted. Unknown keys anywhere are rejected so that typos fail fast
// instead of silently running defaults.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = leave the runtime default
  std::string output_dir = ".";
  DataConfig data;
  ModelSpec model;
  McmcConfig mcmc;
  SimConfig sim;
  PredictConfig predict;
  ReportConfig report;
};

// Parse and schema-check a config document. Throws config_error on unknown
// keys, wrong types, or out-of-range values; data_error when the file cannot
// be read.
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& text, const std::string& origin);

}  // namespace trajgp

#endif  // TRAJGP_CONFIG_HPP_
