/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "trajgp/commands.hpp"
#include "trajgp/config.hpp"
#include "trajgp/errors.hpp"

namespace {

void emit_error(const char* type, const std::string& message) {
  nlohmann::json j;
  j["error"] = {{"type", type}, {"message", message}};
  std::cerr << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Scalable Bayesian Gaussian-process regression for individual activity "
      "trajectories"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool seed_given = false, threads_given = false, output_given = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration file")
        ->required();
    sub->add_option("--seed", seed, "Override the configured seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads, "Worker thread count (0 = default)")
        ->each([&](const std::string&) { threads_given = true; });
    sub->add_option("--output", output_dir, "Output directory")
        ->each([&](const std::string&) { output_given = true; });
  };

  CLI::App* sub_simulate = app.add_subcommand(
      "simulate", "Generate a synthetic dataset with known ground truth");
  CLI::App* sub_fit = app.add_subcommand(
      "fit", "Run the collapsed MCMC sampler on a dataset");
  CLI::App* sub_predict = app.add_subcommand(
      "predict", "Predict held-out rows from a fitted chain and score them");
  CLI::App* sub_report = app.add_subcommand(
      "report", "Summarize a chain into coefficient and surface tables");
  for (CLI::App* sub : {sub_simulate, sub_fit, sub_predict, sub_report}) {
    add_common(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    trajgp::RunConfig config = trajgp::load_config(config_path);
    if (seed_given) {
      config.seed = seed;
      config.mcmc.seed = seed;
      config.sim.seed = seed;
    }
    if (threads_given) {
      if (threads < 0) throw trajgp::config_error("--threads must be >= 0");
      config.threads = threads;
    }
    if (output_given) config.output_dir = output_dir;
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#endif
    if (!config.output_dir.empty() && config.output_dir != ".") {
      std::filesystem::create_directories(config.output_dir);
    }

    if (sub_simulate->parsed()) {
      trajgp::cmd_simulate(config, std::cout);
    } else if (sub_fit->parsed()) {
      trajgp::cmd_fit(config, std::cout);
    } else if (sub_predict->parsed()) {
      trajgp::cmd_predict(config, std::cout);
    } else if (sub_report->parsed()) {
      trajgp::cmd_report(config, std::cout);
    }
    return 0;
  } catch (const trajgp::config_error& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const trajgp::data_error& e) {
    emit_error("data", e.what());
    return 3;
  } catch (const trajgp::numeric_error& e) {
    emit_error("numeric", e.what());
    return 4;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 1;
  }
}
