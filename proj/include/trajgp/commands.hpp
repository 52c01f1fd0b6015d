/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_COMMANDS_HPP_
#define TRAJGP_COMMANDS_HPP_

#include <iosfwd>

#include "trajgp/config.hpp"

namespace trajgp {

// The four command-line entry points. Each writes its artifacts under
// config.output_dir and human-readable progress to `log`; failures surface as
// the library's exception types (config_error / data_error / numeric_error)
// which the binary maps to exit codes.

// Writes dataset.csv and truth.json.
void cmd_simulate(const RunConfig& config, std::ostream& log);

// Ingests (joining GPS fixes when configured), splits train/test, runs the
// sampler streaming chain.csv, and writes fit.json with run statistics.
void cmd_fit(const RunConfig& config, std::ostream& log);

// Re-creates the same split, reads chain.csv, and writes predictions.csv for
// every held-out row plus metrics.json (coverage, rmspe, rel_rmspe, piw, dic).
void cmd_predict(const RunConfig& config, std::ostream& log);

// Summarizes a chain into coefficients.csv (posterior mean and central 95%
// interval per parameter) and, when the model has a spatial term, surface.csv
// on a regular grid (pointwise mean, interval bounds, and interval width).
void cmd_report(const RunConfig& config, std::ostream& log);

}  // namespace trajgp

#endif  // TRAJGP_COMMANDS_HPP_
