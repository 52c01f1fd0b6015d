/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_DATASET_HPP_
#define TRAJGP_DATASET_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace trajgp {

// One individual's time-sorted observations. `time` is seconds since the
// dataset origin (the earliest observation across individuals); wall-clock
// context is kept alongside because the hour-of-day regressor needs it.
struct IndividualSeries {
  std::string id;
  Eigen::VectorXd time;              // strictly increasing, seconds
  std::vector<std::int64_t> stamp_ms;  // absolute UTC epoch milliseconds
  Eigen::VectorXd hour;              // local fractional hour of day per row
  Eigen::VectorXd outcome;           // lMAG (or simulated y)
  Eigen::MatrixXd position;          // rows() x 2, NaN rows = no position
  Eigen::MatrixXd numeric_cov;       // rows() x #numeric covariates
  Eigen::MatrixXi categorical;       // rows() x #categorical, level codes

  Eigen::Index rows() const { return time.size(); }
  bool has_position(Eigen::Index i) const {
    return position.rows() > i && !std::isnan(position(i, 0));
  }
};

struct TrajectoryDataset {
  std::vector<IndividualSeries> individuals;
  std::vector<std::string> numeric_names;      // column order of numeric_cov
  std::vector<std::string> categorical_names;  // column order of categorical
  std::int64_t origin_ms = 0;                  // epoch ms of time == 0
  int utc_offset_min = 0;                      // local-clock offset of the stamps

  std::size_t k() const { return individuals.size(); }
  Eigen::Index rows() const {
    Eigen::Index n = 0;
    for (const auto& ind : individuals) n += ind.rows();
    return n;
  }
};

}  // namespace trajgp

#endif  // TRAJGP_DATASET_HPP_
