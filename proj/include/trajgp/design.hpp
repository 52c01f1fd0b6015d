/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_DESIGN_HPP_
#define TRAJGP_DESIGN_HPP_

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "trajgp/dataset.hpp"
#include "trajgp/splines.hpp"

namespace trajgp {

// --- Outcome transforms -----------------------------------------------------

// Euclidean magnitude of tri-axial activity counts. Throws data_error for
// negative counts.
double mag(double x_count, double y_count, double z_count);

// Activity-intensity classes by published vector-magnitude cut-points
// {493, 1029, 1608} per 10-second-rescaled counts.
enum class Intensity { kSedentaryLight, kModerate, kHard, kVeryHard };

struct MetResult {
  double met;
  Intensity intensity;
};

// Linear counts-to-energy-expenditure map, rescaled to 10 s epochs:
//   MET = (0.000863 * 6) * mag + 0.668876.
// The class cut-points are the published table values; they are close to but
// not exactly the inverse images of the MET class boundaries under the linear
// map (493 vs ~450 for the lower moderate bound) -- the table wins here.
MetResult mag_to_met(double mag_value);

// MET range [lo, hi) documented for an intensity class (hi = +inf for the
// top class).
std::pair<double, double> intensity_met_range(Intensity level);

const char* intensity_name(Intensity level);

// Fractional local hour of day, e.g. 22:59:55.000 -> 22.998611...
double fractional_hour(int hour, int minute, int second, int millisecond);

// --- Model specification ----------------------------------------------------

struct CategoricalSpec {
  std::string name;
  std::vector<std::string> levels;  // levels[0] is the baseline (dropped)
};

struct HourSplineSpec {
  int n_basis = 6;
  int degree = 2;
  double lo = 7.0;
  double hi = 23.0;
};

struct SpatialSplineSpec {
  int n_basis_x = 9;
  int n_basis_y = 9;
  int degree = 2;
  double lo_x = 1.0, hi_x = 10.0, lo_y = 1.0, hi_y = 10.0;
  PenaltyKind penalty = PenaltyKind::kRandomWalk;
};

struct Priors {
  double beta_mean = 0.0;
  double beta_variance = 1e6;    // V_beta, shared by all unpenalized columns
  double sigma2_shape = 2.0, sigma2_rate = 2.0;  // inverse gamma
  double tau2_shape = 2.0, tau2_rate = 2.0;      // inverse gamma
  double phi_shape = 1.0, phi_rate = 1.0;        // gamma
  double lambda_shape = 1.0, lambda_rate = 1.0;  // gamma
  void validate() const;  // positivity; throws config_error
};

struct ModelSpec {
  bool per_individual_intercept = true;
  std::vector<CategoricalSpec> categoricals;
  std::vector<std::string> numeric_covariates;
  std::optional<HourSplineSpec> hour_spline;
  std::optional<SpatialSplineSpec> spatial_spline;
  Priors priors;
  int neighbors = 10;  // m, the conditioning-window budget
};

// Assembled regression design. Column order is fixed and documented:
// intercept(s), categorical dummies (baseline dropped), numeric covariates,
// hour-spline block, spatial-spline block (always last; the only penalized
// block).
struct DesignInfo {
  std::vector<std::string> column_names;
  int p_unpenalized = 0;  // everything before the spatial block
  int n_spatial = 0;      // spatial block width (0 when absent)
  int p_star() const { return p_unpenalized + n_spatial; }
};

struct Design {
  std::vector<Eigen::MatrixXd> blocks;  // one T_k x p* matrix per individual
  DesignInfo info;
};

// Deterministic assembly; throws data_error for unseen categorical codes,
// missing positions under a spatial term, or hours outside the spline domain.
Design assemble_design(const TrajectoryDataset& data, const ModelSpec& spec);

}  // namespace trajgp

#endif  // TRAJGP_DESIGN_HPP_
