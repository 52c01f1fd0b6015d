/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/design.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "trajgp/errors.hpp"

namespace trajgp {

double mag(double x_count, double y_count, double z_count) {
  if (x_count < 0.0 || y_count < 0.0 || z_count < 0.0) {
    throw data_error("mag: negative axis count");
  }
  return std::sqrt(x_count * x_count + y_count * y_count + z_count * z_count);
}

MetResult mag_to_met(double mag_value) {
  MetResult r;
  r.met = (0.000863 * 6.0) * mag_value + 0.668876;
  if (mag_value < 493.0) {
    r.intensity = Intensity::kSedentaryLight;
  } else if (mag_value < 1029.0) {
    r.intensity = Intensity::kModerate;
  } else if (mag_value < 1608.0) {
    r.intensity = Intensity::kHard;
  } else {
    r.intensity = Intensity::kVeryHard;
  }
  return r;
}

std::pair<double, double> intensity_met_range(Intensity level) {
  switch (level) {
    case Intensity::kSedentaryLight: return {0.0, 3.0};
    case Intensity::kModerate: return {3.0, 6.0};
    case Intensity::kHard: return {6.0, 9.0};
    case Intensity::kVeryHard: return {9.0, std::numeric_limits<double>::infinity()};
  }
  return {0.0, 0.0};
}

const char* intensity_name(Intensity level) {
  switch (level) {
    case Intensity::kSedentaryLight: return "sedentary/light";
    case Intensity::kModerate: return "moderate";
    case Intensity::kHard: return "hard";
    case Intensity::kVeryHard: return "very hard";
  }
  return "?";
}

double fractional_hour(int hour, int minute, int second, int millisecond) {
  return hour + minute / 60.0 + second / 3600.0 + millisecond / 3600000.0;
}

void Priors::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw config_error(std::string("priors: ") + name + " must be positive");
    }
  };
  pos(beta_variance, "beta_variance");
  pos(sigma2_shape, "sigma2_shape");
  pos(sigma2_rate, "sigma2_rate");
  pos(tau2_shape, "tau2_shape");
  pos(tau2_rate, "tau2_rate");
  pos(phi_shape, "phi_shape");
  pos(phi_rate, "phi_rate");
  pos(lambda_shape, "lambda_shape");
  pos(lambda_rate, "lambda_rate");
  if (!std::isfinite(beta_mean)) throw config_error("priors: beta_mean not finite");
}

Design assemble_design(const TrajectoryDataset& data, const ModelSpec& spec) {
  if (data.individuals.empty()) throw data_error("assemble_design: empty dataset");
  spec.priors.validate();

  const int k = static_cast<int>(data.individuals.size());
  const int n_intercept = spec.per_individual_intercept ? k : 1;

  Design design;
  DesignInfo& info = design.info;
  if (spec.per_individual_intercept) {
    for (const auto& ind : data.individuals) {
      info.column_names.push_back("intercept[" + ind.id + "]");
    }
  } else {
    info.column_names.push_back("intercept");
  }

  // Map declared categorical names to dataset column positions.
  std::vector<int> cat_col(spec.categoricals.size());
  for (std::size_t c = 0; c < spec.categoricals.size(); ++c) {
    const auto& cs = spec.categoricals[c];
    if (cs.levels.size() < 2) {
      throw config_error("assemble_design: categorical '" + cs.name +
                         "' needs at least 2 levels");
    }
    int found = -1;
    for (std::size_t j = 0; j < data.categorical_names.size(); ++j) {
      if (data.categorical_names[j] == cs.name) found = static_cast<int>(j);
    }
    if (found < 0) {
      throw data_error("assemble_design: categorical covariate '" + cs.name +
                       "' not present in dataset");
    }
    cat_col[c] = found;
    for (std::size_t l = 1; l < cs.levels.size(); ++l) {
      info.column_names.push_back(cs.name + "=" + cs.levels[l]);
    }
  }

  std::vector<int> num_col(spec.numeric_covariates.size());
  for (std::size_t c = 0; c < spec.numeric_covariates.size(); ++c) {
    int found = -1;
    for (std::size_t j = 0; j < data.numeric_names.size(); ++j) {
      if (data.numeric_names[j] == spec.numeric_covariates[c]) found = static_cast<int>(j);
    }
    if (found < 0) {
      throw data_error("assemble_design: numeric covariate '" +
                       spec.numeric_covariates[c] + "' not present in dataset");
    }
    num_col[c] = found;
    info.column_names.push_back(spec.numeric_covariates[c]);
  }

  std::optional<BSplineBasis> hour_basis;
  if (spec.hour_spline) {
    const auto& h = *spec.hour_spline;
    hour_basis.emplace(h.lo, h.hi, h.degree, h.n_basis);
    for (int j = 0; j < h.n_basis; ++j) {
      info.column_names.push_back("hour[" + std::to_string(j) + "]");
    }
  }

  std::optional<TensorBasis> space_basis;
  if (spec.spatial_spline) {
    const auto& s = *spec.spatial_spline;
    space_basis.emplace(BSplineBasis(s.lo_x, s.hi_x, s.degree, s.n_basis_x),
                        BSplineBasis(s.lo_y, s.hi_y, s.degree, s.n_basis_y));
    for (int jx = 0; jx < s.n_basis_x; ++jx) {
      for (int jy = 0; jy < s.n_basis_y; ++jy) {
        // Semicolon keeps the label CSV-safe when used as a chain-file header.
        info.column_names.push_back("space[" + std::to_string(jx) + ";" +
                                    std::to_string(jy) + "]");
      }
    }
    info.n_spatial = space_basis->size();
  }
  info.p_unpenalized = static_cast<int>(info.column_names.size()) - info.n_spatial;

  const int p_star = info.p_star();
  design.blocks.reserve(k);
  for (int ki = 0; ki < k; ++ki) {
    const IndividualSeries& ind = data.individuals[ki];
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(ind.rows(), p_star);
    for (Eigen::Index i = 0; i < ind.rows(); ++i) {
      int col = 0;
      if (spec.per_individual_intercept) {
        x(i, ki) = 1.0;
        col = n_intercept;
      } else {
        x(i, 0) = 1.0;
        col = 1;
      }
      for (std::size_t c = 0; c < spec.categoricals.size(); ++c) {
        const auto& cs = spec.categoricals[c];
        const int nlev = static_cast<int>(cs.levels.size());
        const int code = ind.categorical(i, cat_col[c]);
        if (code < 0 || code >= nlev) {
          throw data_error("assemble_design: individual '" + ind.id + "' row " +
                           std::to_string(i) + ": level code " +
                           std::to_string(code) + " undeclared for '" + cs.name + "'");
        }
        if (code > 0) x(i, col + code - 1) = 1.0;
        col += nlev - 1;
      }
      for (std::size_t c = 0; c < num_col.size(); ++c) {
        const double v = ind.numeric_cov(i, num_col[c]);
        if (!std::isfinite(v)) {
          throw data_error("assemble_design: non-finite covariate '" +
                           spec.numeric_covariates[c] + "' for individual '" +
                           ind.id + "' row " + std::to_string(i));
        }
        x(i, col++) = v;
      }
      if (hour_basis) {
        const double h = ind.hour[i];
        if (!(h >= hour_basis->lo()) || !(h <= hour_basis->hi())) {
          throw data_error("assemble_design: hour " + std::to_string(h) +
                           " outside the spline domain for individual '" +
                           ind.id + "' row " + std::to_string(i));
        }
        col += hour_basis->size();
      }
      if (space_basis) {
        if (!ind.has_position(i)) {
          throw data_error("assemble_design: missing position for individual '" +
                           ind.id + "' row " + std::to_string(i) +
                           " with a spatial spline configured");
        }
        col += space_basis->size();
      }
    }
    // Spline blocks are filled column-contiguously after the scalar pass.
    if (hour_basis) {
      const int first = info.p_unpenalized - hour_basis->size();
      Eigen::VectorXd vals(hour_basis->size());
      for (Eigen::Index i = 0; i < ind.rows(); ++i) {
        hour_basis->eval(ind.hour[i], vals.data());
        x.block(i, first, 1, hour_basis->size()) = vals.transpose();
      }
    }
    if (space_basis) {
      const int first = info.p_unpenalized;
      Eigen::VectorXd vals(space_basis->size());
      for (Eigen::Index i = 0; i < ind.rows(); ++i) {
        space_basis->eval(ind.position(i, 0), ind.position(i, 1), vals.data());
        x.block(i, first, 1, space_basis->size()) = vals.transpose();
      }
    }
    design.blocks.push_back(std::move(x));
  }
  return design;
}

}  // namespace trajgp
