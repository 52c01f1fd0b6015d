/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "trajgp/design.hpp"
#include "trajgp/errors.hpp"

using namespace trajgp;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Two individuals, three rows each, covering every design column type.
TrajectoryDataset toy_dataset(bool with_positions) {
  TrajectoryDataset data;
  data.numeric_names = {"temp"};
  data.categorical_names = {"period"};
  for (int k = 0; k < 2; ++k) {
    IndividualSeries s;
    s.id = k == 0 ? "a" : "b";
    s.time.resize(3);
    s.time << 0.0 + k, 1.0 + k, 2.5 + k;
    s.stamp_ms = {0, 1000, 2500};
    s.hour.resize(3);
    s.hour << 8.0, 12.5, 22.0;
    s.outcome.resize(3);
    s.outcome << 0.1, -0.2, 0.3;
    s.position.resize(3, 2);
    if (with_positions) {
      s.position << 2.0, 3.0, 5.5, 7.0, 9.0, 1.5;
    } else {
      s.position.setConstant(kNaN);
    }
    s.numeric_cov.resize(3, 1);
    s.numeric_cov << 1.5, -0.5, 2.0;
    s.categorical.resize(3, 1);
    s.categorical << 0, 1, 2;
    data.individuals.push_back(std::move(s));
  }
  return data;
}

ModelSpec toy_spec(bool spatial, bool hour) {
  ModelSpec spec;
  spec.per_individual_intercept = true;
  spec.numeric_covariates = {"temp"};
  spec.categoricals = {{"period", {"early", "mid", "late"}}};
  if (hour) spec.hour_spline = HourSplineSpec{};
  if (spatial) spec.spatial_spline = SpatialSplineSpec{};
  return spec;
}

}  // namespace

TEST_SUITE("design") {

TEST_CASE("magnitude of tri-axial counts") {
  CHECK(mag(3.0, 4.0, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(mag(1.0, 2.0, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(mag(0.0, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(mag(-1.0, 0.0, 0.0), data_error);
}

TEST_CASE("counts-to-energy map and intensity classes") {
  // Linear map rescaled to 10 s epochs: MET = 0.005178 * mag + 0.668876.
  const MetResult r = mag_to_met(1488.0);
  CHECK(r.met == doctest::Approx(0.000863 * 6 * 1488 + 0.668876).epsilon(1e-12));
  CHECK(r.intensity == Intensity::kHard);
  const auto [lo, hi] = intensity_met_range(Intensity::kHard);
  CHECK(lo == 6.0);
  CHECK(hi == 9.0);
  CHECK(r.met >= lo);
  CHECK(r.met < hi);

  // Published cut-points partition the count axis.
  CHECK(mag_to_met(0.0).intensity == Intensity::kSedentaryLight);
  CHECK(mag_to_met(492.999).intensity == Intensity::kSedentaryLight);
  CHECK(mag_to_met(493.0).intensity == Intensity::kModerate);
  CHECK(mag_to_met(1028.999).intensity == Intensity::kModerate);
  CHECK(mag_to_met(1029.0).intensity == Intensity::kHard);
  CHECK(mag_to_met(1607.999).intensity == Intensity::kHard);
  CHECK(mag_to_met(1608.0).intensity == Intensity::kVeryHard);
  CHECK(intensity_met_range(Intensity::kVeryHard).second ==
        std::numeric_limits<double>::infinity());
  CHECK(std::string(intensity_name(Intensity::kSedentaryLight)).size() > 0);
}

TEST_CASE("fractional hour") {
  CHECK(fractional_hour(22, 59, 55, 0) ==
        doctest::Approx(22.998611111111110).epsilon(1e-12));
  CHECK(fractional_hour(0, 0, 0, 0) == 0.0);
  CHECK(fractional_hour(7, 30, 0, 500) ==
        doctest::Approx(7.5001388888888888).epsilon(1e-12));
}

TEST_CASE("full design: column order, names, and values") {
  const TrajectoryDataset data = toy_dataset(true);
  const ModelSpec spec = toy_spec(true, true);
  const Design design = assemble_design(data, spec);

  // intercept[a], intercept[b], period=mid, period=late, temp, hour[0..5],
  // space[0;0..8;8].
  const int p_unpen = 2 + 2 + 1 + 6;
  REQUIRE(design.info.p_unpenalized == p_unpen);
  REQUIRE(design.info.n_spatial == 81);
  REQUIRE(design.info.p_star() == p_unpen + 81);
  REQUIRE(static_cast<int>(design.info.column_names.size()) == p_unpen + 81);
  CHECK(design.info.column_names[0] == "intercept[a]");
  CHECK(design.info.column_names[1] == "intercept[b]");
  CHECK(design.info.column_names[2] == "period=mid");
  CHECK(design.info.column_names[3] == "period=late");
  CHECK(design.info.column_names[4] == "temp");
  CHECK(design.info.column_names[5] == "hour[0]");
  CHECK(design.info.column_names[11] == "space[0;0]");
  CHECK(design.info.column_names.back() == "space[8;8]");

  REQUIRE(design.blocks.size() == 2);
  const Eigen::MatrixXd& xa = design.blocks[0];
  const Eigen::MatrixXd& xb = design.blocks[1];
  REQUIRE(xa.rows() == 3);
  REQUIRE(xa.cols() == design.info.p_star());

  // Intercepts are one-hot per individual.
  CHECK(xa.col(0).isOnes());
  CHECK(xa.col(1).isZero());
  CHECK(xb.col(0).isZero());
  CHECK(xb.col(1).isOnes());

  // Dummies drop the baseline level.
  CHECK(xa(0, 2) == 0.0);  // early
  CHECK(xa(0, 3) == 0.0);
  CHECK(xa(1, 2) == 1.0);  // mid
  CHECK(xa(1, 3) == 0.0);
  CHECK(xa(2, 2) == 0.0);  // late
  CHECK(xa(2, 3) == 1.0);

  CHECK(xa(0, 4) == 1.5);
  CHECK(xa(1, 4) == -0.5);

  // Spline blocks evaluate the stored regressors: each sums to one.
  for (int i = 0; i < 3; ++i) {
    CHECK(xa.row(i).segment(5, 6).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(xa.row(i).segment(p_unpen, 81).sum() ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  // Hour block matches a direct basis evaluation.
  const BSplineBasis hour_basis(7.0, 23.0, 2, 6);
  const Eigen::VectorXd hv = hour_basis.eval(12.5);
  for (int j = 0; j < 6; ++j) {
    CHECK(xa(1, 5 + j) == doctest::Approx(hv[j]).epsilon(1e-13));
  }
  // Spatial block matches the tensor basis at the stored position.
  const TensorBasis tb(BSplineBasis(1.0, 10.0, 2, 9), BSplineBasis(1.0, 10.0, 2, 9));
  const Eigen::VectorXd sv = tb.eval(5.5, 7.0);
  for (int j = 0; j < 81; ++j) {
    CHECK(xa(1, p_unpen + j) == doctest::Approx(sv[j]).epsilon(1e-13));
  }
}

TEST_CASE("shared intercept variant") {
  const TrajectoryDataset data = toy_dataset(false);
  ModelSpec spec = toy_spec(false, false);
  spec.per_individual_intercept = false;
  const Design design = assemble_design(data, spec);
  CHECK(design.info.column_names[0] == "intercept");
  CHECK(design.info.p_unpenalized == 1 + 2 + 1);
  CHECK(design.blocks[0].col(0).isOnes());
  CHECK(design.blocks[1].col(0).isOnes());
}

TEST_CASE("missing position under a spatial term is a data error") {
  const TrajectoryDataset data = toy_dataset(false);
  const ModelSpec spec = toy_spec(true, false);
  try {
    assemble_design(data, spec);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    CHECK(std::string(e.what()).find("position") != std::string::npos);
  }
}

TEST_CASE("out-of-range categorical code is a data error") {
  TrajectoryDataset data = toy_dataset(false);
  data.individuals[1].categorical(2, 0) = 7;
  const ModelSpec spec = toy_spec(false, false);
  try {
    assemble_design(data, spec);
    FAIL("expected data_error");
  } catch (const data_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("b") != std::string::npos);
    CHECK(msg.find("period") != std::string::npos);
  }
}

TEST_CASE("hour outside the spline domain is a data error") {
  TrajectoryDataset data = toy_dataset(false);
  data.individuals[0].hour[1] = 5.0;
  const ModelSpec spec = toy_spec(false, true);
  CHECK_THROWS_AS(assemble_design(data, spec), data_error);
}

}  // TEST_SUITE
