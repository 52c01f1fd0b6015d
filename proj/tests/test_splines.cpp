/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "trajgp/errors.hpp"
#include "trajgp/splines.hpp"

using namespace trajgp;

TEST_SUITE("splines") {

TEST_CASE("partition of unity over the whole interval") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(2.0, 9.0);
  const int degrees[] = {0, 1, 2, 3};
  for (const int deg : degrees) {
    const BSplineBasis basis(2.0, 9.0, deg, deg + 5);
    for (int rep = 0; rep < 200; ++rep) {
      const double x = u(rng);
      const Eigen::VectorXd v = basis.eval(x);
      CHECK(v.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(v.minCoeff() >= 0.0);
    }
    CHECK(basis.eval(2.0).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(basis.eval(9.0).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("clamped boundary behavior") {
  const BSplineBasis basis(0.0, 1.0, 2, 6);
  const Eigen::VectorXd at_lo = basis.eval(0.0);
  CHECK(at_lo[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at_lo.tail(5).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  const Eigen::VectorXd at_hi = basis.eval(1.0);
  CHECK(at_hi[5] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at_hi.head(5).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK_THROWS_AS(basis.eval(-1e-12), std::domain_error);
  CHECK_THROWS_AS(basis.eval(1.0 + 1e-12), std::domain_error);
}

TEST_CASE("pinned values for the minimal quadratic basis") {
  // Degree 2 with 3 functions on [0,1] has no interior knots: the basis is
  // the Bernstein triple (1-x)^2, 2x(1-x), x^2.
  const BSplineBasis basis(0.0, 1.0, 2, 3);
  const Eigen::VectorXd v = basis.eval(0.5);
  CHECK(v[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(0.25).epsilon(1e-14));
  const Eigen::VectorXd w = basis.eval(0.25);
  CHECK(w[0] == doctest::Approx(0.5625).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(w[2] == doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("degree one is piecewise-linear interpolation weights") {
  const BSplineBasis basis(0.0, 3.0, 1, 4);  // knots at 0,1,2,3
  const Eigen::VectorXd v = basis.eval(1.25);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(v[3] == doctest::Approx(0.0));
}

TEST_CASE("local evaluation agrees with the full one") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(7.0, 23.0);
  const BSplineBasis basis(7.0, 23.0, 2, 6);
  double vals[8];
  for (int rep = 0; rep < 300; ++rep) {
    const double x = u(rng);
    const int first = basis.eval_local(x, vals);
    const Eigen::VectorXd full = basis.eval(x);
    CHECK(first >= 0);
    CHECK(first + basis.degree() < basis.size());
    for (int j = 0; j < basis.size(); ++j) {
      const double expect = full[j];
      const double got = (j >= first && j <= first + basis.degree())
                             ? vals[j - first]
                             : 0.0;
      CHECK(got == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  // Right endpoint: the last degree+1 functions carry the value.
  const int first = basis.eval_local(23.0, vals);
  CHECK(first == basis.size() - basis.degree() - 1);
}

TEST_CASE("interior knots are equispaced") {
  const BSplineBasis basis(0.0, 10.0, 2, 7);  // 7 - 2 - 1 = 4 interior knots
  const auto& knots = basis.knots();
  REQUIRE(static_cast<int>(knots.size()) == 7 + 2 + 1);  // n_basis + degree + 1
  CHECK(knots[3] == doctest::Approx(2.0));
  CHECK(knots[4] == doctest::Approx(4.0));
  CHECK(knots[5] == doctest::Approx(6.0));
  CHECK(knots[6] == doctest::Approx(8.0));
}

TEST_CASE("excessive degree is rejected") {
  CHECK_THROWS_AS(BSplineBasis(0.0, 1.0, 31, 40), config_error);
}

TEST_CASE("tensor basis is the outer product with row-major x layout") {
  const BSplineBasis bx(1.0, 10.0, 2, 4);
  const BSplineBasis by(1.0, 10.0, 2, 3);
  const TensorBasis tb(bx, by);
  REQUIRE(tb.size() == 12);
  CHECK(tb.flat_index(2, 1) == 2 * 3 + 1);

  const double x = 3.7, y = 8.2;
  const Eigen::VectorXd vx = bx.eval(x);
  const Eigen::VectorXd vy = by.eval(y);
  const Eigen::VectorXd vt = tb.eval(x, y);
  for (int jx = 0; jx < 4; ++jx) {
    for (int jy = 0; jy < 3; ++jy) {
      CHECK(vt[tb.flat_index(jx, jy)] ==
            doctest::Approx(vx[jx] * vy[jy]).epsilon(1e-13));
    }
  }
  CHECK(vt.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random-walk penalty is the 4-neighbor grid laplacian") {
  const int nx = 3, ny = 3;
  const Eigen::MatrixXd p = build_penalty(PenaltyKind::kRandomWalk, nx, ny);
  REQUIRE(p.rows() == 9);
  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // Row sums vanish (the constant surface is unpenalized).
  CHECK((p * Eigen::VectorXd::Ones(9)).cwiseAbs().maxCoeff() < 1e-12);
  // Corner (0,0): 2 neighbors; edge (0,1): 3; center (1,1): 4.
  CHECK(p(0, 0) == doctest::Approx(2.0));
  CHECK(p(1, 1) == doctest::Approx(3.0));
  CHECK(p(4, 4) == doctest::Approx(4.0));
  CHECK(p(0, 1) == doctest::Approx(-1.0));  // (0,0)-(0,1) vertical neighbor
  CHECK(p(0, 3) == doctest::Approx(-1.0));  // (0,0)-(1,0) horizontal neighbor
  CHECK(p(0, 4) == doctest::Approx(0.0));   // diagonal: not a rook move

  // Quadratic form = sum of squared neighbor differences. On the 2x2 grid
  // with coefficients (0,1,2,3): (0-1)^2+(2-3)^2+(0-2)^2+(1-3)^2 = 10.
  const Eigen::MatrixXd p2 = build_penalty(PenaltyKind::kRandomWalk, 2, 2);
  Eigen::VectorXd beta(4);
  beta << 0, 1, 2, 3;
  CHECK(beta.dot(p2 * beta) == doctest::Approx(10.0).epsilon(1e-14));

  // Rank J - 1: exactly one zero eigenvalue.
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(p);
  CHECK(lu.rank() == 8);
  CHECK(penalty_rank(PenaltyKind::kRandomWalk, nx, ny) == 8);
}

TEST_CASE("ridge penalty is the identity") {
  const Eigen::MatrixXd p = build_penalty(PenaltyKind::kRidge, 4, 5);
  CHECK(p.isApprox(Eigen::MatrixXd::Identity(20, 20)));
  CHECK(penalty_rank(PenaltyKind::kRidge, 4, 5) == 20);
}

}  // TEST_SUITE
