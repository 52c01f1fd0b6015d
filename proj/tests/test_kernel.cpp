/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_util.hpp"
#include "trajgp/kernel.hpp"

using namespace trajgp;

TEST_SUITE("kernel") {

TEST_CASE("covariance values at pinned lags") {
  const KernelParams unit{1.0, 1.0};
  CHECK(exp_cov(0.0, unit) == doctest::Approx(1.0).epsilon(1e-15));
  // e^{-1} frozen to full double precision.
  CHECK(exp_cov(1.0, unit) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  const KernelParams kp{2.0, 0.5};
  // 2 e^{-1}.
  CHECK(exp_cov(2.0, kp) == doctest::Approx(0.73575888234288467).epsilon(1e-14));
  CHECK(exp_cov(0.0, kp) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("negative lag is rejected") {
  CHECK_THROWS_AS(exp_cov(-1e-9, KernelParams{}), std::domain_error);
}

TEST_CASE("covariance matrix is symmetric with sill diagonal") {
  std::mt19937_64 rng(11);
  const Eigen::VectorXd t = test_util::random_times(40, 5.0, rng);
  const KernelParams kp{1.7, 0.8};
  const Eigen::MatrixXd c = cov_matrix(t, kp);
  CHECK((c - c.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < 40; ++i) CHECK(c(i, i) == doctest::Approx(1.7));
  CHECK(c(3, 0) ==
        doctest::Approx(1.7 * std::exp(-0.8 * (t[3] - t[0]))).epsilon(1e-14));
}

TEST_CASE("covariance matrix is positive definite") {
  // Distinct times and a positive sill make the exponential kernel strictly
  // PD; the smallest Cholesky pivot must stay positive.
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const Eigen::VectorXd t = test_util::random_times(60, 4.0, rng);
    const Eigen::MatrixXd c = cov_matrix(t, KernelParams{1.0, 2.0});
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("markov screening: conditional factorization through midpoints") {
  // For the exponential kernel, corr(a, c) = corr(a, b) corr(b, c) whenever
  // a <= b <= c; this product identity is what the gap-factor path exploits.
  const KernelParams kp{3.0, 1.3};
  const double ab = exp_cov(0.7, kp) / kp.sigma2;
  const double bc = exp_cov(1.1, kp) / kp.sigma2;
  const double ac = exp_cov(1.8, kp) / kp.sigma2;
  CHECK(ac == doctest::Approx(ab * bc).epsilon(1e-14));
}

TEST_CASE("gap decay factors reproduce pairwise correlations") {
  std::mt19937_64 rng(23);
  const int n = 30;
  const Eigen::VectorXd t = test_util::random_times(n, 6.0, rng);
  const double phi = 1.9;
  std::vector<double> g(n);
  gap_decay_factors(t.data(), n, phi, g.data());
  CHECK(g[0] == 1.0);
  for (int i = 1; i < n; ++i) {
    CHECK(g[i] == doctest::Approx(std::exp(-phi * (t[i] - t[i - 1]))).epsilon(1e-14));
  }
  std::vector<double> r(static_cast<std::size_t>(n) * n, 0.0);
  corr_from_gaps(g.data(), n, r.data(), n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      CHECK(r[static_cast<std::size_t>(i) * n + j] ==
            doctest::Approx(std::exp(-phi * (t[i] - t[j]))).epsilon(1e-12));
    }
  }
}

TEST_CASE("gap factors on a window slice match the global ones") {
  // The factor builder hands corr_from_gaps a pointer into the middle of the
  // per-series gap array; the window's internal correlations must not depend
  // on anything before the window.
  std::mt19937_64 rng(29);
  const int n = 25, start = 7, w = 9;
  const Eigen::VectorXd t = test_util::random_times(n, 5.0, rng);
  const double phi = 0.6;
  std::vector<double> g(n);
  gap_decay_factors(t.data(), n, phi, g.data());
  std::vector<double> r(static_cast<std::size_t>(w) * w, 0.0);
  // Element k of the slice is the decay across gap (start+k-1, start+k).
  corr_from_gaps(g.data() + start, w, r.data(), w);
  for (int i = 0; i < w; ++i) {
    for (int j = 0; j <= i; ++j) {
      CHECK(r[static_cast<std::size_t>(i) * w + j] ==
            doctest::Approx(std::exp(-phi * (t[start + i] - t[start + j])))
                .epsilon(1e-12));
    }
  }
}

}  // TEST_SUITE
