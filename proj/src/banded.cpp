/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/banded.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "trajgp/errors.hpp"

namespace trajgp {

SymBandMatrix::SymBandMatrix(int n, int bw) : n_(n), bw_(bw) {
  if (n < 1) throw config_error("SymBandMatrix: size must be positive");
  if (bw < 0) throw config_error("SymBandMatrix: bandwidth must be non-negative");
  data_.assign(static_cast<std::size_t>(n) * (bw + 1), 0.0);
}

void SymBandMatrix::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

void SymBandMatrix::add_to_diagonal(double v) {
  const int ld = bw_ + 1;
  for (int j = 0; j < n_; ++j) data_[static_cast<std::size_t>(j) * ld] += v;
}

Eigen::MatrixXd SymBandMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
  for (int j = 0; j < n_; ++j) {
    for (int r = 0; r <= bw_ && j + r < n_; ++r) {
      m(j + r, j) = at(j, r);
      m(j, j + r) = at(j, r);
    }
  }
  return m;
}

BandCholesky::BandCholesky(SymBandMatrix m)
    : n_(m.size()), bw_(m.bandwidth()), l_(std::move(m).release()), log_det_(0.0) {
  const int ld = bw_ + 1;
  double* l = l_.data();
  for (int j = 0; j < n_; ++j) {
    double* colj = l + static_cast<std::size_t>(j) * ld;
    // Subtract the outer-product contributions of earlier columns that reach
    // row j: column k touches rows k..k+bw, so only k >= j - bw matter.
    const int k0 = std::max(0, j - bw_);
    for (int k = k0; k < j; ++k) {
      const double* colk = l + static_cast<std::size_t>(k) * ld;
      const double ljk = colk[j - k];
      const int rmax = std::min(bw_ - (j - k), n_ - 1 - j);
      for (int r = 0; r <= rmax; ++r) {
        colj[r] -= ljk * colk[j - k + r];
      }
    }
    const double pivot = colj[0];
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
      throw numeric_error("BandCholesky: non-positive pivot at index " +
                          std::to_string(j) + " (value " + std::to_string(pivot) + ")");
    }
    const double ljj = std::sqrt(pivot);
    log_det_ += 2.0 * std::log(ljj);
    colj[0] = ljj;
    const double inv = 1.0 / ljj;
    const int rmax = std::min(bw_, n_ - 1 - j);
    for (int r = 1; r <= rmax; ++r) colj[r] *= inv;
  }
}

void BandCholesky::forward_solve_in_place(double* x) const {
  const int ld = bw_ + 1;
  const double* l = l_.data();
  for (int k = 0; k < n_; ++k) {
    const double* colk = l + static_cast<std::size_t>(k) * ld;
    const double xk = x[k] / colk[0];
    x[k] = xk;
    const int rmax = std::min(bw_, n_ - 1 - k);
    for (int r = 1; r <= rmax; ++r) x[k + r] -= colk[r] * xk;
  }
}

void BandCholesky::backward_solve_in_place(double* x) const {
  const int ld = bw_ + 1;
  const double* l = l_.data();
  for (int k = n_ - 1; k >= 0; --k) {
    const double* colk = l + static_cast<std::size_t>(k) * ld;
    double s = x[k];
    const int rmax = std::min(bw_, n_ - 1 - k);
    for (int r = 1; r <= rmax; ++r) s -= colk[r] * x[k + r];
    x[k] = s / colk[0];
  }
}

void BandCholesky::solve_in_place(double* x) const {
  forward_solve_in_place(x);
  backward_solve_in_place(x);
}

void BandCholesky::solve_in_place(Eigen::Ref<Eigen::VectorXd> x) const {
  solve_in_place(x.data());
}

void BandCholesky::solve_block_in_place(double* b, int nrhs) const {
  const int ld = bw_ + 1;
  const double* l = l_.data();
  // Column-oriented sweeps; the inner loops run over the nrhs contiguous
  // values of a row, which auto-vectorizes.
  for (int k = 0; k < n_; ++k) {
    const double* colk = l + static_cast<std::size_t>(k) * ld;
    double* rowk = b + static_cast<std::size_t>(k) * nrhs;
    const double inv = 1.0 / colk[0];
    for (int c = 0; c < nrhs; ++c) rowk[c] *= inv;
    const int rmax = std::min(bw_, n_ - 1 - k);
    for (int r = 1; r <= rmax; ++r) {
      const double lrk = colk[r];
      double* rowkr = b + static_cast<std::size_t>(k + r) * nrhs;
      for (int c = 0; c < nrhs; ++c) rowkr[c] -= lrk * rowk[c];
    }
  }
  for (int k = n_ - 1; k >= 0; --k) {
    const double* colk = l + static_cast<std::size_t>(k) * ld;
    double* rowk = b + static_cast<std::size_t>(k) * nrhs;
    const int rmax = std::min(bw_, n_ - 1 - k);
    for (int r = 1; r <= rmax; ++r) {
      const double lrk = colk[r];
      const double* rowkr = b + static_cast<std::size_t>(k + r) * nrhs;
      for (int c = 0; c < nrhs; ++c) rowk[c] -= lrk * rowkr[c];
    }
    const double inv = 1.0 / colk[0];
    for (int c = 0; c < nrhs; ++c) rowk[c] *= inv;
  }
}

}  // namespace trajgp
