/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_BANDED_HPP_
#define TRAJGP_BANDED_HPP_

#include <Eigen/Dense>
#include <vector>

namespace trajgp {

// Symmetric matrix with lower bandwidth bw, lower-triangle band storage:
//   data[j * (bw + 1) + r] = M(j + r, j),  0 <= r <= bw,  j + r < n.
// Column-contiguous layout keeps the Cholesky update loops unit-stride.
class SymBandMatrix {
 public:
  SymBandMatrix(int n, int bw);

  int size() const { return n_; }
  int bandwidth() const { return bw_; }

  // Entry M(j + r, j); r is the row offset below the diagonal.
  double& at(int j, int r) { return data_[static_cast<std::size_t>(j) * (bw_ + 1) + r]; }
  double at(int j, int r) const { return data_[static_cast<std::size_t>(j) * (bw_ + 1) + r]; }

  void set_zero();
  void add_to_diagonal(double v);

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  Eigen::MatrixXd dense() const;  // full symmetric matrix (diagnostics/tests)

  std::vector<double> release() && { return std::move(data_); }

 private:
  int n_;
  int bw_;
  std::vector<double> data_;
};

// Cholesky factorization M = L L^T of a positive definite SymBandMatrix,
// computed in place in O(n bw^2); L inherits the band layout. Solves are
// O(n bw) per right-hand side. Throws numeric_error (with the pivot index)
// if a non-positive pivot is met.
class BandCholesky {
 public:
  BandCholesky() = default;  // empty; only assignable / movable in this state
  explicit BandCholesky(SymBandMatrix m);  // steals m's storage, factors in place

  bool empty() const { return n_ == 0; }
  int size() const { return n_; }
  int bandwidth() const { return bw_; }
  double log_det() const { return log_det_; }  // log det M = 2 sum log L_jj

  // Solve M x = b in place.
  void solve_in_place(double* x) const;
  void solve_in_place(Eigen::Ref<Eigen::VectorXd> x) const;

  // Solve M X = B for nrhs right-hand sides stored row-major (row i holds
  // B(i, 0..nrhs-1) contiguously), so the recurrences vectorize across
  // right-hand sides.
  void solve_block_in_place(double* b, int nrhs) const;

  // Forward / transposed triangular solves, for sampling N(0, M^{-1}) via
  // L^T z = eps and for staged computations.
  void forward_solve_in_place(double* x) const;   // L x = b
  void backward_solve_in_place(double* x) const;  // L^T x = b

  const double* factor_data() const { return l_.data(); }

 private:
  int n_ = 0;
  int bw_ = 0;
  std::vector<double> l_;
  double log_det_ = 0.0;
};

}  // namespace trajgp

#endif  // TRAJGP_BANDED_HPP_
