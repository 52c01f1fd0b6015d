/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_SPLINES_HPP_
#define TRAJGP_SPLINES_HPP_

#include <Eigen/Dense>
#include <vector>

namespace trajgp {

// Clamped (open uniform) B-spline basis on [lo, hi]: n_basis functions of the
// given degree, knots with degree+1 repeats at each boundary and
// n_basis - degree - 1 equispaced interior knots. Partition of unity on the
// whole interval; at most degree+1 functions are nonzero at any point.
class BSplineBasis {
 public:
  BSplineBasis(double lo, double hi, int degree, int n_basis);

  int size() const { return n_basis_; }
  int degree() const { return degree_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<double>& knots() const { return knots_; }

  // All n_basis values at x (zero outside the local support). Throws
  // std::domain_error for x outside [lo, hi].
  void eval(double x, double* out) const;
  Eigen::VectorXd eval(double x) const;

  // Sparse evaluation: writes the degree+1 (possibly) nonzero values into
  // vals and returns the index of the first one.
  int eval_local(double x, double* vals) const;

 private:
  double lo_, hi_;
  int degree_, n_basis_;
  std::vector<double> knots_;
};

// Tensor-product surface basis over [lo_x, hi_x] x [lo_y, hi_y]; basis
// function (jx, jy) maps to flat index jx * size_y() + jy (row-major in jx).
class TensorBasis {
 public:
  TensorBasis(BSplineBasis bx, BSplineBasis by);

  int size() const { return bx_.size() * by_.size(); }
  int size_x() const { return bx_.size(); }
  int size_y() const { return by_.size(); }
  int flat_index(int jx, int jy) const { return jx * by_.size() + jy; }
  const BSplineBasis& basis_x() const { return bx_; }
  const BSplineBasis& basis_y() const { return by_; }

  void eval(double x, double y, double* out) const;  // all size() values
  Eigen::VectorXd eval(double x, double y) const;

 private:
  BSplineBasis bx_, by_;
};

// Smoothness prior precision on tensor-product coefficients.
enum class PenaltyKind {
  kRidge,       // identity: independent shrinkage, full rank
  kRandomWalk,  // first-order random-walk graph Laplacian on the
                // size_x x size_y coefficient grid (4-neighbor), rank J - 1
};

Eigen::MatrixXd build_penalty(PenaltyKind kind, int size_x, int size_y);
int penalty_rank(PenaltyKind kind, int size_x, int size_y);

}  // namespace trajgp

#endif  // TRAJGP_SPLINES_HPP_
