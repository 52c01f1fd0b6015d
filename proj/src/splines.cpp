/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/splines.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "trajgp/errors.hpp"

namespace trajgp {

BSplineBasis::BSplineBasis(double lo, double hi, int degree, int n_basis)
    : lo_(lo), hi_(hi), degree_(degree), n_basis_(n_basis) {
  if (!(hi > lo)) throw config_error("BSplineBasis: need hi > lo");
  if (degree < 0 || degree > 30) throw config_error("BSplineBasis: unsupported degree");
  if (n_basis < degree + 1) {
    throw config_error("BSplineBasis: need at least degree+1 basis functions");
  }
  // Open uniform knot vector: degree+1 copies of each boundary plus
  // n_basis - degree - 1 equispaced interior knots.
  const int n_interior = n_basis - degree - 1;
  knots_.reserve(n_basis + degree + 1);
  for (int i = 0; i <= degree; ++i) knots_.push_back(lo);
  for (int i = 1; i <= n_interior; ++i) {
    knots_.push_back(lo + (hi - lo) * i / (n_interior + 1));
  }
  for (int i = 0; i <= degree; ++i) knots_.push_back(hi);
}

int BSplineBasis::eval_local(double x, double* vals) const {
  if (!(x >= lo_) || !(x <= hi_)) {
    throw std::domain_error("BSplineBasis: point " + std::to_string(x) +
                            " outside [" + std::to_string(lo_) + ", " +
                            std::to_string(hi_) + "]");
  }
  // Find the knot span k with t_k <= x < t_{k+1}; x == hi falls in the last
  // non-empty span so the basis stays right-continuous up to the boundary.
  int k;
  if (x >= knots_[n_basis_]) {
    k = n_basis_ - 1;
  } else {
    k = static_cast<int>(std::upper_bound(knots_.begin() + degree_,
                                          knots_.begin() + n_basis_ + 1, x) -
                         knots_.begin()) - 1;
  }
  // Cox - de Boor triangle for the degree+1 functions alive on span k.
  double left[32], right[32];
  vals[0] = 1.0;
  for (int j = 1; j <= degree_; ++j) {
    left[j] = x - knots_[k + 1 - j];
    right[j] = knots_[k + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double tmp = vals[r] / (right[r + 1] + left[j - r]);
      vals[r] = saved + right[r + 1] * tmp;
      saved = left[j - r] * tmp;
    }
    vals[j] = saved;
  }
  return k - degree_;
}

void BSplineBasis::eval(double x, double* out) const {
  std::memset(out, 0, sizeof(double) * n_basis_);
  double vals[32];
  const int first = eval_local(x, vals);
  for (int j = 0; j <= degree_; ++j) out[first + j] = vals[j];
}

Eigen::VectorXd BSplineBasis::eval(double x) const {
  Eigen::VectorXd out(n_basis_);
  eval(x, out.data());
  return out;
}

TensorBasis::TensorBasis(BSplineBasis bx, BSplineBasis by)
    : bx_(std::move(bx)), by_(std::move(by)) {}

void TensorBasis::eval(double x, double y, double* out) const {
  std::memset(out, 0, sizeof(double) * size());
  double vx[32], vy[32];
  const int fx = bx_.eval_local(x, vx);
  const int fy = by_.eval_local(y, vy);
  const int jy_n = by_.size();
  for (int ix = 0; ix <= bx_.degree(); ++ix) {
    double* row = out + static_cast<std::size_t>(fx + ix) * jy_n + fy;
    for (int iy = 0; iy <= by_.degree(); ++iy) row[iy] = vx[ix] * vy[iy];
  }
}

Eigen::VectorXd TensorBasis::eval(double x, double y) const {
  Eigen::VectorXd out(size());
  eval(x, y, out.data());
  return out;
}

Eigen::MatrixXd build_penalty(PenaltyKind kind, int size_x, int size_y) {
  if (size_x < 1 || size_y < 1) throw config_error("build_penalty: empty grid");
  const int J = size_x * size_y;
  if (kind == PenaltyKind::kRidge) {
    return Eigen::MatrixXd::Identity(J, J);
  }
  // Graph Laplacian of the size_x x size_y grid with rook adjacency:
  // diag = #neighbors, off-diag = -1 for adjacent coefficient pairs. Penalizes
  // squared first differences along both grid directions; one zero eigenvalue
  // (the constant), so rank J - 1.
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(J, J);
  auto idx = [size_y](int jx, int jy) { return jx * size_y + jy; };
  for (int jx = 0; jx < size_x; ++jx) {
    for (int jy = 0; jy < size_y; ++jy) {
      const int i = idx(jx, jy);
      if (jx + 1 < size_x) {
        const int j = idx(jx + 1, jy);
        p(i, i) += 1.0;
        p(j, j) += 1.0;
        p(i, j) -= 1.0;
        p(j, i) -= 1.0;
      }
      if (jy + 1 < size_y) {
        const int j = idx(jx, jy + 1);
        p(i, i) += 1.0;
        p(j, j) += 1.0;
        p(i, j) -= 1.0;
        p(j, i) -= 1.0;
      }
    }
  }
  return p;
}

int penalty_rank(PenaltyKind kind, int size_x, int size_y) {
  const int J = size_x * size_y;
  return kind == PenaltyKind::kRidge ? J : J - 1;
}

}  // namespace trajgp
