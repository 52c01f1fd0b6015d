/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#include "trajgp/vecchia.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dense_small.hpp"
#include "trajgp/errors.hpp"

namespace trajgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

}  // namespace

NeighborIndex NeighborIndex::build(int n, int m) {
  if (n < 1) throw config_error("NeighborIndex: need at least one point");
  if (m < 1) throw config_error("NeighborIndex: neighbor count must be >= 1");
  return NeighborIndex{n, m};
}

std::vector<int> NeighborIndex::neighbors(int i) const {
  std::vector<int> out;
  out.reserve(window_size(i));
  for (int k = window_start(i); k < i; ++k) out.push_back(k);
  return out;
}

double VecchiaFactor::log_det() const {
  double s = 0.0;
  for (double di : d) s += std::log(di);
  return s;
}

double VecchiaFactor::quadform(const double* w) const {
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    const int s0 = window_start(i);
    const int ws = i - s0;
    double e = w[i];
    const double* a = coef.data() + static_cast<std::size_t>(i) * m;
    for (int r = 0; r < ws; ++r) e -= a[r] * w[s0 + r];
    q += e * e / d[i];
  }
  return q;
}

void VecchiaFactor::apply_whitening(const double* w, double* out) const {
  for (int i = 0; i < n; ++i) {
    const int s0 = window_start(i);
    const int ws = i - s0;
    double e = w[i];
    const double* a = coef.data() + static_cast<std::size_t>(i) * m;
    for (int r = 0; r < ws; ++r) e -= a[r] * w[s0 + r];
    out[i] = e;
  }
}

void build_factors_into(VecchiaFactor& f, const Eigen::VectorXd& times,
                        const KernelParams& kp, int m, FactorWorkspace& ws) {
  const int n = static_cast<int>(times.size());
  if (n < 1) throw data_error("build_factors: empty time vector");
  if (m < 1) throw config_error("build_factors: neighbor count must be >= 1");
  f.n = n;
  f.m = m;
  f.coef.assign(static_cast<std::size_t>(n) * m, 0.0);
  f.d.assign(n, 0.0);

  for (int i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) {
      throw data_error("build_factors: times not strictly increasing at index " +
                       std::to_string(i));
    }
  }

  const int ld = m + 1;
  ws.gaps.resize(n);
  ws.corr.resize(static_cast<std::size_t>(ld) * ld);
  ws.cross.resize(ld);
  ws.sol.resize(ld);
  gap_decay_factors(times.data(), n, kp.phi, ws.gaps.data());

  double* R = ws.corr.data();
  double* c = ws.cross.data();
  double* a = ws.sol.data();

  f.d[0] = kp.sigma2;
  for (int i = 1; i < n; ++i) {
    const int s0 = f.window_start(i);
    const int w = i - s0;
    // Correlations among times s0..i from running gap products; lower
    // triangle of the (w+1) x (w+1) block, point i in the last row.
    corr_from_gaps(ws.gaps.data() + s0, w + 1, R, ld);
    for (int r = 0; r < w; ++r) c[r] = R[static_cast<std::size_t>(w) * ld + r];

    detail::dense_chol_lower(R, w, ld, i);
    for (int r = 0; r < w; ++r) a[r] = c[r];
    detail::dense_chol_solve(R, w, ld, a);

    double expl = 0.0;
    for (int r = 0; r < w; ++r) expl += c[r] * a[r];
    const double di = kp.sigma2 * (1.0 - expl);
    if (!(di > 0.0) || !std::isfinite(di)) {
      throw numeric_error("build_factors: non-positive conditional variance at index " +
                          std::to_string(i));
    }
    f.d[i] = di;
    double* row = f.coef.data() + static_cast<std::size_t>(i) * m;
    for (int r = 0; r < w; ++r) row[r] = a[r];
  }
  if (!(f.d[0] > 0.0) || !std::isfinite(f.d[0])) {
    throw numeric_error("build_factors: non-positive marginal variance");
  }
}

VecchiaFactor build_factors(const Eigen::VectorXd& times, const KernelParams& kp,
                            int m) {
  VecchiaFactor f;
  FactorWorkspace ws;
  build_factors_into(f, times, kp, m, ws);
  return f;
}

BandCholesky build_omega(const VecchiaFactor& f, double tau2) {
  if (!(tau2 > 0.0)) throw numeric_error("build_omega: tau2 must be positive");
  SymBandMatrix omega(f.n, f.m);
  const int m = f.m;
  double cl[1 + 64];  // local row coefficients of (I - A); m is small
  std::vector<double> clv;
  double* c = cl;
  if (m + 1 > 65) {
    clv.resize(m + 1);
    c = clv.data();
  }
  for (int k = 0; k < f.n; ++k) {
    const int s0 = f.window_start(k);
    const int w = k - s0;
    const double* a = f.coef.data() + static_cast<std::size_t>(k) * m;
    for (int r = 0; r < w; ++r) c[r] = -a[r];
    c[w] = 1.0;
    const double inv_d = 1.0 / f.d[k];
    // Scatter (row_k)^T d_k^{-1} (row_k) into the band; support is the
    // contiguous index range [s0, k].
    for (int i1 = 0; i1 <= w; ++i1) {
      const double ci1_d = c[i1] * inv_d;
      double* col = &omega.at(s0 + i1, 0);
      for (int i2 = i1; i2 <= w; ++i2) {
        col[i2 - i1] += c[i2] * ci1_d;
      }
    }
  }
  omega.add_to_diagonal(1.0 / tau2);
  return BandCholesky(std::move(omega));
}

double collapsed_loglik(const std::vector<IndividualBlock>& blocks,
                        const Eigen::VectorXd& psi, const KernelParams& kp,
                        const NoiseParams& np, int m,
                        std::vector<BlockState>* states) {
  if (!(kp.sigma2 > 0.0) || !(kp.phi > 0.0) || !(np.tau2 > 0.0) ||
      !std::isfinite(kp.sigma2) || !std::isfinite(kp.phi) || !std::isfinite(np.tau2)) {
    return -std::numeric_limits<double>::infinity();
  }
  if (states) states->resize(blocks.size());
  const double tau2 = np.tau2;
  const double inv_t2 = 1.0 / tau2;
  const double inv_t4 = inv_t2 * inv_t2;
  double ll = 0.0;
  FactorWorkspace ws;
  BlockState local;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const IndividualBlock& blk = blocks[b];
    BlockState& st = states ? (*states)[b] : local;
    build_factors_into(st.factor, blk.times, kp, m, ws);
    st.sum_log_d = st.factor.log_det();
    st.omega = build_omega(st.factor, tau2);

    Eigen::VectorXd r = blk.y;
    if (blk.X.cols() > 0) r.noalias() -= blk.X * psi;
    st.v = r;
    st.omega.solve_in_place(st.v);

    const double n_k = static_cast<double>(blk.y.size());
    const double q2 = r.dot(r) * inv_t2 - r.dot(st.v) * inv_t4;
    const double log_q1 = n_k * std::log(tau2) + st.sum_log_d + st.omega.log_det();
    ll -= 0.5 * (n_k * kLog2Pi + log_q1 + q2);
  }
  return ll;
}

}  // namespace trajgp
