#pragma once

#include <vector>

#include <Eigen/Dense>

#include "hgsp/errors.hpp"
#include "hgsp/spectrum.hpp"
#include "hgsp/symtensor.hpp"

namespace hgsp {

/// Bandlimited sampling plan: sampled index sequence q (0-based), recovery
/// matrix Z with Z U F_[K]^T = I_K and interpolation matrix T = F_[K]^T Z.
struct SamplingPlan {
  std::vector<int> q;
  int bandwidth = 0;  // K
  Eigen::MatrixXd z;  // K x Q
  Eigen::MatrixXd t;  // N x Q
  int dim = 0;        // N

  int num_samples() const { return static_cast<int>(q.size()); }

  /// The 0/1 selector U in R^{Q x N} with U_{ij} = [j == q_i].
  Eigen::MatrixXd selector() const {
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(q.size(), dim);
    for (std::size_t i = 0; i < q.size(); ++i) u(static_cast<int>(i), q[i]) = 1.0;
    return u;
  }
};

/// Chooses Q sample nodes by column-pivoted QR of F_[K] (greedy max-volume
/// heuristic), then Z as the pseudo-inverse of U F_[K]^T (exact inverse when
/// Q = K).
inline SamplingPlan build_plan(const Spectrum& sp, int k, int q_count) {
  const int n = sp.dim();
  if (k < 1 || k > n)
    throw ValidationError("build_plan: bandwidth K = " + std::to_string(k) +
                          " out of range [1, " + std::to_string(n) + "]");
  if (q_count < k || q_count > n)
    throw ValidationError("build_plan: sample count Q = " + std::to_string(q_count) +
                          " out of range [K, N] = [" + std::to_string(k) + ", " +
                          std::to_string(n) + "]");

  Eigen::MatrixXd fk = sp.basis().topRows(k);  // K x N
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(fk);
  const auto& perm = qr.colsPermutation().indices();

  SamplingPlan plan;
  plan.bandwidth = k;
  plan.dim = n;
  plan.q.reserve(q_count);
  for (int i = 0; i < q_count; ++i) plan.q.push_back(perm[i]);

  Eigen::MatrixXd b(q_count, k);  // U F_[K]^T
  for (int i = 0; i < q_count; ++i) b.row(i) = fk.col(plan.q[i]).transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()[0];
  const double smin = svd.singularValues()[svd.singularValues().size() - 1];
  if (smin <= 0.0 || smax / smin > 1e12)
    throw NumericalError("build_plan: U F_[K]^T is numerically singular "
                          "(condition number above 1e12)");
  Eigen::VectorXd sinv = svd.singularValues().cwiseInverse();
  plan.z = svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();  // K x Q
  plan.t = fk.transpose() * plan.z;                                        // N x Q
  return plan;
}

/// s_Q = U s: entries of s at the sampled indices, in order.
inline Eigen::VectorXd sample(const SamplingPlan& plan, const Signal& s) {
  if (s.size() != plan.dim)
    throw ValidationError("sample: signal length " + std::to_string(s.size()) +
                          " vs plan dim " + std::to_string(plan.dim));
  Eigen::VectorXd sq(plan.num_samples());
  for (int i = 0; i < plan.num_samples(); ++i) sq[i] = s[plan.q[i]];
  return sq;
}

/// s' = T s_Q; exact recovery for K-bandlimited sources.
inline Signal interpolate(const SamplingPlan& plan, const Eigen::VectorXd& sq) {
  if (sq.size() != plan.num_samples())
    throw ValidationError("interpolate: sample length " + std::to_string(sq.size()) +
                          " vs plan Q " + std::to_string(plan.num_samples()));
  return plan.t * sq;
}

/// The sampled hypergraph F_K = sum_i lambda_i (U f_i) o z_i o ... o z_i
/// (order M, dimension K, dense). Requires a minimal plan (Q = K).
///
/// The first mode carries the sampled rows of the original basis rather than
/// another copy of z_i: Z is the analysis operator of the sampled domain and
/// U F_[K]^T = Z^{-1} its synthesis operator, so only this mixed form makes
/// the one-shift on F_K agree with the sampled one-shift of the source. The
/// fully symmetric z_i^{oM} form coincides with it exactly when Z is
/// orthogonal (e.g. the identity-basis case).
inline DenseTensor sampled_hypergraph(const SamplingPlan& plan, const Spectrum& sp) {
  const int k = plan.bandwidth;
  if (plan.num_samples() != k)
    throw ValidationError("sampled_hypergraph: requires Q = K, got Q = " +
                          std::to_string(plan.num_samples()) + ", K = " +
                          std::to_string(k));
  const int order = sp.order();
  DenseTensor fk(std::vector<int>(order, k));
  std::vector<int> idx(order, 0);
  for (std::int64_t flat = 0; flat < fk.size(); ++flat) {
    double v = 0.0;
    for (int i = 0; i < k; ++i) {
      double p = sp.coeffs()[i] * sp.basis()(i, plan.q[idx[0]]);
      for (int m = 1; m < order; ++m) p *= plan.z(i, idx[m]);
      v += p;
    }
    fk.data()[flat] = v;
    for (int m = order - 1; m >= 0; --m) {
      if (++idx[m] < k) break;
      idx[m] = 0;
    }
  }
  return fk;
}

}  // namespace hgsp
