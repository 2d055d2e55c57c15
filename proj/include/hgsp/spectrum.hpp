#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hgsp/errors.hpp"
#include "hgsp/symtensor.hpp"

namespace hgsp {

struct DecomposeOptions {
  double tol = 1e-8;       // E-eigenpair residual bound and stop threshold
  int max_iter = 2000;     // power-iteration cap per restart
  std::uint64_t seed = 0;  // restart RNG seed
  int restarts = 20;       // random restarts per extracted component
};

/// Hypergraph Fourier space: orthonormal basis rows f_1..f_N with
/// coefficients lambda sorted non-increasing. Coefficients beyond the
/// decomposition rank are zero; the matching rows come from an orthonormal
/// completion. Immutable after construction.
class Spectrum {
public:
  Spectrum(Eigen::MatrixXd basis, Eigen::VectorXd coeffs, int rank, int order,
           double residual)
      : basis_(std::move(basis)),
        coeffs_(std::move(coeffs)),
        rank_(rank),
        order_(order),
        residual_(residual) {}

  /// Rows are f_1^T .. f_N^T (the matrix V with V V^T = I).
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int rank() const { return rank_; }
  int order() const { return order_; }
  int dim() const { return static_cast<int>(coeffs_.size()); }
  double residual() const { return residual_; }

private:
  Eigen::MatrixXd basis_;
  Eigen::VectorXd coeffs_;
  int rank_;
  int order_;
  double residual_;
};

namespace detail {

/// Shift of the deflated tensor: F x^[M-1] minus the accepted rank-one terms.
inline Eigen::VectorXd contract_deflated(const SymTensor& t,
                                         const Eigen::MatrixXd& accepted,
                                         const Eigen::VectorXd& lambdas,
                                         int naccepted, const Eigen::VectorXd& x) {
  Eigen::VectorXd y = t.contract_vector(x);
  const int m1 = t.order() - 1;
  for (int r = 0; r < naccepted; ++r) {
    const double ip = accepted.row(r).dot(x);
    y -= lambdas[r] * std::pow(ip, m1) * accepted.row(r).transpose();
  }
  return y;
}

/// Two-slot contraction B_ij = sum_{k3..kM} T_{i j k3..kM} x_{k3} .. x_{kM}:
/// the tensor applied to x in all but two modes. B is symmetric; the Hessian
/// of x -> T x^M is M (M-1) B.
inline Eigen::MatrixXd contract_matrix(const SymTensor& t,
                                       const Eigen::VectorXd& x) {
  const int n = t.dim();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [key, v] : t.entries()) {
    // distinct values with multiplicities
    std::vector<int> val, cnt;
    for (int k : key) {
      if (val.empty() || val.back() != k) {
        val.push_back(k);
        cnt.push_back(1);
      } else {
        ++cnt.back();
      }
    }
    const int d = static_cast<int>(val.size());
    for (int a = 0; a < d; ++a) {
      for (int c = 0; c < d; ++c) {
        if (a == c && cnt[a] < 2) continue;
        // remove one copy each of val[a], val[c]; the remaining copies are
        // distributed over the free modes in every order
        std::vector<int> rest;
        double prod = 1.0;
        for (int e = 0; e < d; ++e) {
          int m = cnt[e] - (e == a) - (e == c);
          if (m > 0) {
            rest.push_back(m);
            prod *= std::pow(x[val[e]], m);
          }
        }
        b(val[a], val[c]) += v * multinomial(rest) * prod;
      }
    }
  }
  return b;
}

inline void project_out(Eigen::VectorXd& x, const Eigen::MatrixXd& accepted,
                        int naccepted) {
  for (int r = 0; r < naccepted; ++r)
    x -= accepted.row(r).dot(x) * accepted.row(r).transpose();
}

}  // namespace detail

Spectrum complete_basis(const Spectrum& partial,
                        const std::optional<Signal>& s_hint = std::nullopt);

/// Greedy orthogonal-CP decomposition of a super-symmetric tensor by
/// deflated shifted symmetric higher-order power iteration. Iterates are
/// re-orthogonalized against accepted basis vectors every step, so the
/// returned basis is orthonormal by construction. M = 2 delegates to a dense
/// symmetric eigendecomposition sorted by eigenvalue descending.
inline Spectrum decompose(const SymTensor& t, const DecomposeOptions& opts = {}) {
  const int n = t.dim();
  const int order = t.order();

  if (order == 2) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [key, v] : t.entries()) {
      a(key[0], key[1]) = v;
      a(key[1], key[0]) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success)
      throw NumericalError("decompose: dense eigendecomposition failed");
    Eigen::MatrixXd basis(n, n);
    Eigen::VectorXd lam(n);
    for (int i = 0; i < n; ++i) {  // descending order
      lam[i] = es.eigenvalues()[n - 1 - i];
      basis.row(i) = es.eigenvectors().col(n - 1 - i).transpose();
    }
    return Spectrum(std::move(basis), std::move(lam), n, order, 0.0);
  }

  const int m1 = order - 1;
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd accepted = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd lambdas = Eigen::VectorXd::Zero(n);
  int rank = 0;

  // Squared Frobenius norm of the deflated remainder, maintained
  // incrementally (the accepted vectors are orthonormal, so cross terms
  // reduce to lambda_r^2).
  double defl2 = t.frobenius_norm();
  defl2 *= defl2;

  while (rank < n) {
    // Convexity shift proportional to the remainder: the Hessian of
    // x -> F x^M on the sphere is bounded by M (M-1) ||F||_F, and keeping
    // alpha at the remainder's scale keeps the linear convergence rate
    // 1 - O(lambda/alpha) useful even for small trailing coefficients.
    const double alpha =
        1e-9 + order * m1 * std::sqrt(std::max(0.0, defl2));
    bool have_best = false;
    double best_lambda = 0.0, best_res = 0.0;
    Eigen::VectorXd best_x;

    // For even order a negative coefficient cannot be absorbed into the
    // vector sign, so the minimizing direction is searched as well.
    const int ndirs = (order % 2 == 0) ? 2 : 1;

    for (int restart = 0; restart < opts.restarts; ++restart) {
      for (int d = 0; d < ndirs; ++d) {
        const double dir = (d == 0) ? 1.0 : -1.0;
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = gauss(rng);
        detail::project_out(x, accepted, rank);
        if (x.norm() < 1e-12) continue;
        x.normalize();

        // Fixed points live in the complement of the accepted rows, so the
        // eigenpair equation is checked within that subspace. The residual is
        // the acceptance gate: iteration stops once it passes tolerance or
        // the iterate stops moving.
        double lam = 0.0, res = std::numeric_limits<double>::max();
        bool dead = false;
        for (int it = 0; it < opts.max_iter; ++it) {
          Eigen::VectorXd fx =
              detail::contract_deflated(t, accepted, lambdas, rank, x);
          detail::project_out(fx, accepted, rank);
          lam = x.dot(fx);
          res = (fx - lam * x).norm();
          if (res <= 1e-3 * opts.tol) break;  // polished well past the gate
          Eigen::VectorXd y = dir * fx + alpha * x;
          const double ny = y.norm();
          if (ny < 1e-300) {
            dead = true;
            break;
          }
          y /= ny;
          const double delta = (y - x).norm();
          x = y;
          if (delta < 1e-15) break;
        }
        // Newton polish on the projected eigenpair equation: its quadratic
        // local convergence rescues iterates the linear power method leaves
        // short of tolerance when the trailing coefficients are small
        // relative to the non-decomposable remainder.
        if (!dead && res > 1e-3 * opts.tol) {
          const Eigen::MatrixXd pc =
              Eigen::MatrixXd::Identity(n, n) -
              accepted.topRows(rank).transpose() * accepted.topRows(rank);
          for (int step = 0; step < 25; ++step) {
            // Deflation terms carry a (f_r . x)^{m-2} factor, zero for x in
            // the complement, so the Jacobian only needs the raw tensor.
            Eigen::MatrixXd jx =
                pc * (m1 * detail::contract_matrix(t, x)) * pc - lam * pc +
                (Eigen::MatrixXd::Identity(n, n) - pc);
            Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(n + 1, n + 1);
            sys.topLeftCorner(n, n) = jx;
            sys.topRightCorner(n, 1) = -x;
            sys.bottomLeftCorner(1, n) = x.transpose();
            Eigen::VectorXd g =
                detail::contract_deflated(t, accepted, lambdas, rank, x);
            detail::project_out(g, accepted, rank);
            g -= lam * x;
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
            rhs.head(n) = -g;
            Eigen::VectorXd d = sys.fullPivLu().solve(rhs);
            if (!d.allFinite()) break;
            Eigen::VectorXd xn = x + d.head(n);
            detail::project_out(xn, accepted, rank);
            const double nx = xn.norm();
            if (nx < 1e-300) break;
            xn /= nx;
            Eigen::VectorXd fxn =
                detail::contract_deflated(t, accepted, lambdas, rank, xn);
            detail::project_out(fxn, accepted, rank);
            const double lamn = xn.dot(fxn);
            const double resn = (fxn - lamn * xn).norm();
            if (resn >= res) break;  // not improving; keep the better iterate
            x = xn;
            lam = lamn;
            res = resn;
            if (res <= 1e-3 * opts.tol) break;
          }
        }

        if (dead || res > opts.tol) continue;
        if (!have_best || std::abs(lam) > std::abs(best_lambda) + 1e-15 ||
            (std::abs(std::abs(lam) - std::abs(best_lambda)) <= 1e-15 &&
             res < best_res)) {
          have_best = true;
          best_lambda = lam;
          best_res = res;
          best_x = x;
        }
      }
    }

    if (!have_best)
      throw NumericalError(
          "decompose: power iteration failed to converge after " +
          std::to_string(opts.restarts) + " restarts (extracted " +
          std::to_string(rank) + " of " + std::to_string(n) + " components)");
    if (std::abs(best_lambda) < opts.tol) break;  // residual coefficient spent

    if (order % 2 == 1 && best_lambda < 0.0) {
      // (lambda, f) and (-lambda, -f) represent the same rank-one term.
      best_lambda = -best_lambda;
      best_x = -best_x;
    }
    defl2 += best_lambda * best_lambda -
             2.0 * best_lambda * best_x.dot(t.contract_vector(best_x));
    accepted.row(rank) = best_x.transpose();
    lambdas[rank] = best_lambda;
    ++rank;
  }

  // Sort extracted pairs by coefficient descending; extraction order breaks ties.
  std::vector<int> perm(rank);
  for (int i = 0; i < rank; ++i) perm[i] = i;
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return lambdas[a] > lambdas[b]; });
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < rank; ++i) {
    basis.row(i) = accepted.row(perm[i]);
    lam[i] = lambdas[perm[i]];
  }

  // Frobenius norm of T - sum_r lambda_r f_r^{oM}.
  double res2 = t.frobenius_norm();
  res2 *= res2;
  for (int r = 0; r < rank; ++r) {
    Eigen::VectorXd fr = basis.row(r).transpose();
    res2 -= 2.0 * lam[r] * fr.dot(t.contract_vector(fr));
    for (int q = 0; q < rank; ++q)
      res2 += lam[r] * lam[q] *
              std::pow(basis.row(r).dot(basis.row(q)), order);
  }
  const double residual = std::sqrt(std::max(0.0, res2));

  Spectrum partial(std::move(basis), std::move(lam), rank, order, residual);
  return rank < n ? complete_basis(partial) : partial;
}

/// Fills rows rank+1..N with an orthonormal completion (zero coefficients).
/// When a hint signal is given, its projection onto the complement becomes
/// the first completed vector, so the hint's energy concentrates on at most
/// one completed component.
inline Spectrum complete_basis(const Spectrum& partial,
                               const std::optional<Signal>& s_hint) {
  const int n = partial.dim();
  const int r = partial.rank();
  if (r >= n) return partial;

  Eigen::MatrixXd basis = partial.basis();
  // Orthonormal basis of the complement of the accepted rows.
  Eigen::MatrixXd bt = basis.topRows(r).transpose();  // N x R
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(bt);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd comp = q.rightCols(n - r);  // N x (N-R)

  std::vector<Eigen::VectorXd> fill;
  fill.reserve(n - r);
  if (s_hint) {
    if (s_hint->size() != n)
      throw ValidationError("complete_basis: hint length " +
                            std::to_string(s_hint->size()) + " vs dim " +
                            std::to_string(n));
    Eigen::VectorXd hc = comp * (comp.transpose() * (*s_hint));
    if (hc.norm() > 1e-12) fill.push_back(hc.normalized());
  }
  for (int c = 0; c < comp.cols() && static_cast<int>(fill.size()) < n - r; ++c) {
    Eigen::VectorXd v = comp.col(c);
    for (const auto& f : fill) v -= f.dot(v) * f;
    if (v.norm() > 1e-8) fill.push_back(v.normalized());
  }
  if (static_cast<int>(fill.size()) != n - r)
    throw NumericalError("complete_basis: failed to complete orthonormal basis");
  for (int i = 0; i < n - r; ++i) basis.row(r + i) = fill[i].transpose();

  return Spectrum(std::move(basis), partial.coeffs(), r, partial.order(),
                  partial.residual());
}

/// Original signal in the Fourier space: s-tilde = V s.
inline Eigen::VectorXd original_to_freq(const Spectrum& sp, const Signal& s) {
  if (s.size() != sp.dim())
    throw ValidationError("original_to_freq: signal length " +
                          std::to_string(s.size()) + " vs dim " +
                          std::to_string(sp.dim()));
  return sp.basis() * s;
}

inline Signal freq_to_original(const Spectrum& sp, const Eigen::VectorXd& st) {
  if (st.size() != sp.dim())
    throw ValidationError("freq_to_original: vector length " +
                          std::to_string(st.size()) + " vs dim " +
                          std::to_string(sp.dim()));
  return sp.basis().transpose() * st;
}

/// HGFT: s-hat_i = (f_i^T s)^{M-1}, evaluated on the original signal.
inline Eigen::VectorXd hgft(const Spectrum& sp, const Signal& s) {
  return hadamard_power(original_to_freq(sp, s), sp.order() - 1);
}

/// Inverse HGFT: recovers one representative of the preimage via the signed
/// (M-1)-th root. For even M-1 negative spectrum entries have no real
/// preimage and are rejected.
inline Signal ihgft(const Spectrum& sp, const Eigen::VectorXd& shat) {
  if (shat.size() != sp.dim())
    throw ValidationError("ihgft: vector length " + std::to_string(shat.size()) +
                          " vs dim " + std::to_string(sp.dim()));
  const int m1 = sp.order() - 1;
  Eigen::VectorXd st(shat.size());
  const double neg_tol = 1e-12 * std::max(1.0, shat.cwiseAbs().maxCoeff());
  for (int i = 0; i < shat.size(); ++i) {
    const double v = shat[i];
    if (m1 % 2 == 0) {
      if (v < -neg_tol)
        throw ValidationError("ihgft: negative entry " + std::to_string(v) +
                              " at component " + std::to_string(i + 1) +
                              " with even M-1");
      st[i] = std::pow(std::max(0.0, v), 1.0 / m1);
    } else {
      st[i] = (v < 0 ? -1.0 : 1.0) * std::pow(std::abs(v), 1.0 / m1);
    }
  }
  return freq_to_original(sp, st);
}

/// Total variation of a signal over the hypergraph: the l1 deviation between
/// the signal and its shift by the lambda_max-normalized tensor, taken
/// relative to ||s||_1 so that unit frequency components reproduce
/// |1 - lambda_r/lambda_max| exactly.
inline double total_variation_signal(const SymTensor& t, double lambda_max,
                                     const Signal& s) {
  if (lambda_max == 0.0)
    throw ValidationError("total_variation_signal: lambda_max is zero (degenerate spectrum)");
  const double sn = s.lpNorm<1>();
  if (sn == 0.0) return 0.0;
  Eigen::VectorXd diff = s - t.contract_vector(s) / lambda_max;
  return diff.lpNorm<1>() / sn;
}

/// TV of the r-th frequency component: |1 - lambda_r / lambda_1|. 1-based r.
inline double total_variation_component(const Spectrum& sp, int r) {
  if (r < 1 || r > sp.dim())
    throw ValidationError("total_variation_component: component " +
                          std::to_string(r) + " out of range [1, " +
                          std::to_string(sp.dim()) + "]");
  const double l1 = sp.coeffs()[0];
  if (l1 <= 0.0)
    throw ValidationError("total_variation_component: lambda_1 <= 0");
  return std::abs(1.0 - sp.coeffs()[r - 1] / l1);
}

/// Supporting matrix P = V^T diag(lambda) V (P_s = P / lambda_1 when
/// normalized). Carries the full spectrum as a matrix shift operator.
inline Eigen::MatrixXd supporting_matrix(const Spectrum& sp, bool normalized = false) {
  Eigen::VectorXd lam = sp.coeffs();
  if (normalized) {
    if (lam[0] <= 0.0)
      throw ValidationError("supporting_matrix: lambda_1 <= 0, cannot normalize");
    lam /= lam[0];
  }
  return sp.basis().transpose() * lam.asDiagonal() * sp.basis();
}

/// Bandwidth K: index of the last spectral coefficient above tol * ||s~||_inf
/// (0 for the zero signal). The boundary W = lambda_K is exposed by callers
/// via coeffs().
inline int bandwidth(const Spectrum& sp, const Signal& s, double tol = 1e-9) {
  if (tol < 0.0) throw ValidationError("bandwidth: tol must be >= 0");
  Eigen::VectorXd st = original_to_freq(sp, s);
  const double m = st.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0;
  int k = 0;
  for (int i = 0; i < st.size(); ++i)
    if (std::abs(st[i]) > tol * m) k = i + 1;
  return k;
}

}  // namespace hgsp
