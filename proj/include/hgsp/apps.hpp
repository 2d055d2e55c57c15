#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hgsp/errors.hpp"
#include "hgsp/filters.hpp"
#include "hgsp/hypergraph.hpp"
#include "hgsp/spectrum.hpp"

namespace hgsp {

// ---------------------------------------------------------------------------
// Spectrum compression
// ---------------------------------------------------------------------------

struct CompressedSignal {
  int bandwidth = 0;       // K retained coefficients
  int original_dim = 0;    // N
  bool lossless = false;
  double mse = 0.0;        // mean squared reconstruction error
  Eigen::VectorXd coeffs;  // s~_[K]

  double compression_ratio() const {
    return bandwidth == 0 ? std::numeric_limits<double>::infinity()
                          : static_cast<double>(original_dim) / bandwidth;
  }
};

struct CompressMode {
  bool lossless = true;
  double epsilon = 0.0;  // energy mode: smallest K capturing (1-eps) of energy

  static CompressMode lossless_mode() { return {true, 0.0}; }
  static CompressMode energy_mode(double eps) {
    if (eps < 0.0 || eps >= 1.0)
      throw ValidationError("compress: epsilon must be in [0, 1)");
    return {false, eps};
  }
};

inline CompressedSignal compress(const Spectrum& sp, const Signal& s,
                                 const CompressMode& mode = {},
                                 double tol = 1e-9) {
  Eigen::VectorXd st = original_to_freq(sp, s);
  const int n = sp.dim();
  int k;
  if (mode.lossless) {
    k = bandwidth(sp, s, tol);
  } else {
    const double total = st.squaredNorm();
    const double target = (1.0 - mode.epsilon) * total;
    double acc = 0.0;
    k = 0;
    while (k < n && (total > 0.0 && acc < target)) {
      acc += st[k] * st[k];
      ++k;
    }
  }
  CompressedSignal c;
  c.bandwidth = k;
  c.original_dim = n;
  c.lossless = mode.lossless;
  c.coeffs = st.head(k);
  c.mse = st.tail(n - k).squaredNorm() / n;
  return c;
}

inline Signal decompress(const CompressedSignal& c, const Spectrum& sp) {
  if (c.original_dim != sp.dim())
    throw ValidationError("decompress: compressed dim " +
                          std::to_string(c.original_dim) + " vs spectrum dim " +
                          std::to_string(sp.dim()));
  if (c.bandwidth > sp.dim())
    throw ValidationError("decompress: bandwidth exceeds spectrum dim");
  return sp.basis().topRows(c.bandwidth).transpose() * c.coeffs;
}

// ---------------------------------------------------------------------------
// Spectral clustering (Fourier basis embedding + k-means)
// ---------------------------------------------------------------------------

struct ClusterResult {
  std::vector<int> assignments;  // cluster ids in [1..k]
  double intra_variance = 0.0;   // mean squared distance to assigned centroid
  double silhouette = 0.0;       // mean silhouette over embedding rows
};

struct ClusterOptions {
  std::uint64_t seed = 0;
  int restarts = 50;
  int max_iter = 300;
  double shift_tol = 1e-6;  // relative centroid-shift stop
};

namespace detail {

struct KMeansRun {
  std::vector<int> labels;  // 0-based
  Eigen::MatrixXd centroids;
  double wcss = 0.0;
};

inline KMeansRun kmeans_once(const Eigen::MatrixXd& x, int k,
                             std::mt19937_64& rng, int max_iter,
                             double shift_tol) {
  const int n = static_cast<int>(x.rows());
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // k-means++ seeding
  Eigen::MatrixXd cent(k, x.cols());
  std::uniform_int_distribution<int> pick(0, n - 1);
  cent.row(0) = x.row(pick(rng));
  Eigen::VectorXd d2 = (x.rowwise() - cent.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    int chosen = 0;
    if (total > 0.0) {
      double target = unif(rng) * total, acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    cent.row(c) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - cent.row(c)).rowwise().squaredNorm());
  }

  KMeansRun run;
  run.labels.assign(n, 0);
  for (int it = 0; it < max_iter; ++it) {
    // assign
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      int bc = 0;
      for (int c = 0; c < k; ++c) {
        const double d = (x.row(i) - cent.row(c)).squaredNorm();
        if (d < best) {
          best = d;
          bc = c;
        }
      }
      run.labels[i] = bc;
    }
    // update
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, x.cols());
    Eigen::VectorXi count = Eigen::VectorXi::Zero(k);
    for (int i = 0; i < n; ++i) {
      next.row(run.labels[i]) += x.row(i);
      ++count[run.labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0)
        next.row(c) /= count[c];
      else
        next.row(c) = cent.row(c);  // keep empty centroid in place
    }
    const double shift = (next - cent).norm();
    const double scale = std::max(1e-30, cent.norm());
    cent = next;
    if (shift / scale < shift_tol) break;
  }
  run.centroids = cent;
  run.wcss = 0.0;
  for (int i = 0; i < n; ++i)
    run.wcss += (x.row(i) - cent.row(run.labels[i])).squaredNorm();
  return run;
}

inline double mean_silhouette(const Eigen::MatrixXd& x,
                              const std::vector<int>& labels, int k) {
  const int n = static_cast<int>(x.rows());
  if (k <= 1) return 0.0;
  std::vector<int> size(k, 0);
  for (int l : labels) ++size[l];
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> dist(k, 0.0);
    for (int j = 0; j < n; ++j)
      if (j != i) dist[labels[j]] += (x.row(i) - x.row(j)).norm();
    const int li = labels[i];
    if (size[li] <= 1) continue;  // singleton: silhouette 0 by convention
    const double a = dist[li] / (size[li] - 1);
    double b = std::numeric_limits<double>::max();
    for (int c = 0; c < k; ++c)
      if (c != li && size[c] > 0) b = std::min(b, dist[c] / size[c]);
    if (b == std::numeric_limits<double>::max()) continue;
    total += (b - a) / std::max(a, b);
  }
  return total / n;
}

}  // namespace detail

/// HGSP Fourier spectral clustering: embed nodes as rows of the matrix of
/// leading nonzero-coefficient basis vectors, then k-means (k-means++ init,
/// best of `restarts` by within-cluster sum of squares).
inline ClusterResult spectral_cluster(const Spectrum& sp, int k,
                                      const ClusterOptions& opts = {}) {
  const int n = sp.dim();
  if (k < 1 || k > n)
    throw ValidationError("spectral_cluster: k = " + std::to_string(k) +
                          " out of range [1, " + std::to_string(n) + "]");
  const double thresh = 1e-9 * std::abs(sp.coeffs()[0]);
  int nonzero = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(sp.coeffs()[i]) > thresh) ++nonzero;
  if (nonzero == 0)
    throw ValidationError("spectral_cluster: all spectrum coefficients are zero");

  // Embedding uses the leading nonzero-coefficient basis vectors, capped at k
  // columns: with the full orthonormal basis every pair of rows would be
  // equidistant and carry no cluster structure.
  const int e = std::min(k, nonzero);
  Eigen::MatrixXd s(n, e);  // columns are the leading basis vectors
  int col = 0;
  for (int i = 0; i < n && col < e; ++i)
    if (std::abs(sp.coeffs()[i]) > thresh) s.col(col++) = sp.basis().row(i).transpose();

  std::mt19937_64 rng(opts.seed);
  detail::KMeansRun best;
  best.wcss = std::numeric_limits<double>::max();
  for (int r = 0; r < opts.restarts; ++r) {
    auto run = detail::kmeans_once(s, k, rng, opts.max_iter, opts.shift_tol);
    if (run.wcss < best.wcss) best = std::move(run);
  }

  ClusterResult res;
  res.assignments.resize(n);
  for (int i = 0; i < n; ++i) res.assignments[i] = best.labels[i] + 1;
  res.intra_variance = best.wcss / n;
  res.silhouette = detail::mean_silhouette(s, best.labels, k);
  return res;
}

// ---------------------------------------------------------------------------
// LP-HGSP classification
// ---------------------------------------------------------------------------

/// Partial +/-1 labeling: label[i] in {-1, 0, +1}, 0 meaning unlabeled.
using PartialLabels = Eigen::VectorXd;

/// Trained propagation filter: expanded polynomial in the normalized
/// supporting matrix P_s = P / lambda_1 (an equivalent reparametrization of
/// the product filter's expansion in P, kept normalized for conditioning).
struct ClassifierModel {
  int degree = 0;
  Eigen::VectorXd beta;  // degree+1 coefficients for P_s^0 .. P_s^degree
  double ridge = 0.0;
  Spectrum spectrum;
};

namespace detail {

/// Columns j = 0..degree of P_s^j s, via the spectral form.
inline Eigen::MatrixXd propagation_powers(const Spectrum& sp, const Signal& s,
                                          int degree) {
  const double l1 = sp.coeffs()[0];
  if (l1 <= 0.0)
    throw ValidationError("lp_hgsp: lambda_1 <= 0, supporting matrix undefined");
  Eigen::VectorXd st = sp.basis() * s;
  Eigen::MatrixXd cols(sp.dim(), degree + 1);
  Eigen::VectorXd cur = st;
  cols.col(0) = sp.basis().transpose() * cur;
  for (int j = 1; j <= degree; ++j) {
    cur = cur.cwiseProduct(sp.coeffs() / l1);
    cols.col(j) = sp.basis().transpose() * cur;
  }
  return cols;
}

}  // namespace detail

inline ClassifierModel lp_hgsp_train(const Spectrum& sp,
                                     const PartialLabels& labels, int degree,
                                     double ridge = 1e-3) {
  if (degree < 1) throw ValidationError("lp_hgsp_train: degree must be >= 1");
  if (labels.size() != sp.dim())
    throw ValidationError("lp_hgsp_train: label length " +
                          std::to_string(labels.size()) + " vs dim " +
                          std::to_string(sp.dim()));
  int npos = 0, nneg = 0;
  for (int i = 0; i < labels.size(); ++i) {
    if (labels[i] > 0) ++npos;
    if (labels[i] < 0) ++nneg;
  }
  if (npos == 0 || nneg == 0)
    throw ValidationError("lp_hgsp_train: need at least one label of each sign");

  Eigen::MatrixXd cols = detail::propagation_powers(sp, labels, degree);
  const int ntrain = npos + nneg;
  Eigen::MatrixXd x(ntrain, degree + 1);
  Eigen::VectorXd y(ntrain);
  int row = 0;
  for (int i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0.0) continue;
    x.row(row) = cols.row(i);
    y[row] = labels[i] > 0 ? 1.0 : -1.0;
    ++row;
  }

  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("lp_hgsp_train: singular normal equations");
  Eigen::VectorXd beta = ldlt.solve(x.transpose() * y);
  if (!beta.allFinite())
    throw NumericalError("lp_hgsp_train: non-finite filter coefficients");

  return ClassifierModel{degree, std::move(beta), ridge, sp};
}

/// Applies the trained filter to the labeling (unlabeled entries zeroed) and
/// returns the full +/-1 labeling by sign; a zero score maps to +1.
inline Eigen::VectorXd lp_hgsp_classify(const ClassifierModel& model,
                                        const PartialLabels& labels) {
  if (labels.size() != model.spectrum.dim())
    throw ValidationError("lp_hgsp_classify: label length " +
                          std::to_string(labels.size()) + " vs dim " +
                          std::to_string(model.spectrum.dim()));
  Eigen::MatrixXd cols =
      detail::propagation_powers(model.spectrum, labels, model.degree);
  Eigen::VectorXd score = cols * model.beta;
  Eigen::VectorXd out(labels.size());
  for (int i = 0; i < labels.size(); ++i) out[i] = score[i] < 0 ? -1.0 : 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Denoising pipeline
// ---------------------------------------------------------------------------

struct DenoiseResult {
  Signal signal;
  double gamma = 0.0;
  std::vector<std::pair<double, double>> curve;  // (gamma, score)
};

/// Decomposes the hypergraph once and sweeps the closed-form denoising
/// filter over the gamma grid. With a reference signal the score is the MSE
/// against it; otherwise the quadratic-TV objective of the filter itself.
inline DenoiseResult denoise_pipeline(const Hypergraph& h, const Signal& y,
                                      const std::vector<double>& gamma_grid,
                                      const std::optional<Signal>& reference =
                                          std::nullopt,
                                      const DecomposeOptions& opts = {}) {
  if (gamma_grid.empty())
    throw ValidationError("denoise_pipeline: gamma grid is empty");
  Spectrum sp = decompose(adjacency_tensor(h), opts);

  Eigen::MatrixXd proj_defect;  // (I - P_s) for the objective score
  if (!reference) {
    proj_defect = Eigen::MatrixXd::Identity(sp.dim(), sp.dim()) -
                  supporting_matrix(sp, /*normalized=*/true);
  }

  DenoiseResult res;
  double best = std::numeric_limits<double>::max();
  for (double gamma : gamma_grid) {
    Signal s = denoise(sp, y, gamma);
    double score;
    if (reference) {
      score = (s - *reference).squaredNorm() / sp.dim();
    } else {
      score = (s - y).squaredNorm() + gamma * (proj_defect * s).squaredNorm();
    }
    res.curve.emplace_back(gamma, score);
    if (score < best) {
      best = score;
      res.signal = s;
      res.gamma = gamma;
    }
  }
  return res;
}

}  // namespace hgsp
