#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here stays independent of the implementation paths it is used to check:
// dense-enumeration contractions go through DenseTensor built by outer_power
// or to_dense, never through SymTensor::contract_vector.

#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "hgsp/hypergraph.hpp"
#include "hgsp/spectrum.hpp"
#include "hgsp/symtensor.hpp"

namespace support {

using hgsp::DenseTensor;
using hgsp::Hypergraph;
using hgsp::Signal;
using hgsp::SymTensor;

/// 3-uniform hypergraph of the worked example: edges {1,4,6},{2,3,7},{5,6,7}.
inline Hypergraph fig7a() {
  return Hypergraph(7, {{0, 3, 5}, {1, 2, 6}, {4, 5, 6}});
}

/// General hypergraph variant: edges {1,4,6},{2,3},{5,6,7}, mce 3.
inline Hypergraph fig7b() {
  return Hypergraph(7, {{0, 3, 5}, {1, 2}, {4, 5, 6}});
}

/// Dense full-enumeration shift oracle:
/// out_i = sum over all N^{M-1} index tuples of t[i,j..] prod s_j.
inline Signal dense_contract_oracle(const SymTensor& t, const Signal& s) {
  return t.to_dense().contract_vector(s);
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Signal random_signal(int n, std::mt19937_64& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  Signal s(n);
  for (int i = 0; i < n; ++i) s[i] = d(g);
  return s;
}

/// Haar-ish random orthonormal matrix via QR of a Gaussian matrix.
inline Eigen::MatrixXd random_orthonormal(int n, std::mt19937_64& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = d(g);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix signs so the factorization is unique-ish (diag of R positive).
  Eigen::MatrixXd r = q.transpose() * a;
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

/// Exactly odeco symmetric tensor sum_r lambda_r f_r^{oM} with rows of
/// `basis` as f_r (only the first `lambda.size()` rows used).
inline SymTensor odeco_tensor(const Eigen::MatrixXd& basis,
                              const Eigen::VectorXd& lambda, int order) {
  const int n = static_cast<int>(basis.cols());
  SymTensor t(order, n);
  std::vector<int> idx(order, 0);
  // iterate canonical (non-decreasing) tuples
  while (true) {
    double v = 0.0;
    for (int r = 0; r < lambda.size(); ++r) {
      double p = lambda[r];
      for (int m = 0; m < order; ++m) p *= basis(r, idx[m]);
      v += p;
    }
    if (v != 0.0) t.set(idx, v);
    int m = order - 1;
    while (m >= 0) {
      if (++idx[m] < n) {
        for (int a = m + 1; a < order; ++a) idx[a] = idx[m];
        break;
      }
      --m;
    }
    if (m < 0) break;
  }
  return t;
}

/// Random hypergraph: each candidate edge of size in [2, max_card] included
/// with probability p; regenerates until at least one edge exists.
inline Hypergraph random_hypergraph(int n, int max_card, double p,
                                    std::mt19937_64& g) {
  max_card = std::min(max_card, n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    std::set<std::vector<int>> edges;
    std::vector<int> sel;
    auto rec = [&](auto&& self, int start, int need) -> void {
      if (need == 0) {
        if (u(g) < p) edges.insert(sel);
        return;
      }
      for (int v = start; v <= n - need; ++v) {
        sel.push_back(v);
        self(self, v + 1, need - 1);
        sel.pop_back();
      }
    };
    for (int card = 2; card <= max_card; ++card) rec(rec, 0, card);
    if (edges.empty()) continue;
    int mce = 0;
    for (const auto& e : edges) mce = std::max<int>(mce, e.size());
    if (mce != max_card) continue;  // keep the intended tensor order
    return Hypergraph(n, std::vector<std::vector<int>>(edges.begin(), edges.end()));
  }
}

/// Adjusted Rand index between two partitions.
inline double adjusted_rand_index(const std::vector<int>& a,
                                  const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  const int ka = *std::max_element(a.begin(), a.end()) + 1;
  const int kb = *std::max_element(b.begin(), b.end()) + 1;
  Eigen::MatrixXd cont = Eigen::MatrixXd::Zero(ka, kb);
  for (int i = 0; i < n; ++i) cont(a[i], b[i]) += 1;
  auto choose2 = [](double x) { return x * (x - 1) / 2.0; };
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < ka; ++i) sum_a += choose2(cont.row(i).sum());
  for (int j = 0; j < kb; ++j) sum_b += choose2(cont.col(j).sum());
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) sum_ij += choose2(cont(i, j));
  const double expected = sum_a * sum_b / choose2(n);
  const double maxidx = (sum_a + sum_b) / 2.0;
  if (maxidx == expected) return 1.0;
  return (sum_ij - expected) / (maxidx - expected);
}

/// Planted two-block 3-uniform hypergraph: triples inside a block with
/// probability p_in, triples spanning blocks with p_cross. Returns the graph
/// and the planted block labels (0/1).
inline std::pair<Hypergraph, std::vector<int>> planted_two_block(
    int n, double p_in, double p_cross, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> truth(n);
  for (int i = 0; i < n; ++i) truth[i] = i < n / 2 ? 0 : 1;
  while (true) {
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int l = j + 1; l < n; ++l) {
          const bool within = truth[i] == truth[j] && truth[j] == truth[l];
          if (u(g) < (within ? p_in : p_cross)) edges.push_back({i, j, l});
        }
    bool covered = true;
    std::vector<bool> seen(n, false);
    for (const auto& e : edges)
      for (int v : e) seen[v] = true;
    for (bool s : seen) covered = covered && s;
    if (!edges.empty() && covered) return {Hypergraph(n, edges), truth};
  }
}

}  // namespace support
