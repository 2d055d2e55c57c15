#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hgsp/errors.hpp"
#include "hgsp/symtensor.hpp"

namespace hgsp {

/// Hypergraph: N nodes plus a list of hyperedges (node-id sets of
/// cardinality >= 2). Node ids are 0-based internally; file formats and
/// documentation use 1-based ids.
class Hypergraph {
public:
  Hypergraph(int num_nodes, std::vector<std::vector<int>> hyperedges)
      : num_nodes_(num_nodes) {
    if (num_nodes < 1) throw ValidationError("Hypergraph: num_nodes must be >= 1");
    std::set<std::vector<int>> seen;
    for (auto& e : hyperedges) {
      std::sort(e.begin(), e.end());
      if (e.size() < 2)
        throw ValidationError("Hypergraph: hyperedge must contain at least 2 nodes");
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] < 0 || e[i] >= num_nodes)
          throw ValidationError("Hypergraph: node id " + std::to_string(e[i] + 1) +
                                " out of range [1, " + std::to_string(num_nodes) + "]");
        if (i > 0 && e[i] == e[i - 1])
          throw ValidationError("Hypergraph: duplicate node " +
                                std::to_string(e[i] + 1) + " within a hyperedge");
      }
      if (!seen.insert(e).second)
        throw ValidationError("Hypergraph: duplicate hyperedge");
      edges_.push_back(std::move(e));
    }
    mce_ = 2;
    for (const auto& e : edges_)
      mce_ = std::max(mce_, static_cast<int>(e.size()));
  }

  int num_nodes() const { return num_nodes_; }
  /// m.c.e.: maximum cardinality over hyperedges (2 for an empty edge list).
  int mce() const { return mce_; }
  const std::vector<std::vector<int>>& hyperedges() const { return edges_; }

private:
  int num_nodes_;
  int mce_ = 2;
  std::vector<std::vector<int>> edges_;
};

namespace detail {

/// Number of surjective placements of M tensor positions onto c edge nodes:
/// sum over compositions k1..kc >= 1, sum ki = M of M!/(k1!..kc!).
/// Inclusion-exclusion, exact in integer arithmetic (M small).
inline std::int64_t surjection_count(int c, int M) {
  std::int64_t total = 0;
  std::int64_t binom = 1;  // C(c, j)
  for (int j = 0; j <= c; ++j) {
    std::int64_t pw = 1;
    for (int t = 0; t < M; ++t) pw *= (c - j);
    total += (j % 2 == 0 ? 1 : -1) * binom * pw;
    binom = binom * (c - j) / (j + 1);
  }
  return total;
}

/// Hyperedge weight of Eq-form w(e) = c * (surjection count)^{-1}.
inline double edge_weight(int cardinality, int order) {
  return static_cast<double>(cardinality) /
         static_cast<double>(surjection_count(cardinality, order));
}

/// Enumerate all sorted multisets of size M over the sorted node set `nodes`
/// that use every node at least once.
template <typename Fn>
void covering_multisets(const std::vector<int>& nodes, int M, Fn&& fn) {
  const int c = static_cast<int>(nodes.size());
  const int extra = M - c;  // duplicate copies to distribute
  std::vector<int> add(c, 0);
  std::vector<int> key;
  auto rec = [&](auto&& self, int slot, int left) -> void {
    if (slot == c - 1) {
      add[slot] = left;
      key.clear();
      for (int i = 0; i < c; ++i)
        for (int r = 0; r < 1 + add[i]; ++r) key.push_back(nodes[i]);
      fn(key);
      return;
    }
    for (int take = 0; take <= left; ++take) {
      add[slot] = take;
      self(self, slot + 1, left - take);
    }
  };
  rec(rec, 0, extra);
}

}  // namespace detail

/// Adjacency tensor per the generalized-hyperedge construction: each
/// hyperedge e of cardinality c contributes every sorted size-M multiset
/// covering its node set, all with the cardinality-dependent weight.
inline SymTensor adjacency_tensor(const Hypergraph& h) {
  const int M = h.mce();
  SymTensor a(M, h.num_nodes());
  for (const auto& e : h.hyperedges()) {
    const double w = detail::edge_weight(static_cast<int>(e.size()), M);
    detail::covering_multisets(e, M, [&](const std::vector<int>& key) {
      a.set(key, w);
    });
  }
  return a;
}

/// Tensor-sum degree d_i = sum_{j1..j_{M-1}} a_{i j1 .. j_{M-1}}.
/// Equals the number of hyperedges containing node i by construction of the
/// edge weights.
inline Eigen::VectorXd degree_vector(const SymTensor& a) {
  // Integer permutation multiplicities are accumulated per (node, entry
  // value) and multiplied once at the end: the per-edge totals then collapse
  // to exact integers instead of a sum of rounded partial products.
  std::map<std::pair<int, double>, long long> acc;
  for (const auto& [key, v] : a.entries()) {
    std::size_t i = 0;
    while (i < key.size()) {
      std::size_t j = i;
      while (j < key.size() && key[j] == key[i]) ++j;
      // permutations of the remaining M-1 slots after removing one copy
      std::vector<int> rest;
      int prev = -1;
      bool skipped = false;
      for (std::size_t a2 = 0; a2 < key.size(); ++a2) {
        if (a2 == i && !skipped) {
          skipped = true;
          continue;
        }
        if (key[a2] != prev) {
          rest.push_back(1);
          prev = key[a2];
        } else {
          ++rest.back();
        }
      }
      acc[{key[i], v}] += detail::multinomial(rest);
      i = j;
    }
  }
  Eigen::VectorXd d = Eigen::VectorXd::Zero(a.dim());
  for (const auto& [node_value, count] : acc)
    d[node_value.first] += node_value.second * static_cast<double>(count);
  return d;
}

/// Laplacian tensor L = D - A with super-diagonal D of node degrees.
inline SymTensor laplacian_tensor(const Hypergraph& h) {
  SymTensor a = adjacency_tensor(h);
  Eigen::VectorXd d = degree_vector(a);
  SymTensor l(a.order(), a.dim());
  for (const auto& [key, v] : a.entries()) l.set(key, -v);
  for (int i = 0; i < a.dim(); ++i) {
    std::vector<int> diag(a.order(), i);
    l.add(diag, d[i]);
  }
  return l;
}

/// Builds one hyperedge per node from its m-1 nearest neighbors (euclidean),
/// ties broken by lower node index; identical node sets are deduplicated.
inline Hypergraph build_knn_hypergraph(const Eigen::MatrixXd& features, int m) {
  const int n = static_cast<int>(features.rows());
  if (m < 2) throw ValidationError("build_knn_hypergraph: m must be >= 2");
  if (m > n)
    throw ValidationError("build_knn_hypergraph: m = " + std::to_string(m) +
                          " exceeds number of points " + std::to_string(n));
  std::vector<std::vector<int>> edges;
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> dist;
    dist.reserve(n - 1);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back((features.row(i) - features.row(j)).squaredNorm(), j);
    }
    std::sort(dist.begin(), dist.end());  // ties fall to lower index
    std::vector<int> e{i};
    for (int t = 0; t < m - 1; ++t) e.push_back(dist[t].second);
    std::sort(e.begin(), e.end());
    edges.push_back(std::move(e));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Hypergraph(n, std::move(edges));
}

}  // namespace hgsp
