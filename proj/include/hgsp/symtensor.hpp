#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "hgsp/errors.hpp"

namespace hgsp {

using Signal = Eigen::VectorXd;

namespace detail {

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Number of distinct permutations of a multiset given by its element counts.
inline double multinomial(const std::vector<int>& counts) {
  int total = std::accumulate(counts.begin(), counts.end(), 0);
  double r = factorial(total);
  for (int c : counts) r /= factorial(c);
  return r;
}

}  // namespace detail

/// Dense tensor with uniform dimension per mode. Exists only for oracles,
/// n-mode sampling tests and the small sampled-hypergraph tensors; guarded
/// by an explicit scalar-count cap so accidental blowups are impossible.
class DenseTensor {
public:
  static constexpr std::int64_t kDefaultSizeCap = 10'000'000;

  DenseTensor(std::vector<int> dims, std::int64_t size_cap = kDefaultSizeCap)
      : dims_(std::move(dims)) {
    std::int64_t n = 1;
    for (int d : dims_) {
      if (d < 1) throw ValidationError("DenseTensor: dimension must be >= 1");
      n *= d;
      if (n > size_cap)
        throw ValidationError("DenseTensor: size cap exceeded (" +
                              std::to_string(n) + " > " +
                              std::to_string(size_cap) + " scalars)");
    }
    data_.assign(static_cast<std::size_t>(n), 0.0);
  }

  int order() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

  // Row-major: last index varies fastest.
  std::int64_t offset(const std::vector<int>& idx) const {
    std::int64_t off = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) off = off * dims_[k] + idx[k];
    return off;
  }

  double& at(const std::vector<int>& idx) { return data_[offset(idx)]; }
  double at(const std::vector<int>& idx) const { return data_[offset(idx)]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  /// Iterate over all index tuples, calling fn(idx, value).
  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::vector<int> idx(dims_.size(), 0);
    for (std::size_t flat = 0; flat < data_.size(); ++flat) {
      fn(idx, data_[flat]);
      for (int k = static_cast<int>(dims_.size()) - 1; k >= 0; --k) {
        if (++idx[k] < dims_[k]) break;
        idx[k] = 0;
      }
    }
  }

  /// Full contraction with a vector on all modes but the first:
  /// out_i = sum_{j1..j_{P-1}} t[i,j1,..] s_{j1} ... s_{j_{P-1}}.
  Signal contract_vector(const Signal& s) const {
    for (std::size_t k = 1; k < dims_.size(); ++k)
      if (dims_[k] != s.size())
        throw ValidationError("DenseTensor contraction: mode dim " +
                              std::to_string(dims_[k]) + " vs signal length " +
                              std::to_string(s.size()));
    Signal out = Signal::Zero(dims_[0]);
    for_each([&](const std::vector<int>& idx, double v) {
      if (v == 0.0) return;
      double p = v;
      for (std::size_t k = 1; k < idx.size(); ++k) p *= s[idx[k]];
      out[idx[0]] += p;
    });
    return out;
  }

private:
  std::vector<int> dims_;
  std::vector<double> data_;
};

/// Super-symmetric sparse tensor in canonical (sorted-index) storage.
/// Keys are non-decreasing 0-based index tuples of length `order`; the
/// logical entry at any permutation of a stored tuple equals the stored
/// value. Exact zeros are never stored.
class SymTensor {
public:
  using Key = std::vector<int>;

  SymTensor(int order, int dim) : order_(order), dim_(dim) {
    if (order < 2) throw ValidationError("SymTensor: order must be >= 2");
    if (dim < 1) throw ValidationError("SymTensor: dim must be >= 1");
  }

  int order() const { return order_; }
  int dim() const { return dim_; }
  const std::map<Key, double>& entries() const { return entries_; }

  static Key canonical(Key idx) {
    std::sort(idx.begin(), idx.end());
    return idx;
  }

  /// Logical lookup at any index permutation.
  double get(const Key& idx) const {
    auto it = entries_.find(canonical(idx));
    return it == entries_.end() ? 0.0 : it->second;
  }

  /// Set the logical entry (and all its permutations) to v.
  void set(const Key& idx, double v) {
    check_key(idx);
    Key k = canonical(idx);
    if (v == 0.0)
      entries_.erase(k);
    else
      entries_[k] = v;
  }

  void add(const Key& idx, double v) { set(idx, get(idx) + v); }

  /// Number of distinct permutations of a canonical tuple.
  static double permutation_count(const Key& key) {
    std::vector<int> counts;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i == 0 || key[i] != key[i - 1])
        counts.push_back(1);
      else
        ++counts.back();
    }
    return detail::multinomial(counts);
  }

  /// Frobenius norm over all N^M logical entries, computed from the
  /// canonical entries and their permutation multiplicities.
  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& [key, v] : entries_) s += permutation_count(key) * v * v;
    return std::sqrt(s);
  }

  /// Shift of the original signal by the representing tensor:
  /// out_i = sum_{j1..j_{M-1}} t_{i j1 .. j_{M-1}} s_{j1} ... s_{j_{M-1}}.
  ///
  /// For each canonical tuple the distinct permutations are grouped by which
  /// index occupies the first slot; each group contributes the multinomial
  /// count of the remaining positions times the product of the remaining
  /// signal values. s^[M-1] is never materialized.
  Signal contract_vector(const Signal& s) const {
    if (s.size() != dim_)
      throw ValidationError("contract_vector: tensor dim " +
                            std::to_string(dim_) + " vs signal length " +
                            std::to_string(s.size()));
    Signal out = Signal::Zero(dim_);
    std::vector<int> rest_counts;
    rest_counts.reserve(order_);
    for (const auto& [key, v] : entries_) {
      // Walk distinct elements of the sorted tuple.
      std::size_t i = 0;
      while (i < key.size()) {
        std::size_t j = i;
        while (j < key.size() && key[j] == key[i]) ++j;
        int lead = key[i];
        // Remaining M-1 positions after removing one copy of `lead`:
        // multiplicity list and the product of their signal values.
        rest_counts.clear();
        double prod = 1.0;
        int prev = -1;
        bool skipped = false;
        for (std::size_t a = 0; a < key.size(); ++a) {
          if (a == i && !skipped) {  // remove exactly one copy of lead
            skipped = true;
            continue;
          }
          prod *= s[key[a]];
          if (key[a] != prev) {
            rest_counts.push_back(1);
            prev = key[a];
          } else {
            ++rest_counts.back();
          }
        }
        double count = detail::multinomial(rest_counts);
        out[lead] += v * count * prod;
        i = j;
      }
    }
    return out;
  }

  /// Dense expansion (oracle use only; respects the size cap).
  DenseTensor to_dense(std::int64_t size_cap = DenseTensor::kDefaultSizeCap) const {
    DenseTensor d(std::vector<int>(order_, dim_), size_cap);
    for (const auto& [key, v] : entries_) {
      Key perm = key;
      do {
        d.at(perm) = v;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return d;
  }

private:
  void check_key(const Key& idx) const {
    if (static_cast<int>(idx.size()) != order_)
      throw ValidationError("SymTensor: index tuple length " +
                            std::to_string(idx.size()) + " vs order " +
                            std::to_string(order_));
    for (int i : idx)
      if (i < 0 || i >= dim_)
        throw ValidationError("SymTensor: index " + std::to_string(i) +
                              " out of range [0, " + std::to_string(dim_) + ")");
  }

  int order_;
  int dim_;
  std::map<Key, double> entries_;
};

/// n-mode product: replaces the mode-n dimension I_n of a dense tensor by Q
/// through the matrix u in R^{Q x I_n}. `mode` is 0-based.
inline DenseTensor n_mode_product(const DenseTensor& t, int mode,
                                  const Eigen::MatrixXd& u) {
  if (mode < 0 || mode >= t.order())
    throw ValidationError("n_mode_product: mode " + std::to_string(mode + 1) +
                          " out of range for order " + std::to_string(t.order()));
  if (u.cols() != t.dims()[mode])
    throw ValidationError("n_mode_product: matrix columns " +
                          std::to_string(u.cols()) + " vs mode-" +
                          std::to_string(mode + 1) + " dimension " +
                          std::to_string(t.dims()[mode]));
  std::vector<int> odims = t.dims();
  odims[mode] = static_cast<int>(u.rows());
  DenseTensor out(odims);
  std::vector<int> oidx;
  t.for_each([&](const std::vector<int>& idx, double v) {
    if (v == 0.0) return;
    oidx = idx;
    for (int j = 0; j < u.rows(); ++j) {
      oidx[mode] = j;
      out.at(oidx) += u(j, idx[mode]) * v;
    }
  });
  return out;
}

/// `times`-fold outer power of a vector: entry (i1..ik) = s_{i1} ... s_{ik}.
inline DenseTensor outer_power(const Signal& s, int times,
                               std::int64_t size_cap = DenseTensor::kDefaultSizeCap) {
  if (times < 1) throw ValidationError("outer_power: times must be >= 1");
  DenseTensor out(std::vector<int>(times, static_cast<int>(s.size())), size_cap);
  std::vector<int> idx(times, 0);
  for (std::int64_t flat = 0; flat < out.size(); ++flat) {
    double p = 1.0;
    for (int k = 0; k < times; ++k) p *= s[idx[k]];
    out.data()[flat] = p;
    for (int k = times - 1; k >= 0; --k) {
      if (++idx[k] < s.size()) break;
      idx[k] = 0;
    }
  }
  return out;
}

/// Elementwise power v_i^times.
inline Eigen::VectorXd hadamard_power(const Eigen::VectorXd& v, int times) {
  if (times < 1) throw ValidationError("hadamard_power: times must be >= 1");
  Eigen::VectorXd out = v;
  for (int k = 1; k < times; ++k) out = out.cwiseProduct(v);
  return out;
}

}  // namespace hgsp
