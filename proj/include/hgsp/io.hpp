#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgsp/apps.hpp"
#include "hgsp/errors.hpp"
#include "hgsp/hypergraph.hpp"
#include "hgsp/sampling.hpp"
#include "hgsp/spectrum.hpp"

// Textual, human-diffable file formats. All JSON documents carry
// format_version = 1. Node and component indices are 1-based on disk.

namespace hgsp::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

namespace detail {

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

inline void check_version(const json& j, const std::string& path) {
  if (!j.contains("format_version") || !j["format_version"].is_number_integer())
    throw ValidationError(path + ": missing format_version field");
  if (j["format_version"].get<int>() != kFormatVersion)
    throw ValidationError(path + ": unsupported format_version");
}

inline double checked_double(const json& v, const std::string& context) {
  if (!v.is_number()) throw ValidationError(context + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(context + ": non-finite value");
  return d;
}

}  // namespace detail

// --- Hypergraph -------------------------------------------------------------

inline void save_hypergraph(const std::string& path, const Hypergraph& h) {
  json edges = json::array();
  for (const auto& e : h.hyperedges()) {
    json edge = json::array();
    for (int v : e) edge.push_back(v + 1);
    edges.push_back(edge);
  }
  detail::save_json(path, json{{"format_version", kFormatVersion},
                               {"num_nodes", h.num_nodes()},
                               {"hyperedges", edges}});
}

inline Hypergraph load_hypergraph(const std::string& path) {
  json j = detail::load_json(path);
  detail::check_version(j, path);
  if (!j.contains("num_nodes") || !j["num_nodes"].is_number_integer())
    throw ValidationError(path + ": missing integer num_nodes field");
  if (!j.contains("hyperedges") || !j["hyperedges"].is_array())
    throw ValidationError(path + ": missing hyperedges list");
  std::vector<std::vector<int>> edges;
  for (const auto& edge : j["hyperedges"]) {
    if (!edge.is_array())
      throw ValidationError(path + ": hyperedge is not a list");
    std::vector<int> e;
    for (const auto& v : edge) {
      if (!v.is_number_integer())
        throw ValidationError(path + ": non-integer node id in hyperedge");
      e.push_back(v.get<int>() - 1);
    }
    edges.push_back(std::move(e));
  }
  try {
    return Hypergraph(j["num_nodes"].get<int>(), std::move(edges));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// --- Signal (plain text, one value per line) --------------------------------

inline void save_signal(const std::string& path, const Eigen::VectorXd& s) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  char buf[64];
  for (int i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", s[i]);
    out << buf << "\n";
  }
}

inline Eigen::VectorXd load_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read file: " + path);
  std::vector<double> vals;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v;
    if (!(ss >> v) || !std::isfinite(v))
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": not a finite number");
    vals.push_back(v);
  }
  Eigen::VectorXd s(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) s[i] = vals[i];
  return s;
}

// --- Spectrum ----------------------------------------------------------------

inline void save_spectrum(const std::string& path, const Spectrum& sp) {
  json lambdas = json::array();
  for (int i = 0; i < sp.dim(); ++i) lambdas.push_back(sp.coeffs()[i]);
  json basis = json::array();
  for (int i = 0; i < sp.dim(); ++i) {
    json row = json::array();
    for (int c = 0; c < sp.dim(); ++c) row.push_back(sp.basis()(i, c));
    basis.push_back(row);
  }
  detail::save_json(path, json{{"format_version", kFormatVersion},
                               {"order", sp.order()},
                               {"dim", sp.dim()},
                               {"rank", sp.rank()},
                               {"residual", sp.residual()},
                               {"lambdas", lambdas},
                               {"basis", basis}});
}

inline Spectrum load_spectrum(const std::string& path) {
  json j = detail::load_json(path);
  detail::check_version(j, path);
  for (const char* f : {"order", "dim", "rank"})
    if (!j.contains(f) || !j[f].is_number_integer())
      throw ValidationError(path + ": missing integer " + std::string(f) + " field");
  const int n = j["dim"].get<int>();
  if (!j.contains("lambdas") || !j["lambdas"].is_array() ||
      static_cast<int>(j["lambdas"].size()) != n)
    throw ValidationError(path + ": lambdas must be a length-" +
                          std::to_string(n) + " list");
  if (!j.contains("basis") || !j["basis"].is_array() ||
      static_cast<int>(j["basis"].size()) != n)
    throw ValidationError(path + ": basis must have " + std::to_string(n) + " rows");
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i)
    lam[i] = detail::checked_double(j["lambdas"][i], path + ": lambdas");
  Eigen::MatrixXd basis(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = j["basis"][i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ValidationError(path + ": basis row " + std::to_string(i + 1) +
                            " is not a length-" + std::to_string(n) + " list");
    for (int c = 0; c < n; ++c)
      basis(i, c) = detail::checked_double(row[c], path + ": basis");
  }
  return Spectrum(std::move(basis), std::move(lam), j["rank"].get<int>(),
                  j["order"].get<int>(),
                  detail::checked_double(j["residual"], path + ": residual"));
}

// --- Sampling plan -----------------------------------------------------------

inline void save_plan(const std::string& path, const SamplingPlan& plan) {
  json q = json::array();
  for (int i : plan.q) q.push_back(i + 1);
  auto mat = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
      rows.push_back(row);
    }
    return rows;
  };
  detail::save_json(path, json{{"format_version", kFormatVersion},
                               {"dim", plan.dim},
                               {"bandwidth", plan.bandwidth},
                               {"q", q},
                               {"z", mat(plan.z)},
                               {"t", mat(plan.t)}});
}

inline SamplingPlan load_plan(const std::string& path) {
  json j = detail::load_json(path);
  detail::check_version(j, path);
  SamplingPlan plan;
  plan.dim = j.at("dim").get<int>();
  plan.bandwidth = j.at("bandwidth").get<int>();
  for (const auto& v : j.at("q")) plan.q.push_back(v.get<int>() - 1);
  auto mat = [&](const json& rows, const char* name) {
    if (!rows.is_array() || rows.empty())
      throw ValidationError(path + ": bad matrix " + std::string(name));
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (int i = 0; i < m.rows(); ++i) {
      if (static_cast<int>(rows[i].size()) != m.cols())
        throw ValidationError(path + ": non-rectangular matrix " + std::string(name));
      for (int c = 0; c < m.cols(); ++c)
        m(i, c) = detail::checked_double(rows[i][c], path);
    }
    return m;
  };
  plan.z = mat(j.at("z"), "z");
  plan.t = mat(j.at("t"), "t");
  return plan;
}

// --- Compressed signal -------------------------------------------------------

inline void save_compressed(const std::string& path, const CompressedSignal& c) {
  json coeffs = json::array();
  for (int i = 0; i < c.coeffs.size(); ++i) coeffs.push_back(c.coeffs[i]);
  detail::save_json(path, json{{"format_version", kFormatVersion},
                               {"bandwidth", c.bandwidth},
                               {"original_dim", c.original_dim},
                               {"lossless", c.lossless},
                               {"mse", c.mse},
                               {"coeffs", coeffs}});
}

inline CompressedSignal load_compressed(const std::string& path) {
  json j = detail::load_json(path);
  detail::check_version(j, path);
  CompressedSignal c;
  c.bandwidth = j.at("bandwidth").get<int>();
  c.original_dim = j.at("original_dim").get<int>();
  c.lossless = j.at("lossless").get<bool>();
  c.mse = detail::checked_double(j.at("mse"), path + ": mse");
  const auto& coeffs = j.at("coeffs");
  if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != c.bandwidth)
    throw ValidationError(path + ": coeffs length must equal bandwidth");
  c.coeffs.resize(c.bandwidth);
  for (int i = 0; i < c.bandwidth; ++i)
    c.coeffs[i] = detail::checked_double(coeffs[i], path + ": coeffs");
  return c;
}

// --- Labels (text: "<node_id> <+1|-1>" per line) ------------------------------

inline PartialLabels load_labels(const std::string& path, int num_nodes) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read file: " + path);
  PartialLabels labels = PartialLabels::Zero(num_nodes);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    int node = 0, label = 0;
    if (!(ss >> node >> label) || node < 1 || node > num_nodes ||
        (label != 1 && label != -1))
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected '<node_id> <+1|-1>' with node in [1, " +
                            std::to_string(num_nodes) + "]");
    labels[node - 1] = label;
  }
  return labels;
}

inline void save_labels(const std::string& path, const Eigen::VectorXd& labels) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  for (int i = 0; i < labels.size(); ++i)
    out << (i + 1) << " " << (labels[i] < 0 ? -1 : 1) << "\n";
}

// --- Feature CSV (id column, feature columns, optional trailing label) -------

struct FeatureTable {
  Eigen::MatrixXd features;        // one row per node, id order
  std::vector<std::string> labels;  // empty if absent
};

/// Zoo-style CSV: header line, first column an id, optional last column
/// named "label" treated as a class tag, everything between numeric.
inline FeatureTable load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError(path + ": empty file, expected CSV header");
  auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : l) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };
  auto header = split(line);
  if (header.size() < 2)
    throw ValidationError(path + ": need an id column and at least one feature");
  const bool has_label = header.back() == "label";
  const std::size_t nfeat = header.size() - 1 - (has_label ? 1 : 0);
  if (nfeat == 0)
    throw ValidationError(path + ": no feature columns");

  std::vector<std::vector<double>> rows;
  FeatureTable table;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(cells.size()));
    std::vector<double> row(nfeat);
    for (std::size_t c = 0; c < nfeat; ++c) {
      try {
        row[c] = std::stod(cells[c + 1]);
      } catch (...) {
        throw ValidationError(path + ":" + std::to_string(lineno) +
                              ": field '" + cells[c + 1] + "' is not a number");
      }
      if (!std::isfinite(row[c]))
        throw ValidationError(path + ":" + std::to_string(lineno) +
                              ": non-finite feature value");
    }
    rows.push_back(std::move(row));
    if (has_label) table.labels.push_back(cells.back());
  }
  table.features.resize(rows.size(), nfeat);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < nfeat; ++c) table.features(i, c) = rows[i][c];
  return table;
}

}  // namespace hgsp::io
