#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hgsp/errors.hpp"
#include "hgsp/spectrum.hpp"
#include "hgsp/symtensor.hpp"

namespace hgsp {

/// Polynomial filter coefficients. Tensor form: alpha_1..alpha_a applied to
/// repeated tensor shifts. Matrix form: beta_0..beta_a applied to powers of
/// the supporting matrix (the constant term makes the propagation filter
/// H = prod(I + alpha_i P) expressible directly).
struct PolySpec {
  enum class Form { tensor, matrix };
  Form form = Form::matrix;
  std::vector<double> coefficients;

  static PolySpec tensor_form(std::vector<double> alphas) {
    if (alphas.empty())
      throw ValidationError("PolySpec: tensor form needs degree >= 1");
    return PolySpec{Form::tensor, std::move(alphas)};
  }
  static PolySpec matrix_form(std::vector<double> betas) {
    if (betas.empty())
      throw ValidationError("PolySpec: matrix form needs at least beta_0");
    return PolySpec{Form::matrix, std::move(betas)};
  }
};

/// k-time shifting filter: s_(k) = F (F (... (F s^[M-1]) ...)^[M-1])^[M-1].
/// Magnitudes grow as degree (M-1)^k; an overflow guard rejects runaway
/// intermediates and advises normalization.
inline Signal shift_k(const SymTensor& t, const Signal& s, int k) {
  if (k < 1) throw ValidationError("shift_k: k must be >= 1");
  Signal cur = s;
  for (int i = 0; i < k; ++i) {
    cur = t.contract_vector(cur);
    if (!cur.allFinite() || cur.norm() > 1e150)
      throw NumericalError("shift_k: intermediate norm exceeded 1e150 at shift " +
                           std::to_string(i + 1) +
                           "; normalize the signal before filtering");
  }
  return cur;
}

/// s' = sum_{k=1..a} alpha_k s_(k).
inline Signal apply_tensor_poly(const SymTensor& t, const PolySpec& spec,
                                const Signal& s) {
  if (spec.form != PolySpec::Form::tensor)
    throw ValidationError("apply_tensor_poly: spec is not in tensor form");
  Signal out = Signal::Zero(s.size());
  Signal cur = s;
  for (std::size_t k = 0; k < spec.coefficients.size(); ++k) {
    cur = t.contract_vector(cur);
    if (!cur.allFinite() || cur.norm() > 1e150)
      throw NumericalError("apply_tensor_poly: intermediate norm exceeded 1e150 "
                           "at shift " + std::to_string(k + 1) +
                           "; normalize the signal before filtering");
    out += spec.coefficients[k] * cur;
  }
  return out;
}

/// s' = sum_{k=0..a} beta_k P^k s, evaluated in the spectral domain as
/// V^T diag(h(lambda_r)) V s.
inline Signal apply_matrix_poly(const Spectrum& sp, const PolySpec& spec,
                                const Signal& s) {
  if (spec.form != PolySpec::Form::matrix)
    throw ValidationError("apply_matrix_poly: spec is not in matrix form");
  if (s.size() != sp.dim())
    throw ValidationError("apply_matrix_poly: signal length " +
                          std::to_string(s.size()) + " vs dim " +
                          std::to_string(sp.dim()));
  Eigen::VectorXd h(sp.dim());
  for (int r = 0; r < sp.dim(); ++r) {
    const double lam = sp.coeffs()[r];
    double acc = 0.0, pw = 1.0;
    for (double beta : spec.coefficients) {
      acc += beta * pw;
      pw *= lam;
    }
    h[r] = acc;
  }
  return sp.basis().transpose() * h.cwiseProduct(sp.basis() * s);
}

/// Closed-form denoising filter s' = [I + gamma (I-P_s)^T (I-P_s)]^{-1} y,
/// evaluated in the spectral domain: s'_r = y~_r / (1 + gamma (1 - lambda_r/lambda_1)^2).
inline Signal denoise(const Spectrum& sp, const Signal& y, double gamma) {
  if (gamma < 0.0) throw ValidationError("denoise: gamma must be >= 0");
  if (sp.coeffs()[0] <= 0.0)
    throw ValidationError("denoise: lambda_1 <= 0, supporting matrix undefined");
  if (gamma == 0.0) return y;  // identity filter, bit exact
  Eigen::VectorXd yt = original_to_freq(sp, y);
  const double l1 = sp.coeffs()[0];
  for (int r = 0; r < sp.dim(); ++r) {
    const double tv = 1.0 - sp.coeffs()[r] / l1;
    yt[r] /= 1.0 + gamma * tv * tv;
  }
  return freq_to_original(sp, yt);
}

}  // namespace hgsp
