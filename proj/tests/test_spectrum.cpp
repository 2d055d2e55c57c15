#include <doctest.h>

#include "hgsp/hypergraph.hpp"
#include "hgsp/spectrum.hpp"
#include "support.hpp"

using namespace hgsp;

namespace {

// Dense transform oracle: shat_r = <s^{o(M-1)}, f_r^{o(M-1)}> evaluated by
// repeated n-mode products, independent of hadamard_power.
Eigen::VectorXd hgft_oracle(const Spectrum& sp, const Signal& s) {
  const int m1 = sp.order() - 1;
  Eigen::VectorXd out(sp.dim());
  DenseTensor sm = outer_power(s, m1);
  for (int r = 0; r < sp.dim(); ++r) {
    Eigen::MatrixXd row = sp.basis().row(r);
    DenseTensor w = sm;
    for (int mode = 0; mode < m1; ++mode) w = n_mode_product(w, mode, row);
    out[r] = w.data()[0];
  }
  return out;
}

double ortho_defect(const Eigen::MatrixXd& v) {
  const int n = static_cast<int>(v.rows());
  return (v * v.transpose() - Eigen::MatrixXd::Identity(n, n))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

TEST_CASE("order-2 decomposition matches the dense eigensolver") {
  Hypergraph h(2, {{0, 1}});
  Spectrum sp = decompose(adjacency_tensor(h));
  CHECK(sp.rank() == 2);
  CHECK(sp.coeffs()[0] == doctest::Approx(1.0));
  CHECK(sp.coeffs()[1] == doctest::Approx(-1.0));
  CHECK(ortho_defect(sp.basis()) <= 1e-12);
  // eigenvector of lambda = 1 is the constant vector up to sign
  CHECK(std::abs(sp.basis()(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(sp.basis()(0, 0) == doctest::Approx(sp.basis()(0, 1)));
}

TEST_CASE("exactly decomposable tensors are recovered") {
  auto g = support::rng(101);
  Eigen::VectorXd lambda(3);
  lambda << 3.0, 2.0, 1.0;
  for (int order : {3, 4}) {
    CAPTURE(order);
    Eigen::MatrixXd q = support::random_orthonormal(5, g);
    SymTensor t = support::odeco_tensor(q, lambda, order);
    Spectrum sp = decompose(t);
    REQUIRE(sp.rank() == 3);
    CHECK(sp.residual() <= 1e-6);
    CHECK(ortho_defect(sp.basis()) <= 1e-10);
    for (int r = 0; r < 3; ++r) {
      CHECK(sp.coeffs()[r] == doctest::Approx(lambda[r]).epsilon(1e-6));
      // rows match up to sign for even order, exactly up to sign flip pairs
      CHECK(std::abs(sp.basis().row(r).dot(q.row(r))) ==
            doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(sp.coeffs()[3] == 0.0);
    CHECK(sp.coeffs()[4] == 0.0);
  }
}

TEST_CASE("decomposition of the worked 3-uniform adjacency tensor") {
  SymTensor a = adjacency_tensor(support::fig7a());
  Spectrum sp = decompose(a);
  CHECK(sp.dim() == 7);
  CHECK(ortho_defect(sp.basis()) <= 1e-10);
  // coefficients non-increasing
  for (int r = 1; r < sp.rank(); ++r)
    CHECK(sp.coeffs()[r] <= sp.coeffs()[r - 1] + 1e-12);
  // reported residual agrees with a dense reconstruction oracle
  DenseTensor dense = a.to_dense();
  for (int r = 0; r < sp.rank(); ++r) {
    DenseTensor term = outer_power(sp.basis().row(r).transpose(), 3);
    for (std::int64_t i = 0; i < dense.size(); ++i)
      dense.data()[i] -= sp.coeffs()[r] * term.data()[i];
  }
  double fro = 0.0;
  for (std::int64_t i = 0; i < dense.size(); ++i)
    fro += dense.data()[i] * dense.data()[i];
  CHECK(sp.residual() == doctest::Approx(std::sqrt(fro)).epsilon(1e-8));
}

TEST_CASE("decomposition is deterministic for a fixed seed") {
  SymTensor a = adjacency_tensor(support::fig7a());
  Spectrum s1 = decompose(a);
  Spectrum s2 = decompose(a);
  CHECK((s1.basis() - s2.basis()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s1.coeffs() - s2.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("complete_basis") {
  auto g = support::rng(33);
  Eigen::MatrixXd q = support::random_orthonormal(6, g);
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(6);
  lam[0] = 2.0;
  lam[1] = 1.0;
  Eigen::MatrixXd partial_rows = Eigen::MatrixXd::Zero(6, 6);
  partial_rows.topRows(2) = q.topRows(2);
  Spectrum partial(partial_rows, lam, 2, 3, 0.0);

  SUBCASE("completion is orthonormal and keeps accepted rows") {
    Spectrum full = complete_basis(partial);
    CHECK(ortho_defect(full.basis()) <= 1e-12);
    CHECK((full.basis().topRows(2) - q.topRows(2)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(full.rank() == 2);
  }
  SUBCASE("hint energy lands on a single completed component") {
    Signal hint = support::random_signal(6, g);
    Spectrum full = complete_basis(partial, hint);
    CHECK(ortho_defect(full.basis()) <= 1e-12);
    Eigen::VectorXd st = full.basis() * hint;
    // everything beyond rows f_1, f_2, f_3 must vanish
    for (int r = 3; r < 6; ++r) CHECK(std::abs(st[r]) <= 1e-10);
  }
  SUBCASE("hint of the wrong length is rejected") {
    CHECK_THROWS_AS(complete_basis(partial, Signal::Ones(4)), ValidationError);
  }
}

TEST_CASE("frequency representation round trip") {
  auto g = support::rng(55);
  SymTensor a = adjacency_tensor(support::fig7a());
  Spectrum sp = decompose(a);
  Signal s = support::random_signal(7, g);
  Eigen::VectorXd st = original_to_freq(sp, s);
  CHECK((freq_to_original(sp, st) - s).norm() <= 1e-12 * s.norm());
  CHECK_THROWS_AS(original_to_freq(sp, Signal::Ones(3)), ValidationError);
  CHECK_THROWS_AS(freq_to_original(sp, Signal::Ones(3)), ValidationError);
}

TEST_CASE("hgft matches the dense multilinear oracle") {
  auto g = support::rng(77);
  for (int order : {3, 4}) {
    Eigen::MatrixXd q = support::random_orthonormal(4, g);
    Eigen::VectorXd lambda(2);
    lambda << 2.0, 1.0;
    Spectrum sp = decompose(support::odeco_tensor(q, lambda, order));
    Signal s = support::random_signal(4, g);
    Eigen::VectorXd shat = hgft(sp, s);
    Eigen::VectorXd oracle = hgft_oracle(sp, s);
    CHECK((shat - oracle).norm() <= 1e-10 * std::max(1.0, oracle.norm()));
  }
}

TEST_CASE("ihgft") {
  auto g = support::rng(99);
  Eigen::MatrixXd q = support::random_orthonormal(4, g);
  Eigen::VectorXd lambda(2);
  lambda << 2.0, 1.0;

  SUBCASE("round trip for odd M-1") {
    Spectrum sp = decompose(support::odeco_tensor(q, lambda, 4));
    Signal s = support::random_signal(4, g);
    Signal back = ihgft(sp, hgft(sp, s));
    CHECK((back - s).norm() <= 1e-10 * s.norm());
  }
  SUBCASE("round trip for even M-1 needs non-negative frequency content") {
    Spectrum sp = decompose(support::odeco_tensor(q, lambda, 3));
    Eigen::VectorXd st(4);
    st << 1.5, 0.25, 0.0, 2.0;  // non-negative by construction
    Signal s = freq_to_original(sp, st);
    Signal back = ihgft(sp, hgft(sp, s));
    CHECK((back - s).norm() <= 1e-10 * s.norm());
  }
  SUBCASE("negative entry with even M-1 is rejected") {
    Spectrum sp = decompose(support::odeco_tensor(q, lambda, 3));
    Eigen::VectorXd shat = Eigen::VectorXd::Zero(4);
    shat[1] = -0.5;
    CHECK_THROWS_AS(ihgft(sp, shat), ValidationError);
  }
  SUBCASE("tiny negative entries are clamped, not rejected") {
    Spectrum sp = decompose(support::odeco_tensor(q, lambda, 3));
    Eigen::VectorXd shat = Eigen::VectorXd::Zero(4);
    shat[0] = 1.0;
    shat[1] = -1e-14;
    CHECK_NOTHROW(ihgft(sp, shat));
  }
}

TEST_CASE("total variation") {
  auto g = support::rng(121);
  Eigen::MatrixXd q = support::random_orthonormal(5, g);
  Eigen::VectorXd lambda(3);
  lambda << 4.0, 3.0, 1.0;
  SymTensor t = support::odeco_tensor(q, lambda, 3);
  Spectrum sp = decompose(t);

  SUBCASE("frequency components attain |1 - lambda_r/lambda_1| exactly") {
    for (int r = 1; r <= sp.rank(); ++r) {
      Signal fr = sp.basis().row(r - 1).transpose();
      const double tv = total_variation_signal(t, sp.coeffs()[0], fr);
      CHECK(tv == doctest::Approx(total_variation_component(sp, r)).epsilon(1e-9));
    }
    CHECK(total_variation_component(sp, 1) == doctest::Approx(0.0));
    CHECK(total_variation_component(sp, 3) == doctest::Approx(0.75));
  }
  SUBCASE("general signals match the dense shift oracle") {
    Signal s = support::random_signal(5, g);
    Signal shifted = support::dense_contract_oracle(t, s) / sp.coeffs()[0];
    const double expect = (s - shifted).lpNorm<1>() / s.lpNorm<1>();
    CHECK(total_variation_signal(t, sp.coeffs()[0], s) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("edge cases") {
    CHECK(total_variation_signal(t, sp.coeffs()[0], Signal::Zero(5)) == 0.0);
    CHECK_THROWS_AS(total_variation_signal(t, 0.0, Signal::Ones(5)),
                    ValidationError);
    CHECK_THROWS_AS(total_variation_component(sp, 0), ValidationError);
    CHECK_THROWS_AS(total_variation_component(sp, 6), ValidationError);
  }
}

TEST_CASE("supporting matrix") {
  auto g = support::rng(131);
  Eigen::MatrixXd q = support::random_orthonormal(5, g);
  Eigen::VectorXd lambda(3);
  lambda << 4.0, 3.0, 1.0;
  Spectrum sp = decompose(support::odeco_tensor(q, lambda, 3));
  Eigen::MatrixXd p = supporting_matrix(sp);

  CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  for (int r = 0; r < sp.dim(); ++r) {
    Eigen::VectorXd fr = sp.basis().row(r).transpose();
    CHECK((p * fr - sp.coeffs()[r] * fr).norm() <= 1e-10);
  }
  Eigen::MatrixXd ps = supporting_matrix(sp, true);
  CHECK((ps * sp.coeffs()[0] - p).cwiseAbs().maxCoeff() <= 1e-10);

  SUBCASE("order 2 reproduces the adjacency matrix") {
    Hypergraph h(3, {{0, 1}, {1, 2}});
    Spectrum sp2 = decompose(adjacency_tensor(h));
    Eigen::MatrixXd a(3, 3);
    a << 0, 1, 0, 1, 0, 1, 0, 1, 0;
    CHECK((supporting_matrix(sp2) - a).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("bandwidth") {
  auto g = support::rng(141);
  Eigen::MatrixXd q = support::random_orthonormal(6, g);
  Eigen::VectorXd lambda(4);
  lambda << 5.0, 4.0, 3.0, 2.0;
  Spectrum sp = decompose(support::odeco_tensor(q, lambda, 3));

  for (int k = 1; k <= 6; ++k) {
    Eigen::VectorXd st = Eigen::VectorXd::Zero(6);
    for (int r = 0; r < k; ++r) st[r] = 1.0 + r;
    Signal s = freq_to_original(sp, st);
    CHECK(bandwidth(sp, s) == k);
  }
  CHECK(bandwidth(sp, Signal::Zero(6)) == 0);
  CHECK_THROWS_AS(bandwidth(sp, Signal::Ones(6), -1.0), ValidationError);

  SUBCASE("tolerance controls what counts as active") {
    Eigen::VectorXd st = Eigen::VectorXd::Zero(6);
    st[0] = 1.0;
    st[3] = 1e-6;
    Signal s = freq_to_original(sp, st);
    CHECK(bandwidth(sp, s) == 4);          // default tol 1e-9 keeps it
    CHECK(bandwidth(sp, s, 1e-3) == 1);    // coarse tol drops it
  }
}
