#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mfv/qexp.hpp"

using namespace mfv;

namespace {

// independent divisor-sum oracle
long sigma_pow(long n, int k) {
  long s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) s += static_cast<long>(std::llround(std::pow(static_cast<double>(d), k)));
  return s;
}

}  // namespace

TEST_CASE("eisenstein_qexp against divisor-sum oracle") {
  QSeries e4 = eisenstein_qexp(4, 4);
  CHECK(e4.coeff(0) == 1);
  CHECK(e4.coeff(1) == 240 * sigma_pow(1, 3));
  CHECK(e4.coeff(2) == 240 * sigma_pow(2, 3));
  CHECK(e4.coeff(3) == 240 * sigma_pow(3, 3));
  CHECK(e4.coeff(1) == 240);
  CHECK(e4.coeff(2) == 2160);
  CHECK(e4.coeff(3) == 6720);

  QSeries e6 = eisenstein_qexp(6, 2);
  CHECK(e6.coeff(0) == 1);
  CHECK(e6.coeff(1) == -504);

  // constant term only
  QSeries ek = eisenstein_qexp(8, 2);
  CHECK(ek.coeff(0) == 1);

  // E12 has denominator 691
  QSeries e12 = eisenstein_qexp(12, 3);
  CHECK(e12.coeff(1) == mpq_class(65520, 691));

  CHECK_THROWS(eisenstein_qexp(5, 10));
  CHECK_THROWS(eisenstein_qexp(2, 10));
}

TEST_CASE("QSeries contract violations") {
  QSeries e4 = eisenstein_qexp(4, 8);
  CHECK_THROWS(e4.coeff(8));
  CHECK_THROWS(e4.coeff(-1));
  QSeries p = e4 * eisenstein_qexp(6, 5);
  CHECK(p.precision() == 5);  // min of inputs
  CHECK(p.weight() == 10);
}

TEST_CASE("delta expansion") {
  QSeries d = delta_qexp(8);
  long tau[] = {0, 1, -24, 252, -1472, 4830, -6048, -16744};
  for (int n = 1; n < 8; ++n) CHECK(d.coeff(n) == tau[n]);
}

TEST_CASE("hecke_apply") {
  QSeries d = delta_qexp(64);
  // T_2 Delta = -24 Delta
  QSeries t2 = hecke_apply(d, 2);
  for (int n = 1; n < t2.precision(); ++n) CHECK(t2.coeff(n) == -24 * d.coeff(n));
  // T_3 Delta: a_1 = 252
  QSeries t3 = hecke_apply(d, 3);
  CHECK(t3.coeff(1) == 252);
  // zero series stays zero
  QSeries z(12, 32);
  CHECK(hecke_apply(z, 5).is_zero());
  // insufficient precision
  QSeries small(12, 3);
  CHECK_THROWS(hecke_apply(small, 5));
}

TEST_CASE("dimension formula oracle") {
  // independent: dim S_k = floor(k/12) - [k mod 12 == 2] (k >= 4 even), via
  // the classical valence formula table
  for (int k : {12, 16, 18, 20, 22, 26}) CHECK(dim_cusp_forms(k) == 1);
  CHECK(dim_cusp_forms(14) == 0);
  CHECK(dim_cusp_forms(24) == 2);
  CHECK(dim_cusp_forms(28) == 2);
  CHECK(dim_cusp_forms(10) == 0);
}

TEST_CASE("cusp_eigenforms weight 12") {
  auto forms = cusp_eigenforms(12, 64);
  REQUIRE(forms.size() == 1);
  const auto& f = forms[0];
  long tau[] = {0, 1, -24, 252, -1472, 4830, -6048};
  for (int n = 1; n <= 6; ++n) CHECK(f.a_double(n) == doctest::Approx(tau[n]).epsilon(1e-40));
}

TEST_CASE("cusp_eigenforms weight 14 empty") { CHECK(cusp_eigenforms(14, 32).empty()); }

TEST_CASE("cusp_eigenforms weight 28: two Galois branches") {
  auto forms = cusp_eigenforms(28, 128);
  REQUIRE(forms.size() == 2);
  // lambda_2 values are roots of the exact T_2 characteristic polynomial on
  // S_28; oracle: exact 2x2 Hecke matrix in the Victor-Miller basis.
  auto basis = victor_miller_basis(28, 16);
  mpq_class m00, m01, m10, m11;
  {
    QSeries t0 = hecke_apply(basis[0], 2), t1 = hecke_apply(basis[1], 2);
    m00 = t0.coeff(1);
    m10 = t0.coeff(2);
    m01 = t1.coeff(1);
    m11 = t1.coeff(2);
  }
  // char poly x^2 - tr x + det
  mpq_class tr = m00 + m11, det = m00 * m11 - m01 * m10;
  for (const auto& f : forms) {
    double a2 = f.a_double(2);
    double resid = a2 * a2 - tr.get_d() * a2 + det.get_d();
    CHECK(std::abs(resid) / std::abs(det.get_d()) < 1e-12);
  }
  CHECK(forms[0].a_double(2) != forms[1].a_double(2));
}

TEST_CASE("multiplicativity holds on stored range") {
  for (int k : {12, 16, 28}) {
    auto forms = cusp_eigenforms(k, 200);
    for (const auto& f : forms) {
      for (int m = 2; m <= 13; ++m)
        for (int n = 2; n <= 13; ++n) {
          if (std::gcd(m, n) != 1 || m * n >= f.precision) continue;
          BigFloat lhs = f.a[static_cast<size_t>(m) * n];
          BigFloat rhs = f.a[m] * f.a[n];
          double scale = std::max(1.0, std::abs(rhs.to_double()));
          CHECK(abs(lhs - rhs).to_double() <= 1e-45 * scale);
        }
    }
  }
}

TEST_CASE("satake parameters") {
  // Delta, p = 2: lambda_2 = -24/2^{11/2}
  auto forms = cusp_eigenforms(12, 64);
  const auto& f = forms[0];
  CHECK(f.lambda(2) == doctest::Approx(-24.0 / std::pow(2.0, 5.5)).epsilon(1e-12));
  auto sp = f.satake.at(2);
  CHECK(sp.tempered);
  // reconstructed lambda_p = p^{1/2}(p^{-sdot} + p^{-sddot})
  auto rec = std::exp(-sp.sdot * std::log(2.0)) + std::exp(-sp.sddot * std::log(2.0));
  CHECK(std::abs(rec - std::complex<double>(f.lambda(2), 0)) < 1e-12);
  // sdot + sddot = 0 (mod 2 pi i / log 2): trivial central character
  auto sum = sp.sdot + sp.sddot;
  double period = 2.0 * M_PI / std::log(2.0);
  double im = std::remainder(sum.imag(), period);
  CHECK(std::abs(sum.real()) < 1e-12);
  CHECK(std::abs(im) < 1e-12);

  // double root branch: lambda_p = 2 -> sdot = sddot = 0
  auto dsp = satake_params(2.0, 5);
  CHECK(std::abs(dsp.sdot) < 1e-7);
  CHECK(std::abs(dsp.sddot) < 1e-7);
}

TEST_CASE("lambda_power closed form vs Hecke recursion and exact T_{p^n}") {
  auto forms = cusp_eigenforms(12, 5000);
  const auto& f = forms[0];

  // n = 0, 1 telescoping
  auto sp = f.satake.at(2);
  CHECK(std::abs(lambda_power(sp, 2, 0) - 1.0) < 1e-15);
  CHECK(std::abs(lambda_power(sp, 2, 1) - f.lambda(2)) < 1e-12);

  // Delta, p = 2, n = 2: lambda_2^2 - 1 = -0.71875 = tau(4)/2^11
  auto l2 = lambda_power(sp, 2, 2);
  CHECK(l2.real() == doctest::Approx(-0.71875).epsilon(1e-12));
  CHECK(l2.real() == doctest::Approx(-1472.0 / 2048.0).epsilon(1e-12));

  // closed form == unitary a_{p^n} for p^n < precision (oracle: exact expansion)
  for (std::uint64_t p : {2, 3, 5, 7}) {
    auto spp = f.satake.at(p);
    for (int n = 0; n <= 4; ++n) {
      double pn = std::pow(static_cast<double>(p), n);
      if (pn >= f.precision) continue;
      std::complex<double> lp = lambda_power(spp, p, n);
      double want = f.lambda(static_cast<std::uint64_t>(pn));
      CHECK(std::abs(lp - std::complex<double>(want, 0)) < 1e-10 * std::max(1.0, std::abs(want)));
    }
  }

  // Hecke recursion lambda_{p^{n+1}} = lambda_p lambda_{p^n} - lambda_{p^{n-1}}
  for (int n = 1; n <= 5; ++n) {
    auto lhs = lambda_power(sp, 2, n + 1);
    auto rhs = lambda_power(sp, 2, 1) * lambda_power(sp, 2, n) - lambda_power(sp, 2, n - 1);
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("tempered branch holds for all level-1 eigenforms (Ramanujan)") {
  for (int k : {12, 16, 18, 20, 22, 26, 28}) {
    auto forms = cusp_eigenforms(k, 128);
    for (const auto& f : forms)
      for (auto p : f.primes) {
        if (p > 97) break;
        CHECK(f.satake.at(p).tempered);
        // |p^{-sdot}| = 1
        auto a = std::abs(std::exp(-f.satake.at(p).sdot * std::log(static_cast<double>(p))));
        CHECK(a == doctest::Approx(1.0).epsilon(1e-10));
      }
  }
}

TEST_CASE("eigenform json round trip") {
  auto forms = cusp_eigenforms(28, 64);
  std::string j = eigenform_to_json(forms[0]);
  HoloEigenform g = eigenform_from_json(j);
  CHECK(g.weight == 28);
  CHECK(g.precision == forms[0].precision);
  for (int n = 1; n < 20; ++n)
    CHECK(g.a_double(n) == doctest::Approx(forms[0].a_double(n)).epsilon(1e-40));
}
