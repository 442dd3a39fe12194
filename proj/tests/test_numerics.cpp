#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfv/numerics.hpp"
#include "mfv/parallel.hpp"

using namespace mfv;

namespace {
double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}
}  // namespace

TEST_CASE("BigFloat basics") {
  BigFloat a(1.5, 128), b(2.5, 128);
  CHECK((a + b).to_double() == doctest::Approx(4.0));
  CHECK((a * b).to_double() == doctest::Approx(3.75));
  CHECK(sqrt(BigFloat(2.0, 192)).to_double() == doctest::Approx(std::sqrt(2.0)));
  BigFloat pi = BigFloat::pi(256);
  CHECK(sin(pi).to_double() == doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("complex exp/log/pow") {
  BigComplex z(0.3, 1.7, 160);
  BigComplex w = exp(log(z));
  CHECK(abs(w - z).to_double() < 1e-40);
  BigComplex p = pow(BigFloat(2.0, 160), BigComplex(0.5, 0.0, 160));
  CHECK(p.re.to_double() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("gamma special values") {
  // Gamma(1/2) = sqrt(pi)
  BigComplex g = gamma(BigComplex(0.5, 0.0, 200));
  CHECK(g.re.to_double() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-14));
  // Gamma(5) = 24
  CHECK(gamma(BigComplex(5.0, 0.0, 200)).re.to_double() == doctest::Approx(24.0).epsilon(1e-14));
  // Gamma(1+i): re 0.49801566811835604, arg -0.30164032046753320
  auto g2 = gamma_d({1.0, 1.0});
  CHECK(g2.real() == doctest::Approx(0.49801566811835604).epsilon(1e-13));
  CHECK(std::arg(g2) == doctest::Approx(-0.30164032046753320).epsilon(1e-12));
  // reflection region: Gamma(-1.5) = 4 sqrt(pi)/3
  CHECK(gamma_d({-1.5, 0.0}).real() == doctest::Approx(4.0 * std::sqrt(M_PI) / 3.0).epsilon(1e-13));
  // functional identity at complex argument: Gamma(z+1) = z Gamma(z)
  std::complex<double> z{0.3, 2.2};
  CHECK(rel_err(gamma_d(z + 1.0), z * gamma_d(z)) < 1e-13);
}

TEST_CASE("riemann zeta") {
  CHECK(riemann_zeta_d({2.0, 0.0}).real() == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-13));
  CHECK(riemann_zeta_d({3.0, 0.0}).real() == doctest::Approx(1.2020569031595943).epsilon(1e-13));
  // zeta(0) = -1/2, zeta(-1) = -1/12 via functional equation path
  CHECK(riemann_zeta_d({0.0, 0.0}).real() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(riemann_zeta_d({-1.0, 0.0}).real() == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
  // first nontrivial zero
  auto z = riemann_zeta_d({0.5, 14.134725141734693});
  CHECK(std::abs(z) < 1e-9);
  // a complex sample against mpmath
  auto v = riemann_zeta_d({0.5, 3.0});
  CHECK(v.real() == doctest::Approx(0.5327366709742328839).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(-0.0788965134258333827).epsilon(1e-12));
}

TEST_CASE("zeta_star and local factors") {
  // zeta*(2) = zeta_R(2) zeta(2) = (1/pi)(pi^2/6) = pi/6
  CHECK(zeta_star_d({2.0, 0.0}).real() == doctest::Approx(M_PI / 6.0).epsilon(1e-13));
  // completed functional equation zeta*(s) = zeta*(1-s) at s = 0.3 + 0.7i
  auto a = zeta_star_d({0.3, 0.7});
  auto b = zeta_star_d({0.7, -0.7});
  CHECK(rel_err(a, b) < 1e-12);
  // Legendre: zeta_C(s) = 2 (2pi)^{-s} Gamma(s)
  std::complex<double> s{1.7, 0.4};
  auto lhs = zeta_C_d(s);
  auto rhs = 2.0 * std::exp(-s * std::log(2.0 * M_PI)) * gamma_d(s);
  CHECK(rel_err(lhs, rhs) < 1e-12);
}

TEST_CASE("bernoulli") {
  auto b = bernoulli_strings(12);
  CHECK(b[2].first == "1");
  CHECK(b[2].second == "6");
  CHECK(b[4].first == "-1");
  CHECK(b[4].second == "30");
  CHECK(b[12].first == "-691");
  CHECK(b[12].second == "2730");
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto& g = gauss_legendre(12);
  // integral of x^10 over [-1,1] = 2/11
  double s = 0;
  for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 10);
  CHECK(s == doctest::Approx(2.0 / 11.0).epsilon(1e-14));
  double one = 0;
  for (double w : g.w) one += w;
  CHECK(one == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("parallel block sums match serial exactly") {
  auto term = [](std::int64_t i) { return std::sin(0.001 * static_cast<double>(i)) / (1.0 + i); };
  double a = block_sum_serial(100000, term);
  double b = block_sum_parallel(100000, term);
  CHECK(a == b);  // bit-identical by construction
  auto cterm = [](std::int64_t i) {
    return std::complex<double>(std::cos(0.01 * i), std::sin(0.02 * i)) / (1.0 + i * i * 0.001);
  };
  auto ca = block_sum_c_serial(50000, cterm);
  auto cb = block_sum_c_parallel(50000, cterm);
  CHECK(ca.real() == cb.real());
  CHECK(ca.imag() == cb.imag());
}
