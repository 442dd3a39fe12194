#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "mfv/bessel.hpp"

using namespace mfv;

namespace {
double relc(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(1e-300, std::abs(b));
}
}  // namespace

TEST_CASE("closed form K_{1/2}") {
  // K_{1/2}(x) = sqrt(pi/2x) e^{-x}
  for (double x : {0.5, 1.0, 3.0, 10.0, 45.0}) {
    auto v = kbessel({0.5, 0.0}, x);
    double want = std::sqrt(M_PI / (2 * x)) * std::exp(-x);
    CHECK(relc(v, want) < 1e-12);
  }
  CHECK(kbessel({0.5, 0.0}, 1.0).real() == doctest::Approx(0.4610685044).epsilon(1e-9));
}

TEST_CASE("K_0(1) against the cosh-integral oracle") {
  // K_0(x) = int_0^infty e^{-x cosh t} dt, x = 1
  double h = 1e-3, acc = 0.0;
  for (int i = 0;; ++i) {
    double t = h * i;
    double f = std::exp(-std::cosh(t));
    acc += (i == 0 ? 0.5 : 1.0) * f;
    if (std::cosh(t) > 60) break;
  }
  acc *= h;
  CHECK(relc(kbessel({0, 0}, 1.0), acc) < 1e-12);
}

TEST_CASE("real order against boost::math (independent oracle)") {
  for (double nu : {0.0, 1.0, 0.25, 2.75, 7.5}) {
    for (double x : {0.3, 1.0, 2.2, 6.0, 17.0, 55.0, 130.0}) {
      double want = boost::math::cyl_bessel_k(nu, x);
      auto got = kbessel({nu, 0.0}, x);
      CHECK(relc(got, want) < 1e-12);
      CHECK(std::abs(got.imag()) < 1e-13 * std::abs(got.real()));
    }
  }
  // integer order (removable reflection singularity)
  CHECK(relc(kbessel({3.0, 0.0}, 2.5), boost::math::cyl_bessel_k(3.0, 2.5)) < 1e-12);
}

TEST_CASE("imaginary order against frozen 30-digit values") {
  struct Row { double t, x, re; };
  // frozen from a 30-digit evaluation of besselk(i t, x)
  const Row rows[] = {
      {0.5, 1.0, 0.384043016905092699},
      {1.0, 2.5, 0.0524864608425168939},
      {2.0, 0.7, 0.0596909941649312904},
      {5.0, 3.0, 0.000379416746889200789},
      {9.5337, 5.44, -2.11557320444031442e-7},
      {13.7797, 5.0, -2.78145254303141428e-10},
      {13.7797, 13.9, 2.21981384072444356e-10},
      {13.7797, 20.0, 4.62481418277091825e-12},
      {17.7386, 8.0, -4.0902049902823734e-13},
      {30.0, 12.0, 1.62199300058742225e-21},
      {6.0, 47.0, 4.83301913883048243e-22},
      {0.25, 60.0, 1.41316765182210662e-27},
  };
  for (const auto& r : rows) {
    auto v = kbessel({0.0, r.t}, r.x);
    CHECK(relc(v, {r.re, 0.0}) < 1e-12);
    CHECK(std::abs(v.imag()) <= 1e-12 * std::abs(r.re));
  }
  // scaled variant at large argument
  auto s = kbessel({0.0, 13.7797}, 80.0, true);
  CHECK(s.real() == doctest::Approx(0.0428924612970573934).epsilon(1e-12));
  auto s2 = kbessel({0.0, 0.0}, 200.0, true);
  CHECK(s2.real() == doctest::Approx(0.0885674583392966582).epsilon(1e-12));
}

TEST_CASE("general complex order") {
  auto v = kbessel({0.3, 4.0}, 6.0);
  CHECK(relc(v, {0.000344141506086060388, 0.0000686386387317827062}) < 1e-12);
  auto w = kbessel({0.0, 7.0}, 2.2);
  CHECK(w.real() == doctest::Approx(9.41355933016459105e-6).epsilon(1e-12));
  CHECK(relc(kbessel({1.5, 0.0}, 2.0), {0.179906657952092171, 0.0}) < 1e-12);
  CHECK_THROWS(kbessel({0.0, 61.0}, 5.0));
  CHECK_THROWS(kbessel({0.0, 1.0}, -1.0));
}

TEST_CASE("derivative identity K' = -(K_{mu-1}+K_{mu+1})/2 on a grid") {
  for (std::complex<double> mu : {std::complex<double>{0.0, 2.0},
                                  std::complex<double>{0.5, 0.0},
                                  std::complex<double>{0.0, 9.5337}}) {
    for (double x : {3.0, 5.5, 9.0, 14.0}) {
      double h = 1e-3;
      // five-point derivative
      auto f = [&](double xx) { return kbessel(mu, xx); };
      auto d = (-f(x + 2 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2 * h)) / (12.0 * h);
      auto rhs = -0.5 * (kbessel(mu - 1.0, x) + kbessel(mu + 1.0, x));
      double scale = std::max(std::abs(rhs), std::abs(f(x).real()));
      CHECK(std::abs(d - rhs) < 1e-9 * std::max(scale, 1e-30) + 1e-24);
    }
  }
}

TEST_CASE("KBesselTable matches direct evaluation") {
  double t = 13.7797;
  KBesselTable tab({0.0, t}, 2.5, 70.0, 1e-12);
  for (double x : {2.5, 3.3, 5.44, 8.1, 13.77, 13.95, 21.0, 44.4, 69.9}) {
    auto a = tab.eval_scaled(x);
    auto b = kbessel({0.0, t}, x, true);
    CHECK(std::abs(a - b) <= 1e-11 * (std::abs(b) + 1e-18));
  }
  CHECK_THROWS(tab.eval_scaled(1.0));
  // real order table too (Eisenstein path)
  KBesselTable tr({1.5, 0.0}, 0.5, 40.0, 1e-12);
  CHECK(relc(tr.eval(2.0), kbessel({1.5, 0.0}, 2.0)) < 1e-11);
}

TEST_CASE("whittaker closed rows") {
  // w_{k/2,(k-1)/2}(y) = y^{k/2} e^{-y/2}, k = 12, y = 3 -> 3^6 e^{-3/2}
  auto v = whittaker_w(6.0, {5.5, 0.0}, 3.0);
  CHECK(v.real() == doctest::Approx(729.0 * std::exp(-1.5)).epsilon(1e-13));
  // w_{0,1/4}(2) = (2/pi)^{1/2} K_{1/4}(1)
  auto w = whittaker_w(0.0, {0.25, 0.0}, 2.0);
  double want = std::sqrt(2.0 / M_PI) * boost::math::cyl_bessel_k(0.25, 1.0);
  CHECK(w.real() == doctest::Approx(want).epsilon(1e-12));
  CHECK(w.real() == doctest::Approx(0.343680615756234946).epsilon(1e-12));
}

TEST_CASE("whittaker against frozen reference values") {
  struct Row { double k, mu, y, w; };
  const Row rows[] = {
      {-6.0, -5.5, 1.7, 0.0023441490520596299},
      {-6.0, -5.5, 12.56637061435917, 2.47298542904052063e-10},
      {-1.0, 1.2, 3.3, 0.0492801868731660668},
  };
  for (const auto& r : rows) {
    auto v = whittaker_w(r.k, {r.mu, 0.0}, r.y);
    CHECK(relc(v, {r.w, 0.0}) < 1e-10);
  }
}

TEST_CASE("whittaker asymptotic normalization at large y") {
  // On the holomorphic row the envelope is exact: ratio 1 to 1e-6 at y = 80.
  auto v = whittaker_w(6.0, {5.5, 0.0}, 80.0);
  double envelope = std::pow(80.0, 6.0) * std::exp(-40.0);
  CHECK(std::abs(v.real() / envelope - 1.0) < 1e-6);
  // generic parameters approach the envelope at the O(1/y) rate
  double kappa = -1.0;
  std::complex<double> mu{1.2, 0.0};
  auto a = whittaker_w(kappa, mu, 80.0);
  double ea = std::pow(80.0, kappa) * std::exp(-40.0);
  auto b = whittaker_w(kappa, mu, 400.0);
  double eb = std::pow(400.0, kappa) * std::exp(-200.0);
  CHECK(std::abs(a.real() / ea - 1.0) < 0.05);
  CHECK(std::abs(b.real() / eb - 1.0) < 0.3 * std::abs(a.real() / ea - 1.0));
}

TEST_CASE("whittaker ODE residual") {
  // w'' + (-1/4 + kappa/y + (1/4 - mu^2)/y^2) w = 0, residual < 1e-6 |w|
  double kappa = -2.0;
  std::complex<double> mu{0.9, 0.0};
  for (double y : {1.0, 2.0, 5.0, 11.0, 17.0, 40.0}) {
    double h = 1e-3 * std::max(1.0, y / 8);
    auto f = [&](double yy) { return whittaker_w(kappa, mu, yy); };
    auto d2 = (-f(y + 2 * h) + 16.0 * f(y + h) - 30.0 * f(y) + 16.0 * f(y - h) - f(y - 2 * h)) /
              (12.0 * h * h);
    auto w = f(y);
    auto resid = d2 + (-0.25 + kappa / y + (0.25 - mu * mu) / (y * y)) * w;
    CHECK(std::abs(resid) < 1e-6 * std::abs(w) + 1e-18);
  }
}

TEST_CASE("whittaker parameter-region error") {
  CHECK_THROWS(whittaker_w(3.0, {1.0, 0.0}, 2.0));  // Re(mu-kappa+1/2) < 0, no closed row
}
