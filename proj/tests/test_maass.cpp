#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mfv/maass.hpp"
#include "mfv/surface.hpp"

using namespace mfv;

namespace {
// forms are expensive to locate; solve once and share
const std::vector<MaassForm>& first_odd() {
  static auto v = [] {
    SolveOptions opt;
    opt.grid_step = 0.02;
    return maass_solve(9.3, 9.8, 1, opt);
  }();
  return v;
}
const std::vector<MaassForm>& first_even() {
  static auto v = [] {
    SolveOptions opt;
    opt.grid_step = 0.02;
    return maass_solve(13.5, 14.0, 0, opt);
  }();
  return v;
}
}  // namespace

TEST_CASE("first odd form near t = 9.5337, certified across truncations") {
  const auto& v = first_odd();
  REQUIRE(v.size() == 1);
  const auto& f = v[0];
  CHECK(f.t == doctest::Approx(9.5337).epsilon(2e-4));
  CHECK(f.certified_digits >= 6);
  CHECK(f.diag.anchor_disagreement < 1e-6);

  // stability across (M0, y_anchor) choices: re-solve with different knobs
  SolveOptions opt2;
  opt2.grid_step = 0.02;
  opt2.y_anchor = 0.42;
  opt2.M0 = f.m0 + 8;
  auto v2 = maass_solve(9.45, 9.6, 1, opt2);
  REQUIRE(v2.size() == 1);
  CHECK(std::abs(v2[0].t - f.t) < 1e-6);
  for (int n = 2; n <= 6; ++n) CHECK(std::abs(v2[0].c[n] - f.c[n]) < 1e-6);
}

TEST_CASE("first even form near t = 13.7797") {
  const auto& v = first_even();
  REQUIRE(v.size() == 1);
  CHECK(v[0].t == doctest::Approx(13.7797).epsilon(2e-4));
  CHECK(v[0].certified_digits >= 6);
}

TEST_CASE("odd form vanishes on the imaginary axis") {
  const auto& f = first_odd()[0];
  auto F = AutomorphicFunction::maass(f.t, f.parity, f.c);
  for (double y : {0.9, 1.3, 2.0}) {
    auto val = F.eval({0.0, y}, 1e-12);
    CHECK(std::abs(val) < 1e-12);
  }
  // and generic points do not vanish
  CHECK(std::abs(F.eval({0.21, 1.1}, 1e-12)) > 1e-6);
}

TEST_CASE("even form: x-derivative vanishes at x = 0 (sampled)") {
  const auto& f = first_even()[0];
  auto F = AutomorphicFunction::maass(f.t, f.parity, f.c);
  double h = 1e-5;
  for (double y : {0.95, 1.4}) {
    auto d = (F.eval({h, y}, 1e-13) - F.eval({-h, y}, 1e-13)) / (2 * h);
    CHECK(std::abs(d) < 1e-6);
  }
}

TEST_CASE("gamma invariance of Maass evaluation") {
  const auto& f = first_even()[0];
  auto F = AutomorphicFunction::maass(f.t, f.parity, f.c);
  // sample below the fundamental domain: evaluation pulls back internally
  for (double x : {0.05, 0.33, -0.41}) {
    auto a = F.eval({x, 0.35}, 1e-10);
    auto r = reduce({x, 0.35});
    auto b = F.eval(r.z, 1e-10);
    CHECK(std::abs(a - b) < 1e-10);
  }
}

TEST_CASE("Hecke relations on certified and extended coefficients") {
  MaassForm f = first_even()[0];
  maass_extend(f, 960);
  CHECK(f.extension_digits >= 6);
  double worst = 0.0;
  for (int m = 2; m <= 30; ++m)
    for (int n = 2; n <= 30; ++n) {
      if (m * n >= static_cast<int>(f.c.size())) continue;
      double want = 0.0;
      for (int d = 1; d <= std::min(m, n); ++d)
        if (m % d == 0 && n % d == 0) want += f.c[(m / d) * (n / d)];
      worst = std::max(worst, std::abs(f.c[m] * f.c[n] - want));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("maass satake: tempered branch and reconstruction") {
  const auto& f = first_odd()[0];
  for (std::uint64_t p : {2, 3, 5, 7}) {
    CHECK(std::abs(f.c[p]) <= 2.0);  // Ramanujan observed at level 1
    auto sp = maass_satake(f, p);
    CHECK(sp.tempered);
    auto rec = std::exp(-sp.sdot * std::log((double)p)) + std::exp(-sp.sddot * std::log((double)p));
    CHECK(std::abs(rec.real() - f.c[p]) < 1e-10);
    CHECK(std::abs(rec.imag()) < 1e-12);
  }
  // c_p = 0 branch: roots +-i
  auto sp0 = satake_params(0.0, 3);
  auto root = std::exp(-sp0.sdot * std::log(3.0));
  bool is_plus_i = std::abs(root - std::complex<double>(0, 1)) < 1e-12;
  bool is_minus_i = std::abs(root + std::complex<double>(0, 1)) < 1e-12;
  CHECK((is_plus_i || is_minus_i));
}

TEST_CASE("json archive round trip") {
  const auto& f = first_odd()[0];
  auto j = maass_to_json(f);
  auto g = maass_from_json(j);
  CHECK(g.parity == 1);
  CHECK(std::abs(g.t - f.t) < 1e-11);
  for (size_t n = 1; n < std::min(g.c.size(), f.c.size()); ++n)
    CHECK(g.c[n] == doctest::Approx(f.c[n]).epsilon(1e-12));
}

TEST_CASE("absence scan: no even parameter below 13, none odd below 9") {
  // at resolution 0.25 with the detector (coarse absence check; the
  // acceptance suite runs the full-resolution scan)
  SolveOptions opt;
  opt.grid_step = 0.25;
  auto even_low = maass_solve(8.0, 12.9, 0, opt);
  CHECK(even_low.empty());
  auto odd_low = maass_solve(5.0, 8.9, 1, opt);
  CHECK(odd_low.empty());
}
