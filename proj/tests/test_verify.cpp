#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mfv/verify.hpp"

using namespace mfv;

TEST_CASE("constant table, exact rationals") {
  CHECK(ConstantTable::c_infty(0) == 1);
  CHECK(ConstantTable::c_infty(12) == mpq_class(1, 8192));  // 2^{-13}
  CHECK(ConstantTable::C_infty_holomorphic(12) == mpq_class(1, mpz_class(1) << 26));
  CHECK(ConstantTable::C_infty_maass(1) == 1);
  CHECK(ConstantTable::C_infty_maass(-1) == 0);
  // Q rows
  CHECK(ConstantTable::Q_infty(0, 0, 0, 1) == 1);
  CHECK(ConstantTable::Q_infty(0, 0, 0, -1) == 0);
  CHECK(ConstantTable::Q_infty(16, 16, 0, 1) == 1);
  CHECK(ConstantTable::Q_infty(28, 16, 12, 1) == 2);
  // level-1 prefactor = Q/8
  CHECK(ConstantTable::watson_prefactor(28, 16, 12, 1) == mpq_class(1, 4));
  CHECK(ConstantTable::watson_prefactor(0, 0, 0, 1) == mpq_class(1, 8));
}

TEST_CASE("local zeta identity: principal value and symmetry") {
  // all sdot = sddot = 0 (lambda_p = 2) at p = 2, s = 1:
  // both sides zeta_2(3/2)^8 / (zeta_2(4) zeta_2(6))
  SatakePair triv = satake_params(2.0, 2);
  auto r = check_local_zeta_unramified(2, 1.0, triv, triv, triv, 1e-10);
  CHECK(r.pass);
  CHECK(r.relative_discrepancy < 1e-10);
  auto zp = [](double e) { return 1.0 / (1.0 - std::pow(2.0, -e)); };
  double want = std::pow(zp(1.5), 8) / (zp(4.0) * zp(6.0));
  CHECK(r.rhs.real() == doctest::Approx(want).epsilon(1e-12));
  CHECK(std::abs(r.lhs.real() - want) < 1e-9 * want);

  // swapping forms 2 and 3 leaves the sum unchanged (k2 <-> k3 symmetry)
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.9, 1.9);
  for (int i = 0; i < 4; ++i) {
    SatakePair a = satake_params(U(rng), 3), b = satake_params(U(rng), 3),
               c = satake_params(U(rng), 3);
    auto r1 = check_local_zeta_unramified(3, 1.25, a, b, c, 1e-9);
    auto r2 = check_local_zeta_unramified(3, 1.25, a, c, b, 1e-9);
    CHECK(std::abs(r1.lhs - r2.lhs) < 1e-12 * std::abs(r1.lhs));
  }
}

TEST_CASE("local zeta identity: random tempered triples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    for (int trial = 0; trial < 4; ++trial) {
      SatakePair a = satake_params(U(rng), p), b = satake_params(U(rng), p),
                 c = satake_params(U(rng), p);
      auto r = check_local_zeta_unramified(p, 1.25, a, b, c, 1e-8);
      CHECK(r.pass);
      CHECK(r.relative_discrepancy < 1e-8);
    }
  }
  // divergence guard: non-tempered with tiny s rejected
  SatakePair bad = satake_params(3.0, 2);  // sigma_p > 0 branch
  CHECK_THROWS(check_local_zeta_unramified(2, 0.55, bad, bad, bad, 1e-8));
}

TEST_CASE("gross-kudla mode 0: beta integral vs gamma ratio") {
  for (double s : {0.5, 1.0}) {
    auto r = check_gross_kudla_arch(12, 8, 4, s, 0, 0.0, 1e-10);
    CHECK(r.pass);
    CHECK(r.relative_discrepancy < 1e-10);
  }
}

TEST_CASE("gross-kudla mode 1: closed-form gamma identity at s = 0, 1") {
  for (double s : {0.0, 1.0}) {
    for (auto [k1, k2, k3] : {std::tuple{12, 8, 4}, std::tuple{28, 16, 12}}) {
      auto r = check_gross_kudla_arch(k1, k2, k3, s, 1, 0.0, 1e-10);
      CHECK(r.pass);
      CHECK(r.relative_discrepancy < 1e-10);
    }
  }
}

TEST_CASE("gross-kudla mode 2: (k,k,0) whittaker-bessel integral") {
  auto r = check_gross_kudla_arch(12, 12, 0, 0.0, 2, {0.2, 0.0}, 1e-6);
  CHECK(r.pass);
  CHECK(r.relative_discrepancy < 1e-6);
  auto ri = check_gross_kudla_arch(12, 12, 0, 0.0, 2, {0.0, 0.35}, 1e-6);
  CHECK(ri.pass);
}

TEST_CASE("ikeda archimedean identity at one point") {
  auto r = check_ikeda_arch(1.0, {0.0, 0.1}, {0.0, 0.2}, {0.0, 0.3}, 1e-6);
  CHECK(r.pass);
  CHECK(r.relative_discrepancy < 1e-6);
  // integrand positivity for real parameters: LHS real positive
  auto rp = check_ikeda_arch(1.0, {0.1, 0.0}, {0.05, 0.0}, {0.0, 0.0}, 1e-5);
  CHECK(rp.lhs.real() > 0.0);
  CHECK(std::abs(rp.lhs.imag()) < 1e-9 * rp.lhs.real());
  CHECK_THROWS(check_ikeda_arch(0.2, {0.4, 0.0}, {0.4, 0.0}, {0.4, 0.0}, 1e-6));
}

TEST_CASE("ransel for Delta (dual-pipeline oracle)") {
  VerifyContext ctx;
  const auto& forms = ctx.forms(12, 1024);
  auto r = check_ransel(ctx, forms[0], 1e-6);
  CHECK(r.pass);
  CHECK(r.relative_discrepancy < 1e-6);
  // verdict recomputable from stored fields
  double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
  bool recomputed = std::abs(r.lhs - r.rhs) / scale <= r.tolerance + (r.lhs_bound + r.rhs_bound) / scale;
  CHECK(recomputed == r.pass);
}

TEST_CASE("ransel rejects non-normalized input") {
  VerifyContext ctx;
  auto forms = cusp_eigenforms(12, 64);
  HoloEigenform f = forms[0];
  for (auto& a : f.a) a *= BigFloat(2.0, 200);  // scale the form
  auto r = check_ransel(ctx, f, 1e-6);
  CHECK(!r.pass);
  CHECK(r.note.find("not Hecke normalized") != std::string::npos);
}

TEST_CASE("report serialization") {
  IdentityReport r;
  r.identity_id = "x";
  r.inputs = "f12";
  r.lhs = {1.0, 0.0};
  r.rhs = {1.0, 1e-9};
  r.tolerance = 1e-6;
  r.relative_discrepancy = 1e-9;
  r.pass = true;
  auto j = r.to_json();
  CHECK(j.find("\"identity_id\":\"x\"") != std::string::npos);
  auto csv = r.csv_row();
  CHECK(csv.find("x,\"f12\",1") == 0);
  CHECK(IdentityReport::csv_header().find("rel_disc") != std::string::npos);
}
