#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfv/langlands.hpp"
#include "mfv/qexp.hpp"

namespace mfv {

struct CoeffShortfallError : std::runtime_error {
  std::uint64_t required_n;
  CoeffShortfallError(const std::string& what, std::uint64_t n)
      : std::runtime_error(what), required_n(n) {}
};

struct UnsupportedWeightPattern : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal GL(2) eigenform data the L-function assembly needs; adapters exist
// for holomorphic eigenforms (below) and Maass forms (maass.hpp).
struct GL2Form {
  enum class Kind { Holomorphic, Maass };
  Kind kind = Kind::Holomorphic;
  int weight = 0;       // holomorphic: even k >= 12
  bool conjugate = false;
  double t = 0.0;       // Maass spectral parameter
  int parity = 0;       // Maass: 0 even, 1 odd
  double theta = 0.0;   // coefficient growth exponent guaranteed by the source
  std::string id;
  std::uint64_t coeff_limit = 0;  // satake_at valid for p < coeff_limit
  std::function<SatakePair(std::uint64_t)> satake_at;

  LanglandsParam arch_param() const;
};

GL2Form gl2_from_holo(const HoloEigenform& f, bool conjugate = false);

// Simple pole of the completed function Lambda(s).
struct LambdaPole {
  std::complex<double> s0;
  std::complex<double> residue;
};

struct AfeResult {
  std::complex<double> value;
  double error_bound = 0.0;
  std::uint64_t coeffs_used = 0;
  double wall_ms = 0.0;
};

// Global completed L-function: archimedean parameter (conductor 1 throughout:
// level-1 inputs only), multiplicative Dirichlet coefficients generated from
// the inverse local Euler factors, functional equation Lambda(s) =
// w Lambda(1-s) with real coefficients.
class LSeries {
 public:
  LSeries() = default;

  std::string id;
  int degree = 0;
  LanglandsParam gamma_param;  // archimedean Langlands parameter
  // Root number: hard-coded +1. Every series this module builds sits in one
  // of the paper's level-1 rows whose archimedean-times-finite epsilon equals
  // 1; build_* asserts this against the epsilon table rather than computing a
  // general root number.
  double root_number = 1.0;
  double theta = 0.0;  // |b_n| <= d_degree(n) n^theta bound used for tails
  std::vector<LambdaPole> poles;

  // inverse local factor at p: coefficients of prod_i (1 - alpha_i X), X = p^{-s}
  std::function<std::vector<double>(std::uint64_t)> euler_local;
  std::uint64_t coeff_limit = 0;  // euler_local valid for p < coeff_limit

  // coefficient access (single-writer extension, lock-free reads afterwards)
  void ensure_coeffs(std::uint64_t n_max) const;
  double b(std::uint64_t n) const;
  std::uint64_t coeffs_ready() const;

  // completed gamma factor product at s
  BigComplex gamma_factor(const BigComplex& s) const;

  double analytic_conductor_at(std::complex<double> s0) const;

 private:
  mutable std::mutex mu_;
  mutable std::vector<double> b_;  // b_[n], valid n < b_.size()
};

// L(s, rho_f (x) bar rho_g): degree 4. For f == g the completed function has
// simple poles at s = 1, 0 with residues +/- Lambda_Ad(1) (attached lazily).
std::shared_ptr<LSeries> build_rankin_selberg(const GL2Form& f, const GL2Form& g);

// L(s, Ad rho): degree 3, entire, real coefficients.
std::shared_ptr<LSeries> build_adjoint(const GL2Form& f);

// L(s, rho_1 (x) rho_2 (x) rho_3): degree 8, center s = 1/2, root number +1.
// Weight patterns: (0,0,0), (k,k,0), |k_1| = |k_2| + |k_3| all >= 2.
std::shared_ptr<LSeries> build_triple(const GL2Form& f1, const GL2Form& f2, const GL2Form& f3);

// L(s, rho): degree 2 (even parity only: the level-1 root number of an odd
// Maass form is -1 and the central value vanishes identically).
std::shared_ptr<LSeries> build_standard(const GL2Form& f);

// L(s, Sym^3 rho): degree 4. With L(s, rho)^2 this factors the degree-8
// self-triple and keeps the all-Maass central value at desk scale.
std::shared_ptr<LSeries> build_sym_cube(const GL2Form& f);

// zeta*(s) as a degree-1 LSeries (poles at 1 and 0).
std::shared_ptr<LSeries> build_zeta_star();

// Smoothed approximate functional equation evaluation of Lambda(s0) with a
// certified error bound. Deterministic given (series, s0, eps).
AfeResult afe_value(const LSeries& L, std::complex<double> s0, double eps);

// Direct Dirichlet-series sum of the finite part, for absolute-convergence
// oracles (Re s well above 1 + theta).
std::complex<double> dirichlet_direct(const LSeries& L, std::complex<double> s,
                                      std::uint64_t n_max);

// JSON-lines record for an L-value (External Interfaces).
std::string lvalue_record_json(const LSeries& L, std::complex<double> s0, const AfeResult& r);

}  // namespace mfv
