#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfv/numerics.hpp"

namespace mfv {

// Truncated q-expansion with exact rational coefficients. Coefficients are
// valid for indices n < precision; reading past that is a contract violation,
// never a silent zero.
class QSeries {
 public:
  QSeries() = default;
  QSeries(int weight, int precision);

  int weight() const { return weight_; }
  int precision() const { return precision_; }

  const mpq_class& coeff(int n) const;
  mpq_class& coeff_mut(int n);

  QSeries operator+(const QSeries& o) const;
  QSeries operator-(const QSeries& o) const;
  QSeries operator*(const QSeries& o) const;
  QSeries scaled(const mpq_class& c) const;
  QSeries truncated(int new_precision) const;

  bool is_zero() const;

 private:
  int weight_ = 0;
  int precision_ = 0;
  std::vector<mpq_class> c_;
};

// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, exact.
QSeries eisenstein_qexp(int k, int N);

// Delta = (E4^3 - E6^2)/1728, exact integer coefficients.
QSeries delta_qexp(int N);

// T_p: a_m -> a_{pm} + p^{k-1} a_{m/p}. Output precision floor(N/p).
QSeries hecke_apply(const QSeries& f, std::uint64_t p);

// dim S_k for level 1 (k even >= 0).
int dim_cusp_forms(int k);

struct SatakePair {
  std::complex<double> sdot;   // p^{-sdot}, p^{-sddot} roots of X^2 - lambda_p p^{-1/2} X + 1
  std::complex<double> sddot;
  bool tempered = true;
};

SatakePair satake_params(double lambda_p, std::uint64_t p);

// Closed form for the T_p^{[p^n]} eigenvalue from the Satake pair; analytic
// limit at coincident roots. Satisfies lambda_{p^{n+1}} =
// lambda_p lambda_{p^n} - lambda_{p^{n-1}}.
std::complex<double> lambda_power(const SatakePair& sp, std::uint64_t p, int n);

// Level-1 holomorphic Hecke eigenform, Hecke normalized (a_1 = 1).
// Coefficients are held at ~60 significant digits (exact rationals mapped in
// for one-dimensional spaces; quadratic-field embeddings for dim 2+ come out
// of the high-precision T_2 diagonalization).
struct HoloEigenform {
  int weight = 0;
  int precision = 0;
  std::string id;
  std::vector<BigFloat> a;       // a[n], n < precision, a[0] = 0, a[1] = 1
  std::vector<std::uint64_t> primes;  // primes < precision
  std::map<std::uint64_t, SatakePair> satake;

  double lambda(std::uint64_t n) const;  // unitary a_n / n^{(k-1)/2}
  double a_double(std::uint64_t n) const;
  BigFloat lambda_big(std::uint64_t n) const;
};

// All Hecke eigenforms of S_k, via the Victor-Miller monomial basis in exact
// arithmetic and high-precision diagonalization of T_2. Throws if T_2 has
// (numerically) degenerate eigenvalues.
std::vector<HoloEigenform> cusp_eigenforms(int k, int N = 4096);

// Echelonized exact basis of S_k (q^1 .. q^d pivots).
std::vector<QSeries> victor_miller_basis(int k, int N);

// JSON archive (decimal strings for all coefficients).
std::string eigenform_to_json(const HoloEigenform& f);
HoloEigenform eigenform_from_json(const std::string& json_text);

}  // namespace mfv
