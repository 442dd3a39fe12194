#pragma once

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mfv {

// Arbitrary-precision real backed by mpfr_t. Every value carries its own
// working precision in bits; binary operations compute at the larger of the
// two operand precisions. Rounding is always to nearest.
class BigFloat {
 public:
  BigFloat() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }
  explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  BigFloat(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  BigFloat(long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
  BigFloat(const char* s, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_str(v_, s, 10, MPFR_RNDN); }

  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  std::string str(int digits = 0) const;

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }

  static BigFloat pi(mpfr_prec_t prec) {
    BigFloat r(prec); mpfr_const_pi(r.v_, MPFR_RNDN); return r;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec())); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec())); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec())); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat r(std::max(a.prec(), b.prec())); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
  }
  BigFloat operator-() const { BigFloat r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

  BigFloat& operator+=(const BigFloat& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& b) { mpfr_div(v_, v_, b.v_, MPFR_RNDN); return *this; }

  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.v_, b.v_); }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }

 private:
  mpfr_t v_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat pow(const BigFloat& x, const BigFloat& y);
BigFloat pow_si(const BigFloat& x, long n);
BigFloat sin(const BigFloat& x);
BigFloat cos(const BigFloat& x);
BigFloat sinh(const BigFloat& x);
BigFloat cosh(const BigFloat& x);
BigFloat atan2(const BigFloat& y, const BigFloat& x);

// Complex value over BigFloat. Kept deliberately small: only the operations
// the special-function and AFE code actually needs.
struct BigComplex {
  BigFloat re, im;

  BigComplex() = default;
  explicit BigComplex(mpfr_prec_t prec) : re(prec), im(prec) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  BigComplex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}

  mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  friend BigComplex operator+(const BigComplex& a, const BigComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend BigComplex operator-(const BigComplex& a, const BigComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend BigComplex operator*(const BigFloat& a, const BigComplex& b) { return {a * b.re, a * b.im}; }
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
  BigComplex operator-() const { return {-re, -im}; }
  BigComplex conj() const { return {re, -im}; }

  BigComplex& operator+=(const BigComplex& b) { re += b.re; im += b.im; return *this; }
  BigComplex& operator-=(const BigComplex& b) { re -= b.re; im -= b.im; return *this; }
};

BigFloat abs(const BigComplex& z);
BigComplex exp(const BigComplex& z);
BigComplex log(const BigComplex& z);
BigComplex sqrt(const BigComplex& z);
// x^z for real x > 0.
BigComplex pow(const BigFloat& x, const BigComplex& z);
BigComplex pow(const BigComplex& x, const BigComplex& z);
BigComplex sin(const BigComplex& z);

// Gamma function for complex argument, Spouge's approximation with the
// reflection formula for Re z < 1/2. Relative accuracy tracks the working
// precision up to ~1e-3 of it; the default table is sized for >= 40 digits.
BigComplex gamma(const BigComplex& z);
std::complex<double> gamma_d(std::complex<double> z);
// log|Gamma(z)| + i arg, for magnitude estimates without overflow.
std::complex<double> log_gamma_d(std::complex<double> z);

// Riemann zeta for complex argument, Euler-Maclaurin. Accuracy ~ working
// precision for |Im s| up to a few hundred.
BigComplex riemann_zeta(const BigComplex& s);
std::complex<double> riemann_zeta_d(std::complex<double> s);

// Local archimedean factors, product convention:
//   zeta_R(s) = pi^{-s/2} Gamma(s/2),   zeta_C(s) = zeta_R(s) zeta_R(s+1).
// Note zeta_C(s) = 2 (2pi)^{-s} Gamma(s); the Legendre factor 2 matters and
// is covered by unit tests.
BigComplex zeta_R(const BigComplex& s);
BigComplex zeta_C(const BigComplex& s);
std::complex<double> zeta_R_d(std::complex<double> s);
std::complex<double> zeta_C_d(std::complex<double> s);

// Completed zeta  zeta*(s) = zeta_R(s) zeta(s), simple poles at s = 0, 1.
BigComplex zeta_star(const BigComplex& s);
std::complex<double> zeta_star_d(std::complex<double> s);

// Exact Bernoulli numbers B_0..B_n as (num, den) decimal strings; B_1 = -1/2.
std::vector<std::pair<std::string, std::string>> bernoulli_strings(int n);

// Gauss-Legendre nodes/weights on [-1, 1]; cached by n, thread-safe.
struct GaussLegendre {
  std::vector<double> x, w;
};
const GaussLegendre& gauss_legendre(int n);

// Compensated (Neumaier) accumulation.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double t = s + x;
    c += (std::abs(s) >= std::abs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct KahanSumC {
  KahanSum re, im;
  void add(std::complex<double> z) { re.add(z.real()); im.add(z.imag()); }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace mfv
