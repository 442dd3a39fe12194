#include "mfv/numerics.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mfv {

std::string BigFloat::str(int digits) const {
  if (digits <= 0) digits = static_cast<int>(prec() * 0.30103) - 2;
  if (digits < 2) digits = 2;
  mpfr_exp_t e;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
  std::string m(s);
  mpfr_free_str(s);
  bool neg = !m.empty() && m[0] == '-';
  std::string digs = neg ? m.substr(1) : m;
  std::string out = (neg ? "-" : "");
  out += digs.substr(0, 1) + "." + digs.substr(1) + "e" + std::to_string(e - 1);
  return out;
}

#define MFV_UNARY(name, fn)                         \
  BigFloat name(const BigFloat& x) {                \
    BigFloat r(x.prec());                           \
    fn(r.raw(), x.raw(), MPFR_RNDN);                \
    return r;                                       \
  }

MFV_UNARY(abs, mpfr_abs)
MFV_UNARY(sqrt, mpfr_sqrt)
MFV_UNARY(exp, mpfr_exp)
MFV_UNARY(log, mpfr_log)
MFV_UNARY(sin, mpfr_sin)
MFV_UNARY(cos, mpfr_cos)
MFV_UNARY(sinh, mpfr_sinh)
MFV_UNARY(cosh, mpfr_cosh)
#undef MFV_UNARY

BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r(std::max(x.prec(), y.prec()));
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

BigFloat pow_si(const BigFloat& x, long n) {
  BigFloat r(x.prec());
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

BigFloat atan2(const BigFloat& y, const BigFloat& x) {
  BigFloat r(std::max(x.prec(), y.prec()));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

BigFloat abs(const BigComplex& z) { return sqrt(z.re * z.re + z.im * z.im); }

BigComplex exp(const BigComplex& z) {
  BigFloat e = exp(z.re);
  return {e * cos(z.im), e * sin(z.im)};
}

BigComplex log(const BigComplex& z) {
  return {log(abs(z)), atan2(z.im, z.re)};
}

BigComplex sqrt(const BigComplex& z) {
  // principal branch
  BigFloat r = abs(z);
  mpfr_prec_t p = z.prec();
  BigFloat half(0.5, p);
  BigFloat u = sqrt((r + z.re) * half);
  BigFloat v = sqrt((r - z.re) * half);
  if (z.im.sign() < 0) v = -v;
  return {u, v};
}

BigComplex pow(const BigFloat& x, const BigComplex& z) {
  BigFloat lx = log(x);
  return exp(BigComplex{z.re * lx, z.im * lx});
}

BigComplex pow(const BigComplex& x, const BigComplex& z) { return exp(z * log(x)); }

BigComplex sin(const BigComplex& z) {
  return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

// ---------------------------------------------------------------------------
// Gamma: Spouge's approximation.
//   Gamma(z+1) = (z+a)^{z+1/2} e^{-(z+a)} [ sqrt(2 pi) + sum_{k=1}^{a-1} c_k/(z+k) ]
//   c_k = (-1)^{k-1}/(k-1)! (a-k)^{k-1/2} e^{a-k}
// Relative error ~ a^{-1/2} (2 pi)^{-(a+1/2)}.
// ---------------------------------------------------------------------------

namespace {

struct SpougeTable {
  int a = 0;
  std::vector<BigFloat> c;  // c[0] = sqrt(2 pi), c[k] as above
};

const SpougeTable& spouge_table(int a, mpfr_prec_t prec) {
  static std::mutex mu;
  static std::map<std::pair<int, mpfr_prec_t>, SpougeTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(a, prec);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  SpougeTable t;
  t.a = a;
  mpfr_prec_t wp = prec + 64;
  BigFloat two_pi = BigFloat(2.0, wp) * BigFloat::pi(wp);
  t.c.push_back(sqrt(two_pi));
  BigFloat fact(1.0, wp);
  for (int k = 1; k < a; ++k) {
    if (k > 1) fact *= BigFloat(static_cast<long>(k - 1), wp);
    BigFloat ak(static_cast<long>(a - k), wp);
    BigFloat ck = pow(ak, BigFloat(k - 0.5, wp)) * exp(ak) / fact;
    if (k % 2 == 0) ck = -ck;
    t.c.push_back(ck);
  }
  return cache.emplace(key, std::move(t)).first->second;
}

int spouge_terms_for(mpfr_prec_t prec) {
  // digits ~ 0.7982*a + 0.5*log10(a); solve crudely with slack.
  double digits = prec * 0.30103 + 4;
  int a = static_cast<int>(digits / 0.795) + 2;
  return std::max(a, 12);
}

BigComplex gamma_spouge_shifted(const BigComplex& zm1, const SpougeTable& t, mpfr_prec_t wp) {
  // computes Gamma(zm1 + 1) for Re(zm1) >= -1/2
  int a = t.a;
  BigComplex s(t.c[0], BigFloat(0.0, wp));
  for (int k = 1; k < a; ++k) {
    BigComplex d = zm1 + BigComplex(static_cast<double>(k), 0.0, wp);
    s += BigComplex{t.c[k], BigFloat(0.0, wp)} / d;
  }
  BigComplex za = zm1 + BigComplex(static_cast<double>(a), 0.0, wp);
  BigComplex e1 = pow(za, zm1 + BigComplex(0.5, 0.0, wp));
  BigComplex e2 = exp(-za);
  return e1 * e2 * s;
}

}  // namespace

BigComplex gamma(const BigComplex& z) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(z.prec(), 96);
  mpfr_prec_t wp = p + 32;
  int a = spouge_terms_for(p);
  const SpougeTable& t = spouge_table(a, wp);

  BigFloat half(0.5, wp);
  if (z.re > half || z.re == half) {
    BigComplex zm1{z.re - BigFloat(1.0, wp), z.im};
    return gamma_spouge_shifted(zm1, t, wp);
  }
  // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1-z))
  BigFloat pi_v = BigFloat::pi(wp);
  BigComplex one_minus_z{BigFloat(1.0, wp) - z.re, -z.im};
  BigComplex g = gamma_spouge_shifted(one_minus_z - BigComplex(1.0, 0.0, wp), t, wp);
  BigComplex s = sin(BigComplex{pi_v * z.re, pi_v * z.im});
  return BigComplex{pi_v, BigFloat(0.0, wp)} / (s * g);
}

std::complex<double> gamma_d(std::complex<double> z) {
  BigComplex bz(z.real(), z.imag(), 128);
  return gamma(bz).to_complex();
}

std::complex<double> log_gamma_d(std::complex<double> z) {
  BigComplex g = gamma(BigComplex(z.real(), z.imag(), 128));
  return {log(abs(g)).to_double(), atan2(g.im, g.re).to_double()};
}

// ---------------------------------------------------------------------------
// Riemann zeta, Euler-Maclaurin:
//   zeta(s) = sum_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2
//           + sum_{k>=1} B_{2k}/(2k)! * (s)_{2k-1} * N^{-s-2k+1}
// ---------------------------------------------------------------------------

namespace {

std::vector<mpq_class> bernoulli_cache_upto(int n) {
  static std::mutex mu;
  static std::vector<mpq_class> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) > n) return cache;
  size_t old = cache.size();
  cache.resize(n + 1);
  for (size_t m = old; m <= static_cast<size_t>(n); ++m) {
    if (m == 0) { cache[0] = 1; continue; }
    // sum_{j=0}^{m} binom(m+1, j) B_j = 0
    mpq_class acc = 0;
    mpz_class binom = 1;  // binom(m+1, 0)
    for (size_t j = 0; j < m; ++j) {
      acc += mpq_class(binom) * cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    // binom now = binom(m+1, m) = m+1
    cache[m] = -acc / mpq_class(binom);
  }
  return cache;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> bernoulli_strings(int n) {
  auto b = bernoulli_cache_upto(n);
  std::vector<std::pair<std::string, std::string>> out;
  for (int i = 0; i <= n; ++i)
    out.emplace_back(b[i].get_num().get_str(), b[i].get_den().get_str());
  return out;
}

BigComplex riemann_zeta(const BigComplex& s) {
  mpfr_prec_t p = std::max<mpfr_prec_t>(s.prec(), 96);
  mpfr_prec_t wp = p + 32;
  double sig = s.re.to_double();
  double t = std::abs(s.im.to_double());

  if (sig < -0.5) {
    // functional equation: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    BigComplex one_minus_s{BigFloat(1.0, wp) - s.re, -s.im};
    BigFloat pi_v = BigFloat::pi(wp);
    BigComplex half_pi_s{s.re * (pi_v * BigFloat(0.5, wp)), s.im * (pi_v * BigFloat(0.5, wp))};
    BigComplex f = pow(BigFloat(2.0, wp), s) * pow(pi_v, s - BigComplex(1.0, 0.0, wp)) *
                   sin(half_pi_s) * gamma(one_minus_s) * riemann_zeta(one_minus_s);
    return f;
  }

  double digits = p * 0.30103;
  int N = std::max(16, static_cast<int>(digits * 0.8 + 0.6 * t) + 8);
  int K = std::max(10, static_cast<int>(digits * 0.6) + 6);
  auto bern = bernoulli_cache_upto(2 * K + 2);

  BigComplex sum(wp);
  for (int n = 1; n < N; ++n) sum += pow(BigFloat(static_cast<long>(n), wp), -s);
  BigFloat Nf(static_cast<long>(N), wp);
  BigComplex Nms = pow(Nf, -s);  // N^-s
  // N^{1-s}/(s-1)
  sum += BigComplex{Nms.re * Nf, Nms.im * Nf} / (s - BigComplex(1.0, 0.0, wp));
  sum += BigFloat(0.5, wp) * Nms;

  // tail: term_k = B_{2k}/(2k)! * prod_{j=0}^{2k-2}(s+j) * N^{-s-2k+1}
  BigComplex poch(1.0, 0.0, wp);        // rising factorial (s)_{2k-1}
  BigComplex Npow = Nms;                 // N^{-s-2k+1} tracker, starts N^{-s}*N
  Npow = BigComplex{Npow.re * Nf, Npow.im * Nf};
  BigFloat fact(1.0, wp);
  int j = 0;
  for (int k = 1; k <= K; ++k) {
    while (j < 2 * k - 1) {
      poch = poch * (s + BigComplex(static_cast<double>(j), 0.0, wp));
      ++j;
    }
    fact *= BigFloat(static_cast<long>(2 * k - 1), wp);
    fact *= BigFloat(static_cast<long>(2 * k), wp);
    Npow = Npow / BigComplex{Nf * Nf, BigFloat(0.0, wp)};
    mpq_class b = bern[2 * k];
    BigFloat bq(b.get_num().get_str().c_str(), wp);
    bq /= BigFloat(b.get_den().get_str().c_str(), wp);
    sum += BigComplex{bq / fact, BigFloat(0.0, wp)} * poch * Npow;
  }
  return sum;
}

std::complex<double> riemann_zeta_d(std::complex<double> s) {
  return riemann_zeta(BigComplex(s.real(), s.imag(), 128)).to_complex();
}

BigComplex zeta_R(const BigComplex& s) {
  mpfr_prec_t wp = std::max<mpfr_prec_t>(s.prec(), 128);
  BigFloat pi_v = BigFloat::pi(wp);
  BigComplex half_s{s.re * BigFloat(0.5, wp), s.im * BigFloat(0.5, wp)};
  return pow(pi_v, -half_s) * gamma(half_s);
}

BigComplex zeta_C(const BigComplex& s) {
  return zeta_R(s) * zeta_R(s + BigComplex(1.0, 0.0, s.prec()));
}

std::complex<double> zeta_R_d(std::complex<double> s) {
  return zeta_R(BigComplex(s.real(), s.imag(), 128)).to_complex();
}

std::complex<double> zeta_C_d(std::complex<double> s) {
  return zeta_C(BigComplex(s.real(), s.imag(), 128)).to_complex();
}

BigComplex zeta_star(const BigComplex& s) { return zeta_R(s) * riemann_zeta(s); }

std::complex<double> zeta_star_d(std::complex<double> s) {
  return zeta_star(BigComplex(s.real(), s.imag(), 160)).to_complex();
}

// ---------------------------------------------------------------------------
// Gauss-Legendre nodes via Newton on P_n, cached per order.
// ---------------------------------------------------------------------------

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    g.x[i] = x;
    g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(g)).first->second;
}

}  // namespace mfv
