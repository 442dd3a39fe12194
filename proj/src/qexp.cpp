#include "mfv/qexp.hpp"

#include <json.hpp>

#include <algorithm>
#include <stdexcept>

#include "mfv/parallel.hpp"

namespace mfv {

QSeries::QSeries(int weight, int precision) : weight_(weight), precision_(precision) {
  if (precision < 1) throw std::invalid_argument("QSeries: precision must be >= 1");
  c_.assign(static_cast<size_t>(precision), mpq_class(0));
}

const mpq_class& QSeries::coeff(int n) const {
  if (n < 0 || n >= precision_)
    throw std::out_of_range("QSeries: coefficient index " + std::to_string(n) +
                            " outside precision " + std::to_string(precision_));
  return c_[static_cast<size_t>(n)];
}

mpq_class& QSeries::coeff_mut(int n) {
  if (n < 0 || n >= precision_) throw std::out_of_range("QSeries: coefficient index");
  return c_[static_cast<size_t>(n)];
}

QSeries QSeries::operator+(const QSeries& o) const {
  if (weight_ != o.weight_) throw std::invalid_argument("QSeries: weight mismatch in +");
  QSeries r(weight_, std::min(precision_, o.precision_));
  for (int n = 0; n < r.precision_; ++n) r.c_[n] = c_[n] + o.c_[n];
  return r;
}

QSeries QSeries::operator-(const QSeries& o) const {
  if (weight_ != o.weight_) throw std::invalid_argument("QSeries: weight mismatch in -");
  QSeries r(weight_, std::min(precision_, o.precision_));
  for (int n = 0; n < r.precision_; ++n) r.c_[n] = c_[n] - o.c_[n];
  return r;
}

QSeries QSeries::operator*(const QSeries& o) const {
  int N = std::min(precision_, o.precision_);
  QSeries r(weight_ + o.weight_, N);

  // Clear denominators once, convolve in mpz, restore at the end. Our series
  // have a single small common denominator (Eisenstein normalizations), so
  // this is effectively an integer convolution.
  mpz_class d1 = 1, d2 = 1;
  for (const auto& q : c_) d1 = lcm(d1, q.get_den());
  for (const auto& q : o.c_) d2 = lcm(d2, q.get_den());
  std::vector<mpz_class> A(static_cast<size_t>(N)), B(static_cast<size_t>(N)),
      C(static_cast<size_t>(N));
  for (int n = 0; n < N; ++n) {
    mpq_class t = c_[n] * d1;
    A[n] = t.get_num();
    t = o.c_[n] * d2;
    B[n] = t.get_num();
  }
  parallel_for(N, [&](std::int64_t n) {
    mpz_class acc = 0;
    for (int i = 0; i <= n; ++i)
      if (A[i] != 0 && B[n - i] != 0) mpz_addmul(acc.get_mpz_t(), A[i].get_mpz_t(), B[n - i].get_mpz_t());
    C[static_cast<size_t>(n)] = acc;
  });
  mpz_class d = d1 * d2;
  for (int n = 0; n < N; ++n) {
    r.c_[n] = mpq_class(C[n], d);
    r.c_[n].canonicalize();
  }
  return r;
}

QSeries QSeries::scaled(const mpq_class& s) const {
  QSeries r(weight_, precision_);
  for (int n = 0; n < precision_; ++n) r.c_[n] = c_[n] * s;
  return r;
}

QSeries QSeries::truncated(int new_precision) const {
  if (new_precision > precision_) throw std::invalid_argument("QSeries: cannot extend precision");
  QSeries r(weight_, new_precision);
  for (int n = 0; n < new_precision; ++n) r.c_[n] = c_[n];
  return r;
}

bool QSeries::is_zero() const {
  for (const auto& q : c_)
    if (q != 0) return false;
  return true;
}

namespace {

// B_k as exact rational, from the shared Bernoulli table.
mpq_class bernoulli_q(int k) {
  auto b = bernoulli_strings(k);
  return mpq_class(mpz_class(b[k].first), mpz_class(b[k].second));
}

}  // namespace

QSeries eisenstein_qexp(int k, int N) {
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("eisenstein_qexp: k must be even and >= 4");
  if (N < 2) throw std::invalid_argument("eisenstein_qexp: N must be >= 2");
  QSeries e(k, N);
  e.coeff_mut(0) = 1;
  // sigma_{k-1} by sieving over divisors
  std::vector<mpz_class> sig(static_cast<size_t>(N), mpz_class(0));
  for (int d = 1; d < N; ++d) {
    mpz_class dk;
    mpz_ui_pow_ui(dk.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k - 1));
    for (int n = d; n < N; n += d) sig[n] += dk;
  }
  mpq_class c = mpq_class(-2 * k) / bernoulli_q(k);
  for (int n = 1; n < N; ++n) e.coeff_mut(n) = c * sig[n];
  return e;
}

QSeries delta_qexp(int N) {
  QSeries e4 = eisenstein_qexp(4, N);
  QSeries e6 = eisenstein_qexp(6, N);
  QSeries num = e4 * e4 * e4 - e6 * e6;
  return num.scaled(mpq_class(1, 1728));
}

QSeries hecke_apply(const QSeries& f, std::uint64_t p) {
  int Nout = f.precision() / static_cast<int>(p);
  if (Nout < 1)
    throw std::invalid_argument("hecke_apply: input precision " + std::to_string(f.precision()) +
                                " insufficient for p = " + std::to_string(p));
  QSeries r(f.weight(), Nout);
  mpz_class pk1;
  mpz_ui_pow_ui(pk1.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(f.weight() - 1));
  for (int m = 0; m < Nout; ++m) {
    mpq_class v = f.coeff(m * static_cast<int>(p));
    if (m % static_cast<int>(p) == 0) v += mpq_class(pk1) * f.coeff(m / static_cast<int>(p));
    r.coeff_mut(m) = v;
  }
  return r;
}

int dim_cusp_forms(int k) {
  if (k < 0 || k % 2 != 0) return 0;
  if (k < 12) return 0;
  int dim_m = (k % 12 == 2) ? k / 12 : k / 12 + 1;
  return dim_m - 1;
}

std::vector<QSeries> victor_miller_basis(int k, int N) {
  if (k % 2 != 0 || k < 0) throw std::invalid_argument("victor_miller_basis: k must be even >= 0");
  std::vector<QSeries> mono;
  // Delta^c E4^a E6^b with 4a + 6b = k - 12c, b in {0,1}; one monomial per
  // admissible c >= 1 gives a triangular system in the q^c coefficients.
  QSeries delta = delta_qexp(N);
  QSeries e4 = eisenstein_qexp(4, N);
  QSeries e6 = eisenstein_qexp(6, N);
  QSeries dpow = delta;
  for (int c = 1; 12 * c <= k; ++c) {
    if (c > 1) dpow = dpow * delta;
    int w = k - 12 * c;
    int b = (w % 4 == 2) ? 1 : 0;
    if (w - 6 * b < 0 || (w - 6 * b) % 4 != 0) continue;  // weight-2 slot, no form
    int a = (w - 6 * b) / 4;
    QSeries m = dpow;
    for (int i = 0; i < a; ++i) m = m * e4;
    for (int i = 0; i < b; ++i) m = m * e6;
    mono.push_back(m);
  }
  int d = static_cast<int>(mono.size());
  if (d != dim_cusp_forms(k))
    throw std::logic_error("victor_miller_basis: monomial count disagrees with dimension formula");
  // Gauss-Jordan on coefficients q^1..q^d -> g_j = q^j + O(q^{d+1}).
  for (int j = 0; j < d; ++j) {
    int piv = -1;
    for (int i = j; i < d; ++i)
      if (mono[i].coeff(j + 1) != 0) { piv = i; break; }
    if (piv < 0) throw std::logic_error("victor_miller_basis: singular coefficient block");
    std::swap(mono[j], mono[piv]);
    mono[j] = mono[j].scaled(mpq_class(1) / mono[j].coeff(j + 1));
    for (int i = 0; i < d; ++i) {
      if (i == j) continue;
      mpq_class f = mono[i].coeff(j + 1);
      if (f != 0) mono[i] = mono[i] - mono[j].scaled(f);
    }
  }
  return mono;
}

SatakePair satake_params(double lambda_p, std::uint64_t p) {
  // lambda_p is the unitary eigenvalue a_p / p^{(k-1)/2}; the coset-normalized
  // T_p(p,1) eigenvalue is sqrt(p) * lambda_p, so the Satake roots
  // p^{-sdot}, p^{-sddot} solve X^2 - lambda_p X + 1 and are unimodular
  // exactly on the tempered branch |lambda_p| <= 2.
  SatakePair sp;
  double lt = lambda_p;
  double logp = std::log(static_cast<double>(p));
  std::complex<double> x1, x2;
  if (std::abs(lt) <= 2.0) {
    sp.tempered = true;
    double h = lt / 2.0;
    double s = std::sqrt(std::max(0.0, 1.0 - h * h));
    x1 = {h, s};
    x2 = {h, -s};
  } else {
    sp.tempered = false;
    double disc = std::sqrt(lt * lt - 4.0);
    x1 = {(lt - disc) / 2.0, 0.0};  // |x1| < 1 so Re sdot > 0
    x2 = {(lt + disc) / 2.0, 0.0};
    if (std::abs(x1) > std::abs(x2)) std::swap(x1, x2);
  }
  sp.sdot = -std::log(x1) / logp;
  sp.sddot = -std::log(x2) / logp;
  // tempered branch: Im(sdot log p) in [0, pi]
  if (sp.tempered && std::imag(sp.sdot * logp) < 0.0) std::swap(sp.sdot, sp.sddot);
  return sp;
}

std::complex<double> lambda_power(const SatakePair& sp, std::uint64_t p, int n) {
  // Unitary T_{p^n} eigenvalue (alpha^{n+1} - beta^{n+1})/(alpha - beta); the
  // coset-normalized eigenvalue carries an extra p^{n/2} which the caller's
  // a_{p^n}/p^{n(k-1)/2} comparison already divides out.
  if (n < 0) throw std::invalid_argument("lambda_power: n must be >= 0");
  if (n == 0) return 1.0;
  double logp = std::log(static_cast<double>(p));
  std::complex<double> alpha = std::exp(-sp.sdot * logp);
  std::complex<double> beta = std::exp(-sp.sddot * logp);
  if (std::abs(alpha - beta) < 1e-8) {
    // removable singularity
    return static_cast<double>(n + 1) * std::pow(alpha, n);
  }
  return (std::pow(alpha, n + 1) - std::pow(beta, n + 1)) / (alpha - beta);
}

double HoloEigenform::a_double(std::uint64_t n) const {
  if (n >= static_cast<std::uint64_t>(precision)) throw std::out_of_range("HoloEigenform: a_n index");
  return a[n].to_double();
}

BigFloat HoloEigenform::lambda_big(std::uint64_t n) const {
  if (n >= static_cast<std::uint64_t>(precision)) throw std::out_of_range("HoloEigenform: a_n index");
  mpfr_prec_t p = a[n].prec();
  BigFloat nf(static_cast<long>(n), p);
  return a[n] / pow(nf, BigFloat((weight - 1) / 2.0, p));
}

double HoloEigenform::lambda(std::uint64_t n) const { return lambda_big(n).to_double(); }

namespace {

constexpr mpfr_prec_t kFormPrec = 200;  // ~60 digits

BigFloat big_from_mpq(const mpq_class& q, mpfr_prec_t prec) {
  BigFloat r(prec);
  mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

std::vector<std::uint64_t> primes_below(std::uint64_t n) {
  std::vector<bool> is(n, true);
  std::vector<std::uint64_t> ps;
  for (std::uint64_t i = 2; i < n; ++i) {
    if (!is[i]) continue;
    ps.push_back(i);
    for (std::uint64_t j = i * i; j < n; j += i) is[j] = false;
  }
  return ps;
}

// Characteristic polynomial of an exact rational matrix (Faddeev-LeVerrier).
std::vector<mpq_class> char_poly(const std::vector<std::vector<mpq_class>>& m) {
  int d = static_cast<int>(m.size());
  std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d, mpq_class(0)));
  std::vector<mpq_class> c(static_cast<size_t>(d) + 1, mpq_class(0));
  c[d] = 1;
  // M_1 = A, c_{d-1} = -tr(A); M_{k+1} = A (M_k + c_{d-k} I)
  std::vector<std::vector<mpq_class>> Mk = m;
  for (int kstep = 1; kstep <= d; ++kstep) {
    mpq_class tr = 0;
    for (int i = 0; i < d; ++i) tr += Mk[i][i];
    c[d - kstep] = -tr / kstep;
    if (kstep == d) break;
    for (int i = 0; i < d; ++i) Mk[i][i] += c[d - kstep];
    std::vector<std::vector<mpq_class>> next(d, std::vector<mpq_class>(d, mpq_class(0)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) next[i][j] += m[i][l] * Mk[l][j];
    Mk = std::move(next);
  }
  return c;  // c[0] + c[1] x + ... + c[d] x^d
}

BigFloat poly_eval(const std::vector<mpq_class>& c, const BigFloat& x) {
  BigFloat acc(0.0, x.prec());
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
    acc = acc * x + big_from_mpq(c[i], x.prec());
  return acc;
}

// All real roots of a monic exact polynomial with distinct real roots,
// refined to full precision by bisection.
std::vector<BigFloat> real_roots(const std::vector<mpq_class>& c, mpfr_prec_t prec) {
  int d = static_cast<int>(c.size()) - 1;
  // Cauchy bound
  double bound = 1.0;
  for (int i = 0; i < d; ++i)
    bound = std::max(bound, std::abs(mpq_class(c[i] / c[d]).get_d()));
  bound += 1.0;
  // locate sign changes on a fine grid (doubles), then bisect in BigFloat
  auto eval_d = [&](double x) {
    double acc = 0;
    for (int i = d; i >= 0; --i) acc = acc * x + c[i].get_d();
    return acc;
  };
  std::vector<std::pair<double, double>> brackets;
  int grid = 4000;
  double prev_x = -bound, prev_f = eval_d(prev_x);
  for (int i = 1; i <= grid; ++i) {
    double x = -bound + 2 * bound * i / grid;
    double f = eval_d(x);
    if (prev_f == 0.0) brackets.emplace_back(prev_x - 1e-9, prev_x + 1e-9);
    else if ((prev_f < 0) != (f < 0)) brackets.emplace_back(prev_x, x);
    prev_x = x;
    prev_f = f;
  }
  if (static_cast<int>(brackets.size()) != d)
    throw std::runtime_error("real_roots: failed to isolate " + std::to_string(d) +
                             " real roots (degenerate Hecke eigenvalues?)");
  std::vector<BigFloat> roots;
  for (auto [lo, hi] : brackets) {
    BigFloat a(lo, prec), b(hi, prec);
    BigFloat fa = poly_eval(c, a);
    for (int it = 0; it < static_cast<int>(prec) + 8; ++it) {
      BigFloat mid = (a + b) * BigFloat(0.5, prec);
      BigFloat fm = poly_eval(c, mid);
      if (fm.is_zero()) { a = mid; b = mid; break; }
      if ((fa.sign() < 0) == (fm.sign() < 0)) { a = mid; fa = fm; }
      else b = mid;
    }
    roots.push_back((a + b) * BigFloat(0.5, prec));
  }
  return roots;
}

}  // namespace

std::vector<HoloEigenform> cusp_eigenforms(int k, int N) {
  if (k % 2 != 0 || k < 12) {
    if (dim_cusp_forms(k) == 0) return {};
    throw std::invalid_argument("cusp_eigenforms: k must be even >= 12");
  }
  int d = dim_cusp_forms(k);
  if (d == 0) return {};

  // basis needs 2*(d+1) coefficients beyond what T_2 consumes
  int Nb = std::max(N, 2 * (d + 2));
  std::vector<QSeries> basis = victor_miller_basis(k, Nb);

  std::vector<HoloEigenform> out;
  std::vector<std::uint64_t> ps = primes_below(static_cast<std::uint64_t>(Nb));

  if (d == 1) {
    HoloEigenform f;
    f.weight = k;
    f.precision = Nb;
    f.id = "f" + std::to_string(k);
    f.a.reserve(Nb);
    for (int n = 0; n < Nb; ++n) f.a.push_back(big_from_mpq(basis[0].coeff(n), kFormPrec));
    f.primes = ps;
    for (auto p : ps) f.satake[p] = satake_params(f.lambda(p), p);
    out.push_back(std::move(f));
    return out;
  }

  // T_2 matrix in echelon basis: M[j][i] = [q^{j+1}] T_2 g_i
  std::vector<std::vector<mpq_class>> M(d, std::vector<mpq_class>(d));
  for (int i = 0; i < d; ++i) {
    QSeries tg = hecke_apply(basis[i], 2);
    for (int j = 0; j < d; ++j) M[j][i] = tg.coeff(j + 1);
  }
  std::vector<mpq_class> cp = char_poly(M);
  std::vector<BigFloat> eig = real_roots(cp, kFormPrec);
  // distinctness guard
  for (size_t i = 0; i + 1 < eig.size(); ++i)
    if (abs(eig[i] - eig[i + 1]).to_double() < 1e-20)
      throw std::runtime_error("cusp_eigenforms: T_2 eigenvalues degenerate within tolerance");

  char suffix = 'a';
  for (const BigFloat& lam : eig) {
    // solve (M - lam I) v = 0 in BigFloat; normalize v_0 = a_1 = 1
    std::vector<std::vector<BigFloat>> A(d, std::vector<BigFloat>(d, BigFloat(kFormPrec)));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        A[i][j] = big_from_mpq(M[i][j], kFormPrec);
        if (i == j) A[i][j] -= lam;
      }
    // Gaussian elimination with partial pivoting; nullspace vector
    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i) perm[i] = i;
    int rank = 0;
    std::vector<int> pivcol;
    for (int col = 0; col < d && rank < d; ++col) {
      int piv = -1;
      BigFloat best(0.0, kFormPrec);
      for (int r = rank; r < d; ++r)
        if (abs(A[r][col]) > best) { best = abs(A[r][col]); piv = r; }
      if (piv < 0 || best.to_double() < 1e-45) continue;
      std::swap(A[rank], A[piv]);
      for (int r = 0; r < d; ++r) {
        if (r == rank) continue;
        BigFloat f = A[r][col] / A[rank][col];
        for (int cc = col; cc < d; ++cc) A[r][cc] -= f * A[rank][cc];
      }
      pivcol.push_back(col);
      ++rank;
    }
    if (rank != d - 1) throw std::runtime_error("cusp_eigenforms: unexpected eigenspace dimension");
    int freecol = 0;
    {
      std::vector<bool> isp(d, false);
      for (int c : pivcol) isp[c] = true;
      for (int c = 0; c < d; ++c)
        if (!isp[c]) { freecol = c; break; }
    }
    std::vector<BigFloat> v(d, BigFloat(0.0, kFormPrec));
    v[freecol] = BigFloat(1.0, kFormPrec);
    for (int r = rank - 1; r >= 0; --r)
      v[pivcol[r]] = -(A[r][freecol]) / A[r][pivcol[r]];

    HoloEigenform f;
    f.weight = k;
    f.precision = Nb;
    f.id = "f" + std::to_string(k) + std::string(1, suffix++);
    // a_n = sum_c v_c [q^n] g_c, rescaled so a_1 = 1
    BigFloat a1 = v[0];
    f.a.reserve(Nb);
    for (int n = 0; n < Nb; ++n) {
      BigFloat acc(0.0, kFormPrec);
      for (int c = 0; c < d; ++c) {
        if (v[c].is_zero()) continue;
        acc += v[c] * big_from_mpq(basis[c].coeff(n), kFormPrec);
      }
      f.a.push_back(acc / a1);
    }
    f.primes = ps;
    for (auto p : ps) f.satake[p] = satake_params(f.lambda(p), p);
    out.push_back(std::move(f));
  }
  return out;
}

std::string eigenform_to_json(const HoloEigenform& f) {
  nlohmann::json j;
  j["weight"] = f.weight;
  j["precision"] = f.precision;
  j["id"] = f.id;
  std::vector<std::string> coeffs;
  coeffs.reserve(f.a.size());
  for (const auto& x : f.a) coeffs.push_back(x.str(50));
  j["coefficients"] = coeffs;
  nlohmann::json sat;
  for (const auto& [p, sp] : f.satake)
    sat[std::to_string(p)] = {sp.sdot.real(), sp.sdot.imag()};
  j["satake"] = sat;
  return j.dump(1);
}

HoloEigenform eigenform_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  HoloEigenform f;
  f.weight = j.at("weight").get<int>();
  f.precision = j.at("precision").get<int>();
  f.id = j.value("id", "f" + std::to_string(f.weight));
  for (const auto& s : j.at("coefficients"))
    f.a.emplace_back(s.get<std::string>().c_str(), kFormPrec);
  if (static_cast<int>(f.a.size()) != f.precision)
    throw std::runtime_error("eigenform_from_json: coefficient count != precision");
  f.primes = primes_below(static_cast<std::uint64_t>(f.precision));
  for (auto p : f.primes) f.satake[p] = satake_params(f.lambda(p), p);
  return f;
}

}  // namespace mfv
