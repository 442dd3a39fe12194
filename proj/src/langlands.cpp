#include "mfv/langlands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mfv {

namespace {

BigComplex bc(std::complex<double> z) { return BigComplex(z.real(), z.imag(), kLangPrec); }

double re_d(const BigComplex& z) { return z.re.to_double(); }
double im_d(const BigComplex& z) { return z.im.to_double(); }

// reduce Im(s) into (-pi/log p, pi/log p]
BigComplex reduce_mod_period(const BigComplex& s, std::uint64_t p) {
  double period = 2.0 * M_PI / std::log(static_cast<double>(p));
  double im = im_d(s);
  double k = std::floor(im / period + 0.5);
  if (k == 0.0) return s;
  BigFloat shift = BigFloat(k, kLangPrec) *
                   (BigFloat(2.0, kLangPrec) * BigFloat::pi(kLangPrec) /
                    log(BigFloat(static_cast<double>(p), kLangPrec)));
  return {s.re, s.im - shift};
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

LanglandsParam::LanglandsParam(std::uint64_t place, std::vector<Factor> factors)
    : place_(place), f_(std::move(factors)) {
  canonicalize();
}

void LanglandsParam::canonicalize() {
  std::vector<Factor> out;
  for (Factor& f : f_) {
    if (place_ == 0) {
      if (f.kind == FactorKind::Padic) throw std::invalid_argument("p-adic factor at infinity");
      if (f.kind == FactorKind::Arch2) {
        if (f.l < 0) f.l = -f.l;  // (s,l)^2 ~ (s,-l)^2
        if (f.l == 0) {           // (s,0)^2 ~ (s,0)^1 + (s,1)^1
          out.push_back(Factor{FactorKind::Arch1, f.s, 0, 0, 1});
          out.push_back(Factor{FactorKind::Arch1, f.s, 1, 0, 1});
          continue;
        }
      } else {
        f.delta = ((f.delta % 2) + 2) % 2;
      }
    } else {
      if (f.kind != FactorKind::Padic) throw std::invalid_argument("archimedean factor at finite place");
      if (f.n < 1) throw std::invalid_argument("sp^n with n < 1");
      f.s = reduce_mod_period(f.s, place_);
    }
    out.push_back(f);
  }
  auto key = [](const Factor& f) {
    int kindrank = f.kind == FactorKind::Arch1 ? 0 : (f.kind == FactorKind::Arch2 ? 1 : 2);
    int aux = f.kind == FactorKind::Arch1 ? f.delta : (f.kind == FactorKind::Arch2 ? f.l : f.n);
    return std::make_tuple(kindrank, aux, f.s.re.to_double(), f.s.im.to_double());
  };
  std::sort(out.begin(), out.end(), [&](const Factor& a, const Factor& b) { return key(a) < key(b); });
  f_ = std::move(out);
}

int LanglandsParam::degree() const {
  int d = 0;
  for (const Factor& f : f_) d += f.degree();
  return d;
}

LanglandsParam LanglandsParam::holomorphic_arch(int k) {
  if (k < 2) throw std::invalid_argument("holomorphic_arch: k >= 2");
  return LanglandsParam(0, {Factor{FactorKind::Arch2, bc(0.0), 0, k - 1, 1}});
}

LanglandsParam LanglandsParam::maass_arch(std::complex<double> s, int delta) {
  return LanglandsParam(0, {Factor{FactorKind::Arch1, bc(s), delta, 0, 1},
                            Factor{FactorKind::Arch1, bc(-s), delta, 0, 1}});
}

LanglandsParam LanglandsParam::unramified_padic(std::uint64_t p, std::complex<double> sdot,
                                                std::complex<double> sddot) {
  return LanglandsParam(p, {Factor{FactorKind::Padic, bc(sdot), 0, 0, 1},
                            Factor{FactorKind::Padic, bc(sddot), 0, 0, 1}});
}

LanglandsParam LanglandsParam::special_padic(std::uint64_t p, std::complex<double> s, int n) {
  return LanglandsParam(p, {Factor{FactorKind::Padic, bc(s), 0, 0, n}});
}

LanglandsParam LanglandsParam::trivial(std::uint64_t place) {
  if (place == 0) return LanglandsParam(0, {Factor{FactorKind::Arch1, bc(0.0), 0, 0, 1}});
  return LanglandsParam(place, {Factor{FactorKind::Padic, bc(0.0), 0, 0, 1}});
}

std::string LanglandsParam::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const Factor& f : f_) {
    if (!first) os << " + ";
    first = false;
    auto fmt_s = [&](const BigComplex& s) {
      double re = re_d(s), im = im_d(s);
      std::ostringstream t;
      if (im == 0.0) t << re;
      else if (re == 0.0) t << im << "i";
      else t << re << (im > 0 ? "+" : "") << im << "i";
      return t.str();
    };
    switch (f.kind) {
      case FactorKind::Arch1: os << "(" << fmt_s(f.s) << "," << f.delta << ")^1_R"; break;
      case FactorKind::Arch2: os << "(" << fmt_s(f.s) << "," << f.l << ")^2_R"; break;
      case FactorKind::Padic:
        os << "||.||^{" << fmt_s(f.s) << "}";
        if (f.n >= 2) os << "(x)sp^" << f.n;
        break;
    }
  }
  return os.str();
}

LanglandsParam direct_sum(const LanglandsParam& a, const LanglandsParam& b) {
  if (a.place() != b.place()) throw std::invalid_argument("direct_sum: place mismatch");
  std::vector<Factor> f = a.factors();
  for (const Factor& g : b.factors()) f.push_back(g);
  return LanglandsParam(a.place(), std::move(f));
}

namespace {

void tensor_pair(std::uint64_t place, const Factor& a, const Factor& b, std::vector<Factor>& out) {
  if (place == 0) {
    if (a.kind == FactorKind::Arch1 && b.kind == FactorKind::Arch1) {
      out.push_back(Factor{FactorKind::Arch1, a.s + b.s, (a.delta + b.delta) % 2, 0, 1});
      return;
    }
    if (a.kind == FactorKind::Arch2 && b.kind == FactorKind::Arch2) {
      out.push_back(Factor{FactorKind::Arch2, a.s + b.s, 0, a.l + b.l, 1});
      out.push_back(Factor{FactorKind::Arch2, a.s + b.s, 0, a.l - b.l, 1});
      return;
    }
    // mixed 1 (x) 2
    const Factor& one = a.kind == FactorKind::Arch1 ? a : b;
    const Factor& two = a.kind == FactorKind::Arch1 ? b : a;
    out.push_back(Factor{FactorKind::Arch2, one.s + two.s, 0, two.l, 1});
    return;
  }
  // sp^m (x) sp^n = sum_{i=0}^{n-1} ||.||^i sp^{m+n-2i-1},  m >= n
  int m = std::max(a.n, b.n), n = std::min(a.n, b.n);
  for (int i = 0; i < n; ++i) {
    BigComplex s = a.s + b.s + BigComplex(static_cast<double>(i), 0.0, kLangPrec);
    out.push_back(Factor{FactorKind::Padic, s, 0, 0, m + n - 2 * i - 1});
  }
}

}  // namespace

LanglandsParam tensor(const LanglandsParam& a, const LanglandsParam& b) {
  if (a.place() != b.place()) throw std::invalid_argument("tensor: place mismatch");
  std::vector<Factor> out;
  for (const Factor& fa : a.factors())
    for (const Factor& fb : b.factors()) tensor_pair(a.place(), fa, fb, out);
  return LanglandsParam(a.place(), std::move(out));
}

LanglandsParam dual(const LanglandsParam& a) {
  std::vector<Factor> out;
  for (Factor f : a.factors()) {
    if (f.kind == FactorKind::Padic) {
      // (sp^n)^dual = ||.||^{1-n} sp^n, so the twist exponent s -> 1-n-s
      f.s = BigComplex(static_cast<double>(1 - f.n), 0.0, kLangPrec) - f.s;
    } else {
      f.s = -f.s;
    }
    out.push_back(f);
  }
  return LanglandsParam(a.place(), std::move(out));
}

bool params_equal(const LanglandsParam& a, const LanglandsParam& b, double tol) {
  if (a.place() != b.place()) return false;
  if (a.factors().size() != b.factors().size()) return false;
  for (size_t i = 0; i < a.factors().size(); ++i) {
    const Factor &fa = a.factors()[i], &fb = b.factors()[i];
    if (fa.kind != fb.kind || fa.delta != fb.delta || fa.l != fb.l || fa.n != fb.n) return false;
    BigFloat d = abs(fa.s - fb.s);
    if (d.to_double() > tol) return false;
  }
  return true;
}

LanglandsParam adjoint(const LanglandsParam& a) {
  if (a.degree() != 2) throw std::invalid_argument("adjoint: degree-2 parameter required");
  LanglandsParam t = tensor(a, dual(a));
  std::vector<Factor> f = t.factors();
  // remove exactly one trivial factor
  const double tol = 1e-30;
  for (size_t i = 0; i < f.size(); ++i) {
    const Factor& x = f[i];
    bool trivial = false;
    if (x.kind == FactorKind::Arch1)
      trivial = x.delta == 0 && abs(x.s).to_double() < tol;
    else if (x.kind == FactorKind::Padic)
      trivial = x.n == 1 && abs(x.s).to_double() < tol;  // exponent already reduced mod period
    if (trivial) {
      f.erase(f.begin() + static_cast<long>(i));
      return LanglandsParam(a.place(), std::move(f));
    }
  }
  throw std::logic_error("adjoint: no trivial factor in rho (x) rho^dual (tensor-rule bug)");
}

BigComplex local_L(const BigComplex& s, const LanglandsParam& a) {
  mpfr_prec_t wp = std::max<mpfr_prec_t>(s.prec(), kLangPrec);
  BigComplex prod(1.0, 0.0, wp);
  for (const Factor& f : a.factors()) {
    if (f.kind == FactorKind::Arch1) {
      BigComplex arg = s + f.s + BigComplex(static_cast<double>(f.delta), 0.0, wp);
      // zeta_R poles at 0, -2, -4, ...
      double re = arg.re.to_double(), im = arg.im.to_double();
      if (std::abs(im) < 1e-25 && re <= 1e-25 && close(re / 2.0, std::round(re / 2.0), 1e-25))
        throw PoleError("local_L: zeta_R pole at factor " + a.to_string());
      prod = prod * zeta_R(arg);
    } else if (f.kind == FactorKind::Arch2) {
      BigComplex arg = s + f.s + BigComplex(f.l / 2.0, 0.0, wp);
      double re = arg.re.to_double(), im = arg.im.to_double();
      if (std::abs(im) < 1e-25 && re <= 1e-25 && close(re, std::round(re), 1e-25))
        throw PoleError("local_L: zeta_C pole at factor " + a.to_string());
      prod = prod * zeta_C(arg);
    } else {
      BigComplex arg = s + f.s + BigComplex(static_cast<double>(f.n - 1), 0.0, wp);
      double p = static_cast<double>(a.place());
      BigComplex pma = pow(BigFloat(p, wp), -arg);
      BigComplex one(1.0, 0.0, wp);
      BigFloat dist = abs(one - pma);
      if (dist.to_double() < 1e-25) throw PoleError("local_L: zeta_p pole at factor " + a.to_string());
      prod = prod / (one - pma);
    }
  }
  return prod;
}

std::complex<double> local_L_d(std::complex<double> s, const LanglandsParam& a) {
  return local_L(BigComplex(s.real(), s.imag(), kLangPrec), a).to_complex();
}

double analytic_conductor(double t, const LanglandsParam& a) {
  if (!a.archimedean()) throw std::invalid_argument("analytic_conductor: archimedean parameter required");
  double c = 1.0;
  for (const Factor& f : a.factors()) {
    std::complex<double> s(f.s.re.to_double(), f.s.im.to_double());
    if (f.kind == FactorKind::Arch1) {
      c *= 1.0 + std::abs(std::complex<double>(0, t) + s);
    } else {
      double b = std::abs(std::complex<double>(0, t) + s + std::complex<double>(f.l / 2.0, 0));
      c *= (1.0 + b) * (1.0 + b);
    }
  }
  return c;
}

std::uint64_t conductor(const LanglandsParam& a) {
  if (a.archimedean()) throw std::invalid_argument("conductor: finite place required");
  std::uint64_t c = 1;
  for (const Factor& f : a.factors())
    for (int i = 1; i < f.n; ++i) c *= a.place();
  return c;
}

std::complex<double> epsilon(std::complex<double> s, const LanglandsParam& a) {
  std::complex<double> prod = 1.0;
  const std::complex<double> I(0, 1);
  for (const Factor& f : a.factors()) {
    if (f.kind == FactorKind::Arch1) {
      prod *= std::pow(I, f.delta);
    } else if (f.kind == FactorKind::Arch2) {
      prod *= std::pow(I, f.l + 1);
    } else {
      if (f.n == 1) continue;  // empty product
      double p = static_cast<double>(a.place());
      std::complex<double> sp(f.s.re.to_double(), f.s.im.to_double());
      std::complex<double> base = -std::exp(-(s + sp + (f.n - 2) / 2.0) * std::log(p));
      prod *= std::pow(base, f.n - 1);
    }
  }
  return prod;
}

}  // namespace mfv
