#include "mfv/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace mfv {

namespace {

// I_mu(x) = (x/2)^mu / Gamma(mu+1) * sum_k (x^2/4)^k / (k! (mu+1)_k)
BigComplex bessel_i_series(const BigComplex& mu, const BigFloat& x, mpfr_prec_t wp) {
  BigFloat x2 = x * x * BigFloat(0.25, wp);
  BigComplex sum(1.0, 0.0, wp);
  BigComplex term(1.0, 0.0, wp);
  for (int k = 1; k < 100000; ++k) {
    BigComplex denom = BigComplex(static_cast<double>(k), 0.0, wp) *
                       (mu + BigComplex(static_cast<double>(k), 0.0, wp));
    term = term * BigComplex{x2, BigFloat(0.0, wp)} / denom;
    sum += term;
    if (abs(term).to_double() < 1e-9 &&
        log(abs(term) / abs(sum)).to_double() < -0.70 * static_cast<double>(wp)) {
      break;
    }
  }
  BigComplex pref = pow(x * BigFloat(0.5, wp), mu) / gamma(mu + BigComplex(1.0, 0.0, wp));
  return pref * sum;
}

BigComplex kbessel_series_big(std::complex<double> mu_in, double x, bool scaled,
                              mpfr_prec_t out_prec) {
  // precision sized for the sin(pi mu) reflection loss (~e^{pi|Im mu|}) and
  // the I_{-mu} - I_mu cancellation (~e^{2x})
  double loss_bits = (M_PI * std::abs(mu_in.imag()) + 2.0 * x) * 1.4427;
  mpfr_prec_t wp = static_cast<mpfr_prec_t>(out_prec + 32 + loss_bits) + 64;

  BigComplex mu(mu_in.real(), mu_in.imag(), wp);
  // integer order is a removable singularity of the reflection formula;
  // nudge off the lattice and keep enough guard bits for the 1/delta blowup
  double dist_int = std::abs(mu_in.imag()) +
                    std::abs(mu_in.real() - std::round(mu_in.real()));
  if (dist_int < 1e-18) {
    wp += 160;
    mu = BigComplex(mu_in.real(), mu_in.imag(), wp);
    mu.re += BigFloat("1e-30", wp);  // the shift must survive rounding
  }

  BigFloat xb(x, wp);
  BigComplex Ip = bessel_i_series(mu, xb, wp);
  BigComplex Im = bessel_i_series(-mu, xb, wp);
  BigFloat pi_v = BigFloat::pi(wp);
  BigComplex spm = sin(BigComplex{pi_v * mu.re, pi_v * mu.im});
  BigComplex K = BigFloat(0.5, wp) * pi_v * ((Im - Ip) / spm);
  if (scaled) {
    BigFloat ex = exp(xb);
    K = BigComplex{K.re * ex, K.im * ex};
  }
  return K;
}

std::complex<double> kbessel_series(std::complex<double> mu_in, double x, bool scaled) {
  return kbessel_series_big(mu_in, x, scaled, 64).to_complex();
}

std::complex<double> kbessel_asymptotic(std::complex<double> mu, double x, bool scaled) {
  // K_mu(x) ~ sqrt(pi/2x) e^{-x} [1 + sum_k a_k / x^k],
  // a_k = prod_{j<=k} (4mu^2 - (2j-1)^2) / (k! 8^k)
  std::complex<double> mu2 = 4.0 * mu * mu;
  std::complex<double> sum = 1.0, term = 1.0;
  for (int k = 1; k <= 60; ++k) {
    double odd = static_cast<double>(2 * k - 1);
    term *= (mu2 - odd * odd) / (8.0 * x * static_cast<double>(k));
    std::complex<double> next = sum + term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) { sum = next; break; }
    sum = next;
  }
  double pref = std::sqrt(M_PI / (2.0 * x));
  if (scaled) return pref * sum;
  return pref * std::exp(-x) * sum;
}

}  // namespace

std::complex<double> kbessel(std::complex<double> mu, double x, bool scaled) {
  if (x <= 0.0) throw std::invalid_argument("kbessel: x must be positive");
  if (std::abs(mu.imag()) > 60.0)
    throw std::invalid_argument("kbessel: |Im mu| above documented range 60");
  double m2 = std::norm(mu);
  if (x >= std::max(40.0, 1.5 * m2 + 10.0)) return kbessel_asymptotic(mu, x, scaled);
  return kbessel_series(mu, x, scaled);
}

BigComplex kbessel_big(std::complex<double> mu, double x, bool scaled, mpfr_prec_t out_prec) {
  if (x <= 0.0) throw std::invalid_argument("kbessel_big: x must be positive");
  return kbessel_series_big(mu, x, scaled, out_prec);
}

// ---------------------------------------------------------------------------
// Chebyshev table in u = log x
// ---------------------------------------------------------------------------

namespace {
constexpr int kChebDeg = 24;
}

KBesselTable::KBesselTable(std::complex<double> mu, double x_min, double x_max, double rel_tol)
    : mu_(mu), x_min_(x_min), x_max_(x_max) {
  if (!(x_min > 0 && x_max > x_min)) throw std::invalid_argument("KBesselTable: bad range");
  double u0 = std::log(x_min), u1 = std::log(x_max);
  // initial split: keep a few oscillations of K_{it} per piece
  double oscillation_scale = std::max(4.0, std::abs(mu.imag()));
  int n0 = std::max(8, static_cast<int>(std::ceil((u1 - u0) * oscillation_scale)));
  std::vector<std::pair<double, double>> todo;
  double du = (u1 - u0) / n0;
  for (int i = 0; i < n0; ++i) todo.push_back({u0 + i * du, u0 + (i + 1) * du});

  while (!todo.empty()) {
    auto [a, b] = todo.back();
    todo.pop_back();
    // sample scaled K at Chebyshev nodes
    std::vector<std::complex<double>> f(kChebDeg + 1);
    for (int j = 0; j <= kChebDeg; ++j) {
      double th = M_PI * (j + 0.5) / (kChebDeg + 1);
      double u = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(th);
      f[j] = kbessel(mu_, std::exp(u), true);
    }
    // Chebyshev coefficients from node values
    Piece p;
    p.u0 = a;
    p.u1 = b;
    p.c.resize(kChebDeg + 1);
    for (int k = 0; k <= kChebDeg; ++k) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j <= kChebDeg; ++j) {
        double th = M_PI * (j + 0.5) / (kChebDeg + 1);
        acc += f[j] * std::cos(k * th);
      }
      p.c[k] = acc * (2.0 / (kChebDeg + 1));
    }
    p.c[0] *= 0.5;
    // convergence check: trailing coefficients small relative to scale
    double scale = 0.0;
    for (auto& v : f) scale = std::max(scale, std::abs(v));
    double tail = std::abs(p.c[kChebDeg]) + std::abs(p.c[kChebDeg - 1]) +
                  std::abs(p.c[kChebDeg - 2]);
    if (tail > rel_tol * std::max(scale, 1e-280) && (b - a) > 1e-4) {
      double mid = 0.5 * (a + b);
      todo.push_back({a, mid});
      todo.push_back({mid, b});
      continue;
    }
    pieces_.push_back(std::move(p));
  }
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& l, const Piece& r) { return l.u0 < r.u0; });
}

std::complex<double> KBesselTable::eval_scaled(double x) const {
  if (!(x >= x_min_ * (1 - 1e-12) && x <= x_max_ * (1 + 1e-12)))
    throw std::out_of_range("KBesselTable: x outside tabulated range");
  double u = std::log(x);
  // binary search for the piece
  int lo = 0, hi = static_cast<int>(pieces_.size()) - 1;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (u <= pieces_[mid].u1) hi = mid;
    else lo = mid + 1;
  }
  const Piece& p = pieces_[lo];
  double t = std::clamp(2.0 * (u - p.u0) / (p.u1 - p.u0) - 1.0, -1.0, 1.0);
  // Clenshaw
  std::complex<double> b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(p.c.size()) - 1; k >= 1; --k) {
    std::complex<double> b0 = 2.0 * t * b1 - b2 + p.c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + p.c[0];
}

std::complex<double> KBesselTable::eval(double x) const {
  return eval_scaled(x) * std::exp(-x);
}

// ---------------------------------------------------------------------------
// Whittaker
// ---------------------------------------------------------------------------

std::complex<double> whittaker_w(double kappa, std::complex<double> mu, double y) {
  if (y <= 0) throw std::invalid_argument("whittaker_w: y must be positive");
  // closed rows
  if (std::abs(mu - std::complex<double>(kappa - 0.5, 0.0)) < 1e-14)
    return std::pow(y, kappa) * std::exp(-0.5 * y);
  if (std::abs(kappa) < 1e-14)
    return std::sqrt(y / M_PI) * kbessel(mu, 0.5 * y);

  std::complex<double> a = mu - kappa + 0.5;  // t-exponent + 1
  if (a.real() <= 1e-12)
    throw std::invalid_argument("whittaker_w: Re(mu - kappa + 1/2) <= 0 and no closed row applies");

  // w = y^{mu+1/2} e^{-y/2} / Gamma(a) * int_0^infty e^{-yt} t^{a-1} (1+t)^{mu+kappa-1/2} dt,
  // integrated in t = e^v (exponential decay both ways on the v-line)
  std::complex<double> b = mu + kappa - 0.5;
  double re_a = a.real();
  double v_lo = std::min(-44.0 / re_a, -8.0);
  double v_hi = std::log(60.0 / y) + 1.0;
  if (v_hi < 2.0) v_hi = 2.0;
  int n = static_cast<int>((v_hi - v_lo) / 0.02) + 1;
  double h = (v_hi - v_lo) / n;
  std::complex<double> acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double v = v_lo + h * i;
    double t = std::exp(v);
    std::complex<double> val = std::exp(-y * t + a * v + b * std::log1p(t));
    acc += (i == 0 || i == n) ? 0.5 * val : val;
  }
  acc *= h;
  BigComplex ga = gamma(BigComplex(a.real(), a.imag(), 160));
  std::complex<double> pref =
      std::exp((mu + 0.5) * std::log(y) - 0.5 * y) / ga.to_complex();
  return pref * acc;
}

}  // namespace mfv
