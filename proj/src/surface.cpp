#include "mfv/surface.hpp"

#include <cmath>
#include <stdexcept>

#include "mfv/parallel.hpp"

namespace mfv {

ReduceResult reduce(PointH z) {
  if (!(z.y > 0)) throw std::invalid_argument("reduce: y must be positive");
  ReduceResult r;
  long a = 1, b = 0, c = 0, d = 1;
  double x = z.x, y = z.y;
  for (int it = 0; it < 220; ++it) {
    double n = std::nearbyint(x);
    if (n != 0.0) {
      x -= n;
      long ln = static_cast<long>(n);
      a -= ln * c;
      b -= ln * d;
    }
    double r2 = x * x + y * y;
    if (r2 < 1.0 - 1e-15) {
      // S: z -> -1/z
      double nx = -x / r2, ny = y / r2;
      x = nx;
      y = ny;
      long na = -c, nb = -d;
      c = a;
      d = b;
      a = na;
      b = nb;
      ++r.moves;
    } else {
      break;
    }
    ++r.moves;
  }
  r.z = {x, y};
  r.g = {a, b, c, d};
  return r;
}

// ---------------------------------------------------------------------------
// AutomorphicFunction
// ---------------------------------------------------------------------------

AutomorphicFunction AutomorphicFunction::holo_unitary(const HoloEigenform& f, bool conjugate) {
  AutomorphicFunction F;
  F.kind_ = conjugate ? Kind::HoloUnitaryConj : Kind::HoloUnitary;
  F.weight_ = conjugate ? -f.weight : f.weight;
  F.an_.resize(f.precision);
  for (int n = 0; n < f.precision; ++n) F.an_[n] = f.a[n].to_double();
  return F;
}

AutomorphicFunction AutomorphicFunction::maass(double t, int parity, std::vector<double> coeffs,
                                               double eval_eps) {
  AutomorphicFunction F;
  F.kind_ = Kind::Maass;
  F.parity_ = parity;
  F.t_ = t;
  F.an_ = std::move(coeffs);  // an_[n] = c_n, an_[0] unused
  double xmax = std::max(t + 40.0, 2.0 * M_PI * 0.85 + 30.0);
  F.ktab_ = std::make_shared<KBesselTable>(std::complex<double>(0.0, t), 1e-3, xmax,
                                           std::min(1e-12, eval_eps * 1e-2));
  return F;
}

AutomorphicFunction AutomorphicFunction::eisenstein(std::complex<double> s, bool normalized,
                                                    double eval_eps) {
  AutomorphicFunction F;
  F.kind_ = Kind::Eisenstein;
  F.s_ = s;
  F.prefactor_ = normalized ? 1.0 / std::sqrt(2.0) : 1.0;
  // phi(s) = zeta*(2s-1)/zeta*(2s); series constant 4 pi^s / (Gamma(s) zeta(2s))
  BigComplex s2(2 * s.real(), 2 * s.imag(), 192);
  BigComplex s2m1(2 * s.real() - 1.0, 2 * s.imag(), 192);
  F.eis_const_ = (zeta_star(s2m1) / zeta_star(s2)).to_complex();
  auto zeta2s = riemann_zeta(s2).to_complex();
  auto gs = gamma(BigComplex(s.real(), s.imag(), 192)).to_complex();
  F.eis_cn_ = 4.0 * std::exp(s * std::log(M_PI)) / (gs * zeta2s);
  // coefficients n^{s-1/2} sigma_{1-2s}(n)
  int N = 64;
  F.eis_coeff_.assign(N, 0.0);
  for (int dd = 1; dd < N; ++dd) {
    std::complex<double> dpw = std::exp((1.0 - 2.0 * s) * std::log(static_cast<double>(dd)));
    for (int n = dd; n < N; n += dd) F.eis_coeff_[n] += dpw;
  }
  for (int n = 1; n < N; ++n)
    F.eis_coeff_[n] *= std::exp((s - 0.5) * std::log(static_cast<double>(n)));
  double xmax = std::max(70.0, 2.0 * std::abs(s.imag()) + 50.0);
  F.ktab_ = std::make_shared<KBesselTable>(s - 0.5, 1e-3, xmax, std::min(1e-13, eval_eps * 1e-2));
  return F;
}

std::complex<double> AutomorphicFunction::eval(PointH zin, double eps) const {
  ReduceResult rr = reduce(zin);
  double x = rr.z.x, y = rr.z.y;
  const std::complex<double> I{0.0, 1.0};

  switch (kind_) {
    case Kind::HoloUnitary:
    case Kind::HoloUnitaryConj: {
      int k = std::abs(weight_);
      std::complex<double> q = std::exp(2.0 * M_PI * I * std::complex<double>(x, y));
      double qa = std::abs(q);
      std::complex<double> qn = q;
      std::complex<double> sum = 0.0;
      double tail_scale = std::pow(y, 0.5 * k);
      for (size_t n = 1; n < an_.size(); ++n) {
        sum += an_[n] * qn;
        qn *= q;
        // |a_m| <= d(m) m^{(k-1)/2}; crude geometric tail
        double bound = 8.0 * std::pow(static_cast<double>(n + 1), 0.5 * (k + 1)) *
                       std::pow(qa, static_cast<double>(n + 1)) / (1.0 - qa);
        if (bound * tail_scale < 0.25 * eps && n > 4) break;
      }
      std::complex<double> val = tail_scale * sum;
      if (kind_ == Kind::HoloUnitaryConj) val = std::conj(val);
      // unitary cocycle: psi(z_in) = (j/|j|)^{-w} psi(z_red), j = c z_in + d
      std::complex<double> j = static_cast<double>(rr.g[2]) * std::complex<double>(zin.x, zin.y) +
                               static_cast<double>(rr.g[3]);
      std::complex<double> phase = std::pow(j / std::abs(j), -weight_);
      return phase * val;
    }
    case Kind::Maass: {
      double sy = std::sqrt(y);
      std::complex<double> sum = 0.0;
      double partial_scale = 1e-300;
      for (size_t n = 1; n < an_.size(); ++n) {
        double arg = 2.0 * M_PI * n * y;
        if (arg > ktab_->x_max()) break;
        double K = ktab_->eval_scaled(arg).real() * std::exp(-arg);
        double tr = parity_ == 0 ? std::cos(2.0 * M_PI * n * x) : std::sin(2.0 * M_PI * n * x);
        double term = an_[n] * sy * K * tr;
        sum += term;
        partial_scale = std::max(partial_scale, std::abs(an_[n] * sy * K));
        if (arg > t_ + 5.0 && std::abs(an_[n] * sy * K) < 0.1 * eps &&
            2.0 * M_PI * (n + 1) * y > t_ + 5.0)
          break;
      }
      return sum;
    }
    case Kind::Eisenstein: {
      std::complex<double> v = std::exp(s_ * std::log(y)) +
                               eis_const_ * std::exp((1.0 - s_) * std::log(y));
      std::complex<double> series = 0.0;
      for (size_t n = 1; n < eis_coeff_.size(); ++n) {
        double arg = 2.0 * M_PI * n * y;
        if (arg > ktab_->x_max()) break;
        std::complex<double> K = ktab_->eval_scaled(arg) * std::exp(-arg);
        series += eis_coeff_[n] * K * std::cos(2.0 * M_PI * n * x);
        if (arg > std::abs(s_.imag()) + 8.0 && std::abs(eis_coeff_[n] * K) < 1e-3 * eps) break;
      }
      v += eis_cn_ * std::sqrt(y) * series;
      return prefactor_ * v;
    }
  }
  return 0.0;
}

DecayCertificate AutomorphicFunction::decay() const {
  DecayCertificate c;
  switch (kind_) {
    case Kind::HoloUnitary:
    case Kind::HoloUnitaryConj:
      c.m = 1.0;
      c.poly_pow = std::abs(weight_) / 2.0;
      break;
    case Kind::Maass:
      c.m = 1.0;
      c.poly_pow = 0.5;
      break;
    case Kind::Eisenstein:
      c.m = 0.0;  // polynomial growth; products must supply the decay
      c.poly_pow = std::max(s_.real(), 1.0 - s_.real());
      break;
  }
  return c;
}

// ---------------------------------------------------------------------------
// fundamental-domain quadrature
// ---------------------------------------------------------------------------

namespace {

struct GridSpec {
  int x_panels;
  int gl_nodes;
  double strip_ratio;
};

std::complex<double> fd_pass(const std::function<std::complex<double>(PointH)>& f, double Y,
                             const GridSpec& gs, long* evals) {
  const GaussLegendre& G = gauss_legendre(gs.gl_nodes);
  int nx = gs.x_panels * gs.gl_nodes;
  std::vector<std::complex<double>> column(nx);
  parallel_for(nx, [&](std::int64_t idx) {
    int panel = static_cast<int>(idx) / gs.gl_nodes;
    int node = static_cast<int>(idx) % gs.gl_nodes;
    double x0 = -0.5 + (1.0 * panel) / gs.x_panels;
    double x1 = x0 + 1.0 / gs.x_panels;
    double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * G.x[node];
    double wx = 0.5 * (x1 - x0) * G.w[node];
    // inner integral over y from the arc to Y against dy/y^2
    double ylo = std::sqrt(std::max(0.0, 1.0 - x * x));
    std::complex<double> acc = 0.0;
    double ya = ylo;
    while (ya < Y) {
      double yb = std::min(Y, ya * gs.strip_ratio);
      for (int j = 0; j < gs.gl_nodes; ++j) {
        double y = 0.5 * (ya + yb) + 0.5 * (yb - ya) * G.x[j];
        double wy = 0.5 * (yb - ya) * G.w[j];
        acc += wy * f({x, y}) / (y * y);
      }
      ya = yb;
    }
    column[idx] = wx * acc;
  });
  if (evals) {
    long per_col = 0;
    double ya = std::sqrt(3.0) / 2.0;
    while (ya < Y) { per_col += gs.gl_nodes; ya *= gs.strip_ratio; }
    *evals += static_cast<long>(nx) * per_col;
  }
  KahanSumC ks;
  for (const auto& v : column) ks.add(v);
  return ks.value();
}

}  // namespace

QuadratureResult integrate_fd(const std::function<std::complex<double>(PointH)>& f, double eps,
                              const DecayCertificate& cert) {
  QuadratureResult out;
  double Y;
  if (cert.cutoff_override > 0) {
    Y = cert.cutoff_override;
  } else {
    if (cert.m <= 0)
      throw std::invalid_argument("integrate_fd: non-decaying integrand needs cutoff_override");
    Y = std::max(2.0, (std::log(1.0 / eps) + cert.poly_pow) / (2.0 * M_PI * cert.m));
  }

  // empirical amplitude at the cutoff height for the analytic tail bound
  double A = 0.0;
  for (int i = 0; i < 9; ++i) {
    double x = -0.5 + (i + 0.5) / 9.0;
    A = std::max(A, std::abs(f({x, Y})));
  }
  double tail = 0.0;
  if (cert.m > 0) {
    // integral_Y^inf A e^{-2 pi m (y - Y)} (y/Y)^p dy / y^2, crude envelope
    tail = 2.0 * A / (2.0 * M_PI * cert.m * Y * Y) *
           (1.0 + cert.poly_pow / (2.0 * M_PI * cert.m * Y));
  }

  std::complex<double> prev = 0.0;
  double err_est = 1e300;
  for (int level = 0;; ++level) {
    GridSpec gs{8 << level, 14 + 4 * level, 1.75};
    std::complex<double> v = fd_pass(f, Y, gs, &out.evals);
    out.panels = gs.x_panels;
    out.refine_history.push_back(std::abs(v - prev));
    if (level > 0) {
      err_est = std::abs(v - prev);
      if (err_est < 0.5 * eps || level >= 5) {
        out.value = v;
        break;
      }
    }
    prev = v;
  }
  out.tail_bound = tail;
  out.error_bound = err_est + tail;
  return out;
}

NormResult petersson_norm(const HoloEigenform& f, double eps) {
  AutomorphicFunction F = AutomorphicFunction::holo_unitary(f);
  // scale estimate: peak near the bottom of the domain
  double probe = std::abs(F.eval({0.11, 0.92}, 1e-12));
  double scale = std::max(probe * probe, 1e-60);
  DecayCertificate cert{2.0, static_cast<double>(f.weight), 0.0};
  double eval_eps = std::sqrt(scale) * 1e-4 * eps;
  auto q = integrate_fd(
      [&](PointH z) {
        std::complex<double> v = F.eval(z, eval_eps);
        return std::complex<double>(std::norm(v), 0.0);
      },
      eps * scale, cert);
  NormResult r;
  r.value = q.value.real();
  r.error_bound = q.error_bound;
  r.quad = q;
  return r;
}

TripleResult triple_integral(const AutomorphicFunction& f1, const AutomorphicFunction& f2,
                             const AutomorphicFunction& f3, double eps) {
  int wsum = f1.signed_weight() + f2.signed_weight() + f3.signed_weight();
  if (wsum != 0)
    throw std::invalid_argument("triple_integral: total weight " + std::to_string(wsum) +
                                " != 0");
  DecayCertificate c1 = f1.decay(), c2 = f2.decay(), c3 = f3.decay();
  DecayCertificate cert{c1.m + c2.m + c3.m, c1.poly_pow + c2.poly_pow + c3.poly_pow, 0.0};
  double eval_eps = eps * 1e-3;
  auto q = integrate_fd(
      [&](PointH z) { return f1.eval(z, eval_eps) * f2.eval(z, eval_eps) * f3.eval(z, eval_eps); },
      eps, cert);
  TripleResult r;
  r.value = q.value;
  r.error_bound = q.error_bound;
  r.quad = q;
  return r;
}

}  // namespace mfv
