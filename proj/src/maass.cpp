#include "mfv/maass.hpp"

#include <json.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "mfv/bessel.hpp"
#include "mfv/parallel.hpp"
#include "mfv/surface.hpp"

namespace mfv {

namespace {

struct Horocycle {
  double Y = 0.0;
  int Q = 0;
  std::vector<double> xs, ys;   // pullback coordinates of x_j + iY
  std::vector<double> x0;       // sample abscissae x_j = (j - 1/2) / (2Q)
};

Horocycle pullbacks(double Y, int Q) {
  Horocycle h;
  h.Y = Y;
  h.Q = Q;
  h.xs.resize(Q);
  h.ys.resize(Q);
  h.x0.resize(Q);
  for (int j = 0; j < Q; ++j) {
    double x = (j + 0.5) / (2.0 * Q);
    auto r = reduce({x, Y});
    h.x0[j] = x;
    h.xs[j] = r.z.x;
    h.ys[j] = r.z.y;
  }
  return h;
}

double trig(int parity, double arg) { return parity == 0 ? std::cos(arg) : std::sin(arg); }

int choose_M0(double t, double Y) {
  return std::max(12, static_cast<int>(std::ceil((t + 28.0) / (2.0 * M_PI * Y))) + 4);
}

// Double-precision Hejhal system at one anchor; returns c_1..c_M0 (c_1 = 1).
// K-values come from a shared table for the scan path.
std::vector<double> solve_anchor_d(const KBesselTable& tab, double t, int parity,
                                   const Horocycle& h, int M0, double* residual,
                                   double* cond) {
  int Q = h.Q;
  // B[m][j] = sqrt(y*) K(2 pi m y*) tr(2 pi m x*)
  Eigen::MatrixXd V(M0, M0);
  for (int m = 1; m <= M0; ++m) {
    std::vector<double> B(Q);
    for (int j = 0; j < Q; ++j) {
      double arg = 2.0 * M_PI * m * h.ys[j];
      double K = arg > tab.x_max() ? 0.0 : tab.eval_scaled(arg).real() * std::exp(-arg);
      B[j] = std::sqrt(h.ys[j]) * K * trig(parity, 2.0 * M_PI * m * h.xs[j]);
    }
    for (int n = 1; n <= M0; ++n) {
      double acc = 0.0;
      for (int j = 0; j < Q; ++j) acc += B[j] * trig(parity, 2.0 * M_PI * n * h.x0[j]);
      V(n - 1, m - 1) = (2.0 / Q) * acc;
    }
  }
  for (int n = 1; n <= M0; ++n) {
    double arg = 2.0 * M_PI * n * h.Y;
    double K = arg > tab.x_max() ? 0.0 : tab.eval_scaled(arg).real() * std::exp(-arg);
    V(n - 1, n - 1) -= std::sqrt(h.Y) * K;
  }
  // V c = 0 with c_1 = 1: A x = -v1
  Eigen::MatrixXd A = V.rightCols(M0 - 1);
  Eigen::VectorXd rhs = -V.col(0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::VectorXd x = qr.solve(rhs);
  if (residual) *residual = (A * x - rhs).norm() / std::max(1e-300, rhs.norm());
  if (cond) {
    double dmax = std::abs(qr.matrixR()(0, 0));
    double dmin = std::abs(qr.matrixR()(M0 - 2, M0 - 2));
    *cond = dmax / std::max(dmin, 1e-300);
  }
  std::vector<double> c(M0 + 1, 0.0);
  c[1] = 1.0;
  for (int m = 2; m <= M0; ++m) c[m] = x[m - 2];
  return c;
}

// High-precision certified solve (Householder least squares in BigFloat).
std::vector<BigFloat> solve_anchor_big(double t, int parity, const Horocycle& h, int M0,
                                       mpfr_prec_t prec) {
  int Q = h.Q;
  int rows = M0, cols = M0 - 1;
  std::vector<std::vector<BigFloat>> A(rows, std::vector<BigFloat>(cols, BigFloat(prec)));
  std::vector<BigFloat> rhs(rows, BigFloat(prec));
  double cap = t + 0.55 * prec;  // e^{-x} below target precision past this

  // columns m = 1..M0 assembled in parallel
  std::vector<std::vector<BigFloat>> cols_data(M0 + 1);
  parallel_for(M0, [&](std::int64_t mi) {
    int m = static_cast<int>(mi) + 1;
    std::vector<BigFloat> col(rows, BigFloat(prec));
    std::vector<BigFloat> B(Q, BigFloat(prec));
    for (int j = 0; j < Q; ++j) {
      double arg = 2.0 * M_PI * m * h.ys[j];
      if (arg > cap) continue;
      BigComplex K = kbessel_big({0.0, t}, arg, false, prec);
      B[j] = sqrt(BigFloat(h.ys[j], prec)) * K.re *
             BigFloat(trig(parity, 2.0 * M_PI * m * h.xs[j]), prec);
    }
    BigFloat two_q(2.0 / Q, prec);
    for (int n = 1; n <= rows; ++n) {
      BigFloat acc(0.0, prec);
      for (int j = 0; j < Q; ++j)
        acc += B[j] * BigFloat(trig(parity, 2.0 * M_PI * n * h.x0[j]), prec);
      col[n - 1] = two_q * acc;
    }
    double argd = 2.0 * M_PI * m * h.Y;
    if (argd <= cap) {
      BigComplex K = kbessel_big({0.0, t}, argd, false, prec);
      col[m - 1] -= sqrt(BigFloat(h.Y, prec)) * K.re;
    }
    cols_data[m] = std::move(col);
  });
  for (int n = 0; n < rows; ++n) {
    rhs[n] = -cols_data[1][n];
    for (int m = 2; m <= M0; ++m) A[n][m - 2] = cols_data[m][n];
  }

  // Householder QR least squares
  for (int k = 0; k < cols; ++k) {
    BigFloat norm(0.0, prec);
    for (int i = k; i < rows; ++i) norm += A[i][k] * A[i][k];
    norm = sqrt(norm);
    if (norm.is_zero()) throw std::runtime_error("maass: ill-conditioned certified system");
    if (A[k][k].sign() < 0) norm = -norm;
    A[k][k] += norm;
    BigFloat beta = norm * A[k][k];
    for (int jc = k + 1; jc < cols; ++jc) {
      BigFloat dot(0.0, prec);
      for (int i = k; i < rows; ++i) dot += A[i][k] * A[i][jc];
      dot /= beta;
      for (int i = k; i < rows; ++i) A[i][jc] -= dot * A[i][k];
    }
    BigFloat dot(0.0, prec);
    for (int i = k; i < rows; ++i) dot += A[i][k] * rhs[i];
    dot /= beta;
    for (int i = k; i < rows; ++i) rhs[i] -= dot * A[i][k];
    A[k][k] = -norm;  // R diagonal
  }
  std::vector<BigFloat> x(cols, BigFloat(prec));
  for (int i = cols - 1; i >= 0; --i) {
    BigFloat acc = rhs[i];
    for (int jc = i + 1; jc < cols; ++jc) acc -= A[i][jc] * x[jc];
    x[i] = acc / A[i][i];
  }
  std::vector<BigFloat> c(M0 + 1, BigFloat(prec));
  c[1] = BigFloat(1.0, prec);
  for (int m = 2; m <= M0; ++m) c[m] = x[m - 2];
  return c;
}

struct DetectorContext {
  int parity;
  int M0;
  Horocycle h1, h2;
};

DetectorContext make_ctx(double t_hi, int parity, const SolveOptions& opt) {
  DetectorContext ctx;
  ctx.parity = parity;
  double Y1 = opt.y_anchor, Y2 = 0.92 * opt.y_anchor;
  ctx.M0 = opt.M0 > 0 ? opt.M0 : choose_M0(t_hi, Y2);
  ctx.h1 = pullbacks(Y1, 2 * ctx.M0);
  ctx.h2 = pullbacks(Y2, 2 * ctx.M0);
  return ctx;
}

// detector: difference of the c_2 coefficients solved at the two anchors
// (c_3 difference is used as the confirmation channel)
std::pair<double, double> detector_pair(const DetectorContext& ctx, double t) {
  double x_lo = std::min(2.0 * M_PI * 1 * 0.8, 2.5);
  double x_hi = std::max(t + 42.0, 2.0 * M_PI * ctx.M0 * 2.4);
  KBesselTable tab({0.0, t}, std::min(2.0 * M_PI * ctx.h2.Y * 0.9, x_lo), x_hi, 1e-12);
  auto c1 = solve_anchor_d(tab, t, ctx.parity, ctx.h1, ctx.M0, nullptr, nullptr);
  auto c2 = solve_anchor_d(tab, t, ctx.parity, ctx.h2, ctx.M0, nullptr, nullptr);
  return {c1[2] - c2[2], c1[3] - c2[3]};
}

}  // namespace

double maass_detector(double t, int parity, const SolveOptions& opt) {
  auto ctx = make_ctx(t + 1.0, parity, opt);
  return detector_pair(ctx, t).first;
}

std::vector<MaassForm> maass_solve(double t_lo, double t_hi, int parity, const SolveOptions& opt) {
  if (!(t_hi > t_lo) || t_lo <= 0) throw std::invalid_argument("maass_solve: bad interval");
  DetectorContext ctx = make_ctx(t_hi, parity, opt);

  std::vector<MaassForm> out;
  double step = opt.grid_step;
  int steps = static_cast<int>(std::ceil((t_hi - t_lo) / step));
  auto prev = detector_pair(ctx, t_lo);
  double t_prev = t_lo;
  for (int i = 1; i <= steps; ++i) {
    double t = std::min(t_hi, t_lo + i * step);
    auto cur = detector_pair(ctx, t);
    bool flip = (prev.first < 0) != (cur.first < 0);
    if (flip) {
      // bisect the primary channel to 1e-10
      double a = t_prev, b = t, fa = prev.first;
      for (int it = 0; it < 60 && (b - a) > 1e-10; ++it) {
        double mid = 0.5 * (a + b);
        double fm = detector_pair(ctx, mid).first;
        if ((fa < 0) == (fm < 0)) { a = mid; fa = fm; }
        else b = mid;
      }
      double t_root = 0.5 * (a + b);
      // confirmation channel must vanish too (reject anchor artifacts)
      auto conf = detector_pair(ctx, t_root);
      double scale = std::max({std::abs(prev.second), std::abs(cur.second), 1e-12});
      if (std::abs(conf.second) < 0.05 * scale + 1e-7) {
        // certified high-precision solve at both anchors
        MaassForm f;
        f.t = t_root;
        f.parity = parity;
        f.m0 = ctx.M0;
        f.diag.y_anchor = ctx.h1.Y;
        auto cb1 = solve_anchor_big(t_root, parity, ctx.h1, ctx.M0, opt.solver_prec);
        auto cb2 = solve_anchor_big(t_root, parity, ctx.h2, ctx.M0, opt.solver_prec);
        double dis = 0.0;
        int n_certify = std::min(ctx.M0, 12);
        for (int n = 2; n <= n_certify; ++n)
          dis = std::max(dis, std::abs((cb1[n] - cb2[n]).to_double()));
        f.diag.anchor_disagreement = dis;
        if (dis > opt.eps) {
          // not certifiable at this truncation; report via exception per the
          // module error contract
          throw std::runtime_error("maass_solve: two-anchor consistency " +
                                   std::to_string(dis) + " above eps at t ~ " +
                                   std::to_string(t_root));
        }
        f.certified_digits = static_cast<int>(-std::log10(std::max(dis, 1e-16)));
        f.c.resize(ctx.M0 + 1, 0.0);
        for (int n = 1; n <= ctx.M0; ++n) f.c[n] = cb1[n].to_double();
        double resid, cond;
        KBesselTable tab({0.0, t_root}, 2.0, t_root + 42.0, 1e-12);
        solve_anchor_d(tab, t_root, parity, ctx.h1, ctx.M0, &resid, &cond);
        f.diag.residual = resid;
        f.diag.cond_estimate = cond;
        f.diag.scan_steps = i;
        out.push_back(std::move(f));
      }
    }
    prev = cur;
    t_prev = t;
  }
  return out;
}

void maass_extend(MaassForm& f, int m_target) {
  if (m_target <= static_cast<int>(f.c.size()) - 1) return;
  // anchor heights sized so the diagonal Bessel terms stay representable
  double Y1 = (f.t + 24.0) / (2.0 * M_PI * m_target);
  double Y2 = 0.9 * Y1;
  int M0 = m_target;
  int Q = 2 * M0;

  double x_hi = f.t + 46.0;
  KBesselTable tab({0.0, f.t}, std::min(2.0 * M_PI * Y2 * 0.9, 2.0), x_hi, 1e-12);

  auto assemble_solve = [&](double Y) {
    Horocycle h = pullbacks(Y, Q);
    Eigen::MatrixXd V(M0, M0);
    // columns in parallel; each inner transform is a plain O(Q) loop per n,
    // but B is sparse in practice: K vanishes once 2 pi m y* passes x_hi
    parallel_for(M0, [&](std::int64_t mi) {
      int m = static_cast<int>(mi) + 1;
      std::vector<double> B(Q);
      bool any = false;
      for (int j = 0; j < Q; ++j) {
        double arg = 2.0 * M_PI * m * h.ys[j];
        if (arg > x_hi) { B[j] = 0.0; continue; }
        double K = tab.eval_scaled(arg).real() * std::exp(-arg);
        B[j] = std::sqrt(h.ys[j]) * K * trig(f.parity, 2.0 * M_PI * m * h.xs[j]);
        any = any || B[j] != 0.0;
      }
      for (int n = 1; n <= M0; ++n) {
        double acc = 0.0;
        if (any)
          for (int j = 0; j < Q; ++j)
            if (B[j] != 0.0) acc += B[j] * trig(f.parity, 2.0 * M_PI * n * h.x0[j]);
        V(n - 1, m - 1) = (2.0 / Q) * acc;
      }
    });
    for (int n = 1; n <= M0; ++n) {
      double arg = 2.0 * M_PI * n * h.Y;
      double K = arg > x_hi ? 0.0 : tab.eval_scaled(arg).real() * std::exp(-arg);
      V(n - 1, n - 1) -= std::sqrt(h.Y) * K;
    }
    Eigen::MatrixXd A = V.rightCols(M0 - 1);
    Eigen::VectorXd rhs = -V.col(0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::VectorXd x = qr.solve(rhs);
    std::vector<double> c(M0 + 1, 0.0);
    c[1] = 1.0;
    for (int m = 2; m <= M0; ++m) c[m] = x[m - 2];
    return c;
  };

  auto c1 = assemble_solve(Y1);
  auto c2 = assemble_solve(Y2);
  double dis = 0.0;
  int upto = std::max(4, (8 * m_target) / 10);
  for (int n = 2; n <= upto; ++n) dis = std::max(dis, std::abs(c1[n] - c2[n]));
  f.diag.extension_disagreement = dis;
  f.extension_digits = static_cast<int>(-std::log10(std::max(dis, 1e-16)));

  // keep the certified low block, splice the extension above it
  std::vector<double> merged(m_target + 1, 0.0);
  for (size_t n = 1; n < f.c.size() && n < merged.size(); ++n) merged[n] = f.c[n];
  for (int n = static_cast<int>(f.c.size()); n <= m_target; ++n) merged[n] = c1[n];
  f.c = std::move(merged);
}

SatakePair maass_satake(const MaassForm& f, std::uint64_t p) {
  if (p >= f.c.size()) throw CoeffShortfallError("maass_satake: c_p not available", p);
  return satake_params(f.c[p], p);
}

GL2Form gl2_from_maass(const MaassForm& f) {
  GL2Form g;
  g.kind = GL2Form::Kind::Maass;
  g.t = f.t;
  g.parity = f.parity;
  g.theta = 7.0 / 64.0;  // documented growth allowance for Maass input
  char buf[48];
  std::snprintf(buf, sizeof buf, "phi(t=%.6f,%s)", f.t, f.parity == 0 ? "even" : "odd");
  g.id = buf;
  g.coeff_limit = f.c.size();
  auto coeffs = f.c;
  g.satake_at = [coeffs](std::uint64_t p) {
    if (p >= coeffs.size()) throw CoeffShortfallError("maass satake supply", p);
    return satake_params(coeffs[p], p);
  };
  return g;
}

std::string maass_to_json(const MaassForm& f) {
  nlohmann::json j;
  char tbuf[32];
  std::snprintf(tbuf, sizeof tbuf, "%.12f", f.t);
  j["t"] = std::string(tbuf);
  j["parity"] = f.parity;
  std::vector<std::string> cs;
  for (double v : f.c) {
    char b[32];
    std::snprintf(b, sizeof b, "%.15e", v);
    cs.emplace_back(b);
  }
  j["coeffs"] = cs;
  j["certified_digits"] = f.certified_digits;
  j["extension_digits"] = f.extension_digits;
  j["m0"] = f.m0;
  j["diagnostics"] = {{"anchor_disagreement", f.diag.anchor_disagreement},
                      {"extension_disagreement", f.diag.extension_disagreement},
                      {"residual", f.diag.residual},
                      {"cond_estimate", f.diag.cond_estimate},
                      {"y_anchor", f.diag.y_anchor},
                      {"scan_steps", f.diag.scan_steps}};
  return j.dump(1);
}

MaassForm maass_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MaassForm f;
  f.t = std::stod(j.at("t").get<std::string>());
  f.parity = j.at("parity").get<int>();
  for (const auto& s : j.at("coeffs")) f.c.push_back(std::stod(s.get<std::string>()));
  f.certified_digits = j.value("certified_digits", 0);
  f.extension_digits = j.value("extension_digits", 0);
  f.m0 = j.value("m0", 0);
  return f;
}

}  // namespace mfv
