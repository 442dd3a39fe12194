#pragma once

#include <complex>
#include <vector>

#include "mfv/numerics.hpp"

namespace mfv {

// Modified Bessel function of the second kind, complex order. Power series
// through I_{+-mu} at a working precision sized to absorb the e^{pi|Im mu|/2}
// and e^{2x} cancellation; plain asymptotic expansion once x dominates
// 1 + |mu|^2. Documented range |Im mu| <= 60. scaled returns e^x K_mu(x).
std::complex<double> kbessel(std::complex<double> mu, double x, bool scaled = false);

// full-precision variant (certified Maass solver); always takes the series path
BigComplex kbessel_big(std::complex<double> mu, double x, bool scaled, mpfr_prec_t out_prec);

// Chebyshev-piecewise table of x -> e^x K_mu(x) over [x_min, x_max] for a
// fixed order; build cost is a few hundred kbessel calls, evaluation is a
// short double-precision Clenshaw sum. Used by the Maass/Eisenstein hot loops.
class KBesselTable {
 public:
  KBesselTable(std::complex<double> mu, double x_min, double x_max, double rel_tol = 1e-12);

  std::complex<double> eval_scaled(double x) const;  // e^x K_mu(x)
  std::complex<double> eval(double x) const;         // K_mu(x)
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::complex<double> order() const { return mu_; }

 private:
  struct Piece {
    double u0, u1;  // interval in u = log x
    std::vector<std::complex<double>> c;
  };
  std::complex<double> mu_;
  double x_min_, x_max_;
  std::vector<Piece> pieces_;
};

// Classical Whittaker function w_{kappa,mu}(y): solution of
//   w'' + (-1/4 + kappa/y + (1/4 - mu^2)/y^2) w = 0,  w ~ y^kappa e^{-y/2}.
// Closed rows w_{k/2,(k-1)/2} = y^{k/2} e^{-y/2} and w_{0,mu} =
// (y/pi)^{1/2} K_mu(y/2); otherwise the integral representation, which needs
// Re(mu - kappa + 1/2) > 0.
std::complex<double> whittaker_w(double kappa, std::complex<double> mu, double y);

}  // namespace mfv
