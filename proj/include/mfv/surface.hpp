#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "mfv/bessel.hpp"
#include "mfv/qexp.hpp"

namespace mfv {

struct PointH {
  double x = 0.0;
  double y = 1.0;
};

struct ReduceResult {
  PointH z;                    // representative in the closed fundamental domain
  std::array<long, 4> g;       // a b c d with z_out = g z_in
  int moves = 0;
};

// SL2(Z) reduction by T/S moves; terminates for any y > 0.
ReduceResult reduce(PointH z);

// exponential decay certificate for cusp integrals: |f(x+iy)| <= A y^p e^{-2 pi m y}
struct DecayCertificate {
  double m = 1.0;      // slowest Fourier mode present
  double poly_pow = 0.0;
  double cutoff_override = 0.0;  // explicit Y when the integrand does not decay
};

struct QuadratureResult {
  std::complex<double> value;
  double error_bound = 0.0;
  double tail_bound = 0.0;
  int panels = 0;
  long evals = 0;
  std::vector<double> refine_history;
};

// Quadrature over the standard fundamental domain against dx dy / y^2:
// Gauss-Legendre panels in x, per-node y-integration from the arc
// y = sqrt(1-x^2) up to the certificate cutoff, analytic tail bound.
QuadratureResult integrate_fd(const std::function<std::complex<double>(PointH)>& f, double eps,
                              const DecayCertificate& cert);

// Pointwise-evaluable automorphic object; eval() reduces internally and, for
// weighted kinds, carries the unitary cocycle phase so the returned value is
// the function's true value at z.
class AutomorphicFunction {
 public:
  enum class Kind { HoloUnitary, HoloUnitaryConj, Maass, Eisenstein };

  static AutomorphicFunction holo_unitary(const HoloEigenform& f, bool conjugate = false);
  static AutomorphicFunction maass(double t, int parity, std::vector<double> coeffs,
                                   double eval_eps = 1e-12);
  // E(s, z) classical (normalized = false) or E^1(s, z) = E(s, z)/sqrt(2).
  static AutomorphicFunction eisenstein(std::complex<double> s, bool normalized,
                                        double eval_eps = 1e-12);

  std::complex<double> eval(PointH z, double eps) const;
  Kind kind() const { return kind_; }
  int signed_weight() const { return weight_; }  // +k, -k (conj), 0
  int parity() const { return parity_; }
  double spectral_t() const { return t_; }
  DecayCertificate decay() const;

 private:
  Kind kind_ = Kind::Maass;
  int weight_ = 0;
  int parity_ = 0;
  double t_ = 0.0;
  std::complex<double> s_{0.0, 0.0};
  double prefactor_ = 1.0;
  std::vector<double> an_;                      // holo / maass coefficients
  std::vector<std::complex<double>> eis_coeff_; // n^{s-1/2} sigma_{1-2s}(n)
  std::complex<double> eis_const_;              // phi(s)
  std::complex<double> eis_cn_;                 // 4 pi^s / (Gamma(s) zeta(2s))
  std::shared_ptr<KBesselTable> ktab_;
};

// Petersson norm of a Hecke-normalized eigenform via quadrature of
// |y^{k/2} f|^2 over the fundamental domain.
struct NormResult {
  double value = 0.0;
  double error_bound = 0.0;
  QuadratureResult quad;
};
NormResult petersson_norm(const HoloEigenform& f, double eps);

// Triple correlation integral; total signed weight must vanish.
struct TripleResult {
  std::complex<double> value;
  double error_bound = 0.0;
  QuadratureResult quad;
};
TripleResult triple_integral(const AutomorphicFunction& f1, const AutomorphicFunction& f2,
                             const AutomorphicFunction& f3, double eps);

inline double vol_modular_surface() { return M_PI / 3.0; }

}  // namespace mfv
