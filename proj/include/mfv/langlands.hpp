#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfv/numerics.hpp"

namespace mfv {

inline constexpr mpfr_prec_t kLangPrec = 192;

// Local factor of a Langlands parameter.
//   Arch1: (s, delta)^1_R      one-dimensional W_R rep
//   Arch2: (s, l)^2_R, l > 0   two-dimensional W_R rep
//   Padic: ||.||^s (x) sp^n    unramified twist of the special rep (n = 1: plain twist)
enum class FactorKind { Arch1, Arch2, Padic };

struct Factor {
  FactorKind kind;
  BigComplex s;
  int delta = 0;  // Arch1
  int l = 0;      // Arch2, kept > 0
  int n = 1;      // Padic

  int degree() const { return kind == FactorKind::Arch2 ? 2 : (kind == FactorKind::Padic ? n : 1); }
};

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedFactorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Formal multiset of local factors at one place (0 = archimedean, else the
// prime). Always held in canonical form: (s,0)^2 rewritten as
// (s,0)^1 + (s,1)^1, l-signs folded, p-adic exponents reduced modulo
// 2 pi i / log p, factors sorted.
class LanglandsParam {
 public:
  LanglandsParam() = default;
  LanglandsParam(std::uint64_t place, std::vector<Factor> factors);

  std::uint64_t place() const { return place_; }
  bool archimedean() const { return place_ == 0; }
  const std::vector<Factor>& factors() const { return f_; }
  int degree() const;

  static LanglandsParam holomorphic_arch(int k);                       // (0, k-1)^2_R
  static LanglandsParam maass_arch(std::complex<double> s, int delta); // (s,d)^1 + (-s,d)^1
  static LanglandsParam unramified_padic(std::uint64_t p, std::complex<double> sdot,
                                         std::complex<double> sddot);
  static LanglandsParam special_padic(std::uint64_t p, std::complex<double> s, int n);
  static LanglandsParam trivial(std::uint64_t place);

  std::string to_string() const;

 private:
  std::uint64_t place_ = 0;
  std::vector<Factor> f_;
  void canonicalize();
};

LanglandsParam tensor(const LanglandsParam& a, const LanglandsParam& b);
LanglandsParam dual(const LanglandsParam& a);
LanglandsParam direct_sum(const LanglandsParam& a, const LanglandsParam& b);
// Ad rho = rho (x) rho^dual minus one trivial factor; degree-2 input required.
LanglandsParam adjoint(const LanglandsParam& a);

bool params_equal(const LanglandsParam& a, const LanglandsParam& b, double tol = 1e-30);

// Local L-factor value, product over factors:
//   L(s, (s0,d)^1) = zeta_R(s + s0 + d)
//   L(s, (s0,l)^2) = zeta_C(s + s0 + l/2)
//   L(s, ||.||^{s0} sp^n) = zeta_p(s + s0 + n - 1)
// Throws PoleError when s hits a pole of any factor.
BigComplex local_L(const BigComplex& s, const LanglandsParam& a);
std::complex<double> local_L_d(std::complex<double> s, const LanglandsParam& a);

// Archimedean analytic conductor C(t, .) (product over factors) / finite
// conductor as an integer power of p.
double analytic_conductor(double t, const LanglandsParam& a);
std::uint64_t conductor(const LanglandsParam& a);

// epsilon factor for the implemented rows (unramified twists, sp^n,
// archimedean (s,d)^1 / (s,l)^2). Ramified characters are out of scope and
// error loudly.
std::complex<double> epsilon(std::complex<double> s, const LanglandsParam& a);

}  // namespace mfv
