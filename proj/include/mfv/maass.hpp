#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfv/lfun.hpp"
#include "mfv/qexp.hpp"

namespace mfv {

// Level-1 Maass cusp form located and solved by Hejhal's implicit-automorphy
// method. Coefficients c_n are Hecke normalized (c_1 = 1); the first block
// (n <= m0) comes from the high-precision certified solve, the remainder from
// the double-precision extension system, each with its own certified digits
// from two-anchor consistency.
struct MaassForm {
  double t = 0.0;      // spectral parameter, lambda = 1/4 + t^2
  int parity = 0;      // 0 even (cos), 1 odd (sin)
  std::vector<double> c;  // c[n], valid n < c.size(), c[1] = 1
  int m0 = 0;             // certified block
  int certified_digits = 0;
  int extension_digits = 0;
  struct Diagnostics {
    double anchor_disagreement = 0.0;
    double extension_disagreement = 0.0;
    double residual = 0.0;
    double cond_estimate = 0.0;
    double y_anchor = 0.0;
    int scan_steps = 0;
  } diag;
};

struct SolveOptions {
  int M0 = 0;             // 0: choose from t and y_anchor
  double y_anchor = 0.5;  // first anchor height (second is 0.92 * this)
  double grid_step = 0.01;
  double eps = 1e-8;      // two-anchor certification target
  mpfr_prec_t solver_prec = 128;  // >= 30 significant digits
};

// Scan [t_lo, t_hi] for eigenvalues of the given parity and solve each to
// certification. Eigenvalues are isolated at level 1; detector sign changes
// are bisected to 1e-10.
std::vector<MaassForm> maass_solve(double t_lo, double t_hi, int parity,
                                   const SolveOptions& opt = {});

// Detector value used by the scan (exposed for absence-scan property tests).
double maass_detector(double t, int parity, const SolveOptions& opt = {});

// Extend coefficients to n < m_target with the double-precision system,
// certified against a second anchor; updates extension_digits.
void maass_extend(MaassForm& f, int m_target);

SatakePair maass_satake(const MaassForm& f, std::uint64_t p);

GL2Form gl2_from_maass(const MaassForm& f);

std::string maass_to_json(const MaassForm& f);
MaassForm maass_from_json(const std::string& text);

}  // namespace mfv
