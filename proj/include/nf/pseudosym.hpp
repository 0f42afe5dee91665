#pragma once

// Derivation-condition layer: per-point L fits of T_a . K = L * Q(sigma, K),
// Einstein and eta-Einstein classification, the projected master identity,
// the dichotomy verdict, the Ricci-power corollary report, and the
// Ricci-condition constants.

#include <optional>
#include <vector>

#include "nf/family.hpp"
#include "nf/geometry.hpp"
#include "nf/tensors.hpp"

namespace nf {

// K is T_b's (0,4) tensor for the TT kinds and its Ricci trace for the
// TRicciT kinds; sigma is g for the _g kinds and the Ricci power S^ell for
// the _Sl kinds. ell = 0 reduces an _Sl kind to its _g counterpart.
enum class ConditionKind { TT_g, TT_Sl, TRicciT_g, TRicciT_Sl };

struct ConditionSpec {
  ConditionKind kind = ConditionKind::TT_g;
  CoeffVector ta;
  CoeffVector tb;
  int ell = 1;
};

bool condition_uses_power(ConditionKind k);
bool condition_uses_ricci(ConditionKind k);

// Inner-product projection of lhs onto rhs at one point. degenerate means
// both magnitudes sit below the 1e-10 floor; L is then indeterminate and
// left empty, never zero. When only rhs vanishes, L = 0 records the best
// least-squares value and residual = lhs_mag.
struct FitReport {
  std::optional<double> L;
  double residual = 0.0;
  bool degenerate = false;
  double lhs_mag = 0.0;
  double rhs_mag = 0.0;
  std::vector<double> point;
};

FitReport fit_L(const ConditionSpec& cond, const PointFrame& f);

struct ClassificationReport {
  double einstein_residual = 0.0;    // max-abs(S - (r/n) g)
  double eta_alpha = 0.0;            // least squares S ~ alpha g + beta eta x eta
  double eta_beta = 0.0;
  double eta_residual = 0.0;
  double r = 0.0;
  double k_einstein_residual = 0.0;  // max-abs(S - k (n-1) g)
};

// The eta fit needs the distinguished field; without one beta is pinned to 0.
ClassificationReport classify(const PointFrame& f);

// Both sides of the condition projected along the distinguished field,
// evaluated on random probe vectors at the supplied L. Independent of the
// derive/q_op machinery: every term is a direct vector-level contraction.
// Frames without a declared field use a seeded random projection direction,
// which the identity permits since it is slot substitution, not structure.
double master_identity_check(const ConditionSpec& cond, const PointFrame& f, double L,
                             unsigned seed = 0);

enum class DichotomyVerdict {
  PreconditionFailed,  // a0 + a5 + a6 = 0, the dichotomy does not apply
  EinsteinBranch,      // S = k (n-1) g within tolerance
  LBranch,             // |L - k| within tolerance (degenerate fits admit any L)
  EtaEinsteinBranch,   // contraction coefficient vanishes and S fits eta-Einstein
  Violation,           // none hold: non-pseudosymmetric input or a bug
};

struct DichotomyReport {
  DichotomyVerdict verdict = DichotomyVerdict::Violation;
  double precondition_sum = 0.0;     // a0 + a5 + a6
  double contraction_sum = 0.0;      // a0 + a2 + a3 + n a4 + a5 + a6
  double k_einstein_residual = 0.0;
  double l_gap = 0.0;                // |L - k|, 0 for degenerate fits
  double eta_residual = 0.0;
};

// Fit for the dichotomy condition (R, T_c, g): curvature acts on the family
// tensor with coefficients c, sigma = g.
FitReport dichotomy_fit(const PointFrame& f, const CoeffVector& c);

DichotomyReport dichotomy_check(const PointFrame& f, const CoeffVector& c, const FitReport& fit,
                                double tol_l = 1e-6, double tol_res = 1e-8);

// Ricci-power corollary: on a non-semisymmetric frame with k != 0, compares
// the honest (R, R, S^ell) fit against the predicted 1/(k^(ell-1) (n-1)^ell)
// and S^ell against k^ell (n-1)^ell g. confirmed only when both match;
// otherwise the report carries the residuals and defers.
struct RrslReport {
  bool applicable = false;
  double rr_mag = 0.0;
  int ell = 1;
  double predicted_L = 0.0;
  FitReport fit;
  double l_gap = 0.0;
  double spow_form_residual = 0.0;
  bool confirmed = false;
};

RrslReport rrsl_corollary_check(const PointFrame& f, int ell, double tol_l = 1e-6,
                                double tol_res = 1e-8);

// Constants of the Ricci-condition equation
//   eps a5 S^2 - E S - F g - G eta x eta = L (eps k (n-1) g - eps S).
// equation_residual is filled when an L is supplied.
struct RicciConditionConstants {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;
  std::optional<double> equation_residual;
};

RicciConditionConstants ricci_condition_constants(const PointFrame& f, const CoeffVector& c,
                                                  std::optional<double> L = {});

}  // namespace nf
