#pragma once

#include <utility>
#include <vector>

#include "lightfol/exterior.hpp"
#include "lightfol/transversal.hpp"

namespace lightfol {

enum class KappaRoute { Definition, MeanCurvature };

// χ_F = λ^1 ∧ … ∧ λ^r ∧ ω^1 ∧ … ∧ ω^{m−r} and ν_F = μ^1 ∧ … ∧ μ^r ∧ η^1 ∧ … ∧ η^{q−r}.
FormJet chi_form(const FrameBundle& b);
FormJet nu_form(const FrameBundle& b);

// Canonical tuples (ξ_1..ξ_r, X_1..X_{m−r}) and (N_1..N_r, W_1..W_{q−r}).
std::vector<JetVec> tangent_tuple(const FrameBundle& b);
std::vector<JetVec> transversal_tuple(const FrameBundle& b);

// Value of χ_F on the tangent tuple: Π ε_a, divided by m! in factorial mode.
double chi_constant(const FrameBundle& b, Convention conv);
double nu_constant(const FrameBundle& b, Convention conv);

double chi_F(const FrameBundle& b, const std::vector<std::vector<double>>& vectors, Convention conv);
double nu_F(const FrameBundle& b, const std::vector<std::vector<double>>& vectors, Convention conv);

// κ(Z) for an arbitrary Z; only tra(Z) contributes.
Jet kappa(const FrameBundle& b, const JetVec& z, KappaRoute route = KappaRoute::Definition);
double kappa(const FrameBundle& b, const std::vector<double>& z, KappaRoute route = KappaRoute::Definition);
// κ as a one-form (values only).
FormJet kappa_form(const FrameBundle& b, KappaRoute route = KappaRoute::Definition);

// H_{S(TF)} = Σ ε_a (∇_{X_a} X_a)_{S(TF)^⊥}.
JetVec mean_curvature_screen(const FrameBundle& b);

struct RummlerResult {
  double residual = 0.0;
  double kappa = 0.0;
  double lie = 0.0;
  double chi = 0.0;
};
// |(L_Z χ)(ξ, X) + (κ(Z) + kappa_offset) χ(ξ, X)| for a transversal field Z.
RummlerResult rummler_residual(const FrameBundle& b, const JetVec& z, Convention conv,
                               double kappa_offset = 0.0);

struct FiltrationResult {
  bool pass = false;
  int degree = 0;
  double defect = 0.0;  // largest single tangent contraction of the defect
};
// φ = dχ + (m+1) κ ∧ χ under factorial alternation; `coefficient` overrides (m+1).
FiltrationResult rummler_filtration_check(const FrameBundle& b, Convention conv, double kappa_offset = 0.0,
                                          double tol = 1e-7, const double* coefficient = nullptr);

struct GaugeDelta {
  double lhs = 0.0;  // κ(ξ', E')(Z) − κ(ξ, E)(Z)
  double rhs = 0.0;  // trace(f^{-1} Z(f))
};
// ξ'_i = F_ij ξ_j and V'_i = a_ij ξ_j + b_ij V_j. Both sides are evaluated on
// tra(Z); for r >= 2 the new tr' differs from tr unless a = 0 along Z.
GaugeDelta kappa_gauge_delta(const FrameBundle& b, const JetMat& f, const JetMat& a, const JetMat& bm,
                             const std::vector<double>& z);

struct DivergenceResult {
  double div = 0.0;
  double spread = 0.0;  // against a second transversal tuple shifted by tangent vectors
};
// Throws NotAutomorphism when some [X, Y] leaves T(F) by more than tol.
DivergenceResult div_B(const FrameBundle& b, const JetVec& y, Convention conv, double tol = 1e-8);

enum class DivergenceForm {
  Literal,    // d((i_Y ν) ∧ χ) + (−1)^q (m+1) κ(Y) ω, factorial mode only
  SignFlip,   // same with (−1)^{q+1}
  Corrected,  // coefficients that hold in the active convention
};
double divergence_identity_residual(const FrameBundle& b, const JetVec& y, Convention conv,
                                    DivergenceForm form = DivergenceForm::Literal, double kappa_offset = 0.0);

// |g(Z, H) − g_tra(s, τ) − Σ ε_a g(ltr Z, ∇_{X_a} X_a)| with Z replaced by tra(Z).
double tau_screen_relation(const FrameBundle& b, const std::vector<double>& z);

}  // namespace lightfol
