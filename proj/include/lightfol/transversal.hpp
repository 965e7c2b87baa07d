#pragma once

#include <vector>

#include "lightfol/foliation.hpp"

namespace lightfol {

// All adapted frames at one point, Jet-valued so that brackets and exterior
// derivatives of anything built from them are available.
struct FrameBundle {
  Point p;
  int n = 0, m = 0, q = 0, r = 0;
  MetricJet metric;
  std::vector<JetVec> tangent;
  std::vector<JetVec> xi, X, W, N, V;
  std::vector<int> eps_X, eps_W;
  // Dual one-forms as covectors: λ^i = g(·, N_i), μ^i = g(·, ξ_i),
  // ω^a = g(·, X_a), η^α = g(·, W_α).
  std::vector<JetVec> lambda, mu, omega, eta;
};

struct TransversalDecomposition {
  std::vector<double> tan_part, tra_part, ltr_part, screen_perp_part;
};

// Lemma 2.1 construction from a radical frame and complement frame (no
// projection applied to V).
std::vector<JetVec> build_ltr(const JetMat& g, const std::vector<JetVec>& xi, const std::vector<JetVec>& v);

// Complement generators projected onto (S(TF) ⊕ S(TF^⊥))^⊥.
JetVec project_complement(const JetMat& g, const JetVec& v, const std::vector<JetVec>& X,
                          const std::vector<int>& eps_X, const std::vector<JetVec>& W,
                          const std::vector<int>& eps_W);

// Fill lambda/mu/omega/eta from the frames.
void refresh_duals(FrameBundle& b);

// Replace (ξ, V) and rebuild N and the duals.
FrameBundle with_ltr(const FrameBundle& b, std::vector<JetVec> xi, std::vector<JetVec> v);

class BundleEngine {
 public:
  BundleEngine(FoliationEngine foliation, std::vector<VectorField> complement);
  FrameBundle build(const Point& p) const;
  const FoliationEngine& foliation() const { return fol_; }
  const std::vector<VectorField>& complement() const { return complement_; }

 private:
  FoliationEngine fol_;
  std::vector<VectorField> complement_;
};

FrameBundle assemble_bundle(const FoliatedPoint& fp, const std::vector<JetVec>& complement);

// Residual of g(N_i,ξ_j) = δ_ij, g(N_i,N_j) = 0, g(N_i,W_α) = 0, g(N_i,X_a) = 0.
double ltr_residual(const FrameBundle& b);

Jet apply_form(const JetVec& covector, const JetVec& v);

// tan(v) and tra(v) as Jet fields (v may itself be a field or a constant).
JetVec tan_field(const FrameBundle& b, const JetVec& v);
JetVec tra_field(const FrameBundle& b, const JetVec& v);
JetVec ltr_field(const FrameBundle& b, const JetVec& v);

TransversalDecomposition decompose(const FrameBundle& b, const std::vector<double>& v);

// Coefficients of tra(v) in the (W_1.., N_1..) basis.
std::vector<double> class_coordinates(const FrameBundle& b, const std::vector<double>& v);

double g_tra(const FrameBundle& b, const std::vector<double>& s, const std::vector<double>& r);

struct CheckResult {
  bool pass = false;
  double residual = 0.0;
};
CheckResult rad_Q_check(const FrameBundle& b, double tol = 1e-9);

// ∇ on Q = TM/T(F): Bott branch Π[tan X, Y] plus Levi-Civita branch
// Π ∇_{tra X} tra(Y). Y is a field representing the class s. Returns tra(·)
// as a vector; class_coordinates gives the (W, N) coefficients.
std::vector<double> nabla_Q(const FrameBundle& b, const std::vector<double>& x, const JetVec& y);

// T(Y,Z) = ∇_Y ΠZ − ∇_Z ΠY − Π[Y,Z] for fields Y, Z; returns max |component|.
double torsion_Q(const FrameBundle& b, const JetVec& y, const JetVec& z);

struct LtrTransform {
  std::vector<JetVec> rebuilt;
  std::vector<JetVec> closed_form;
  double residual = 0.0;
};
// ξ'_i = F_ij ξ_j, V'_i = a_ij ξ_j + b_ij V_j.
LtrTransform transform_ltr(const FrameBundle& b, const JetMat& f, const JetMat& a, const JetMat& bm);

void check_complete(const FrameBundle& b);

}  // namespace lightfol
