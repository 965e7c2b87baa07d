#pragma once

#include <functional>
#include <string_view>
#include <variant>
#include <vector>

#include "lightfol/geometry.hpp"

namespace lightfol {

enum class FoliationKind { RLightlike, CoIsotropic, Isotropic, TotallyLightlike };

std::string_view kind_name(FoliationKind k);

// Table of tangentially lightlike classes by (m, q, r).
FoliationKind classify(int m, int q, int r);

struct LevelFunctions {
  std::vector<Expression> functions;  // y^1..y^q
  std::vector<int> pivots;            // 0-based pivot columns; empty = choose at the plan point
};

struct ExplicitFrame {
  std::vector<VectorField> fields;  // spans T(F)
};

// Supplies radical fields directly (e.g. ξ = ∇f) instead of extracting them
// from the Gram nullspace.
using RadicalProvider = std::function<std::vector<JetVec>(const Point&, const MetricJet&)>;

struct FoliationSpec {
  int n = 0;
  std::variant<LevelFunctions, ExplicitFrame> source;
  RadicalProvider radical;                 // optional
  std::vector<VectorField> screen_seed;    // optional candidates for S(TF)
  std::vector<VectorField> perp_seed;      // optional candidates for S(TF^⊥)

  int codim() const;
  int leaf_dim() const { return n - codim(); }
};

enum class DistributionLabel { Tangent, Perp, Radical, ScreenTangent, ScreenPerp };

struct DistributionFrame {
  DistributionLabel label = DistributionLabel::Tangent;
  std::vector<JetVec> fields;
  std::vector<int> signs;  // ε for screen frames, empty otherwise

  int rank() const { return static_cast<int>(fields.size()); }
};

// Pivot decisions taken once at the plan point.
struct FoliationPlan {
  PivotPlan tangent;
  PivotPlan perp;
  PivotPlan radical;
  int radical_rank = 0;
  std::vector<int> screen_choice;
  std::vector<int> perp_choice;
};

struct FoliatedPoint {
  Point p;
  MetricJet metric;
  DistributionFrame tangent, perp, radical, screen_tan, screen_perp;
};

// Pseudo-Gram–Schmidt with sign bookkeeping. With `fixed` the same candidate
// indices are reused and a vanishing pivot raises RankDrop; otherwise
// candidates are scanned in order and exhaustion raises DegenerateScreen.
struct ScreenResult {
  std::vector<JetVec> fields;
  std::vector<int> signs;
  std::vector<int> choice;
};
ScreenResult pseudo_gram_schmidt(const JetMat& g, const std::vector<JetVec>& candidates, int target,
                                 const std::vector<int>* fixed = nullptr);

// Radical of a frame under a (possibly degenerate) symmetric form g. With a
// null plan the pivots are chosen here and written to *plan_out.
std::vector<JetVec> radical_of_frame(const JetMat& g, const std::vector<JetVec>& frame,
                                     const PivotPlan* plan, PivotPlan* plan_out = nullptr,
                                     int* rank_out = nullptr);

class FoliationEngine {
 public:
  FoliationEngine(MetricField metric, FoliationSpec spec, const Point& plan_point);

  FoliatedPoint build(const Point& p) const;

  const MetricField& metric() const { return metric_; }
  const FoliationSpec& spec() const { return spec_; }
  const FoliationPlan& plan() const { return plan_; }
  int n() const { return spec_.n; }
  int m() const { return spec_.leaf_dim(); }
  int q() const { return spec_.codim(); }
  int r() const { return plan_.radical_rank; }
  FoliationKind kind() const { return classify(m(), q(), r()); }

 private:
  FoliatedPoint assemble(const Point& p, FoliationPlan* plan) const;

  MetricField metric_;
  FoliationSpec spec_;
  FoliationPlan plan_;
};

// Single-point conveniences: plan and evaluate at p.
DistributionFrame tangent_frame(const MetricField& m, const FoliationSpec& spec, const Point& p);
DistributionFrame perp_frame(const MetricField& m, const FoliationSpec& spec, const Point& p);
DistributionFrame radical_frame(const MetricField& m, const FoliationSpec& spec, const Point& p);
DistributionFrame screen_tangent(const MetricField& m, const FoliationSpec& spec, const Point& p);
DistributionFrame screen_perp(const MetricField& m, const FoliationSpec& spec, const Point& p);

}  // namespace lightfol
