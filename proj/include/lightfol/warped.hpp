#pragma once

#include <optional>
#include <vector>

#include "lightfol/foliation.hpp"

namespace lightfol {

// Degenerate fibre metric, either as explicit entries in fibre coordinates or
// as the pullback j*h of an ambient metric along an embedding j.
struct FibreMetric {
  int dim = 0;
  std::vector<Expression> entries;  // dim × dim, row major; used when no embedding
  std::optional<MetricField> ambient;
  std::vector<Expression> embedding;  // components of j in fibre coordinates
};

struct WarpedSpec {
  MetricField base;  // T, dim q
  FibreMetric fibre;  // B̃, dim m
  Expression warp;    // f on T, in base coordinates
  std::optional<int> rho;  // declared radical rank of the fibre metric
};

// Combined chart: base coordinates first, then fibre coordinates.
JetMat fibre_metric_at(const WarpedSpec& s, std::span<const double> point);
JetMat assemble_warped_metric(const WarpedSpec& s, std::span<const double> point);

struct FibreRadical {
  int rank = 0;                // radical rank of ĝ on Ker dp₁
  int injected_rank = 0;       // nullity of g_B̃
  double span_residual = 0.0;  // ‖P_rad − P_injected‖
  bool pass = false;
};
// Throws RankMismatch when ranks disagree with each other or the declared ρ.
FibreRadical fibre_radical_check(const WarpedSpec& s, std::span<const double> point, double tol = 1e-9);

// Euclidean orthoprojector distance between the spans of two frames.
double span_distance(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

}  // namespace lightfol
