#include "lightfol/foliation.hpp"

#include <cmath>

namespace lightfol {

std::string_view kind_name(FoliationKind k) {
  switch (k) {
    case FoliationKind::RLightlike: return "r-lightlike";
    case FoliationKind::CoIsotropic: return "co-isotropic";
    case FoliationKind::Isotropic: return "isotropic";
    case FoliationKind::TotallyLightlike: return "totally lightlike";
  }
  return "?";
}

FoliationKind classify(int m, int q, int r) {
  if (r < 1 || r > std::min(m, q))
    throw Error(ErrorKind::InvalidRank, "r = " + std::to_string(r) + " with m = " + std::to_string(m) +
                                            ", q = " + std::to_string(q));
  if (r < std::min(m, q)) return FoliationKind::RLightlike;
  if (r == q && q < m) return FoliationKind::CoIsotropic;
  if (r == m && m < q) return FoliationKind::Isotropic;
  return FoliationKind::TotallyLightlike;
}

int FoliationSpec::codim() const {
  if (const auto* lf = std::get_if<LevelFunctions>(&source)) return static_cast<int>(lf->functions.size());
  return n - static_cast<int>(std::get<ExplicitFrame>(source).fields.size());
}

namespace {

Eigen::MatrixXd stack(const std::vector<JetVec>& vs, int n) {
  Eigen::MatrixXd m(static_cast<int>(vs.size()), n);
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (int j = 0; j < n; ++j) m(static_cast<int>(a), j) = vs[a][j].value();
  return m;
}

double euclid(const JetVec& v) {
  double s = 0.0;
  for (const Jet& x : v) s += x.value() * x.value();
  return std::sqrt(s);
}

std::vector<JetVec> eval_fields(const std::vector<VectorField>& fs, const Point& p) {
  std::vector<JetVec> r;
  for (const auto& f : fs) r.push_back(f.at(p));
  return r;
}

JetVec combine(const std::vector<Jet>& coeffs, const std::vector<JetVec>& frame, int n) {
  JetVec v(static_cast<std::size_t>(n), Jet(0.0));
  for (std::size_t a = 0; a < frame.size(); ++a)
    for (int j = 0; j < n; ++j) v[j] += coeffs[a] * frame[a][j];
  return v;
}

// max_a |g(v, E_a)| / (|v| |E_a| scale)
double orthogonality_defect(const JetMat& g, const JetVec& v, const std::vector<JetVec>& frame) {
  const double scale = std::max(g.values().cwiseAbs().maxCoeff(), 1e-300);
  double worst = 0.0;
  for (const auto& e : frame) {
    const double d = std::abs(inner(g, v, e).value()) / (euclid(v) * euclid(e) * scale + 1e-300);
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace

ScreenResult pseudo_gram_schmidt(const JetMat& g, const std::vector<JetVec>& candidates, int target,
                                 const std::vector<int>* fixed) {
  ScreenResult res;
  if (target <= 0) return res;
  auto reduce = [&](const JetVec& c) {
    JetVec u = c;
    for (std::size_t b = 0; b < res.fields.size(); ++b) {
      const Jet coef = static_cast<double>(res.signs[b]) * inner(g, c, res.fields[b]);
      u = u - coef * res.fields[b];
    }
    return u;
  };
  auto accept = [&](const JetVec& u, const Jet& s, int idx) {
    const int eps = s.value() > 0 ? 1 : -1;
    const Jet norm = sqrt(static_cast<double>(eps) * s);
    JetVec x = u;
    for (auto& c : x) c /= norm;
    res.fields.push_back(std::move(x));
    res.signs.push_back(eps);
    res.choice.push_back(idx);
  };
  if (fixed) {
    for (int idx : *fixed) {
      const JetVec u = reduce(candidates[static_cast<std::size_t>(idx)]);
      const Jet s = inner(g, u, u);
      if (std::abs(s.value()) < 1e-8) throw Error(ErrorKind::RankDrop, "screen pivot vanished at sample point");
      accept(u, s, idx);
    }
    return res;
  }
  // A candidate that is null now may become usable after later ones are
  // removed from it, so rescan from the start after every acceptance.
  std::vector<bool> used(candidates.size(), false);
  bool progress = true;
  while (progress && static_cast<int>(res.fields.size()) < target) {
    progress = false;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      const JetVec u = reduce(candidates[i]);
      const Jet s = inner(g, u, u);
      if (std::abs(s.value()) < 1e-8) continue;
      accept(u, s, static_cast<int>(i));
      used[i] = true;
      progress = true;
      break;
    }
  }
  if (static_cast<int>(res.fields.size()) < target)
    throw Error(ErrorKind::DegenerateScreen, "every candidate leaves a null Gram pivot");
  return res;
}

std::vector<JetVec> radical_of_frame(const JetMat& g, const std::vector<JetVec>& frame, const PivotPlan* plan,
                                     PivotPlan* plan_out, int* rank_out) {
  const int m = static_cast<int>(frame.size());
  const int n = g.rows();
  JetMat gram(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      gram(a, b) = inner(g, frame[a], frame[b]);
      gram(b, a) = gram(a, b);
    }
  const int rank_g = numeric_rank(gram.values());
  PivotPlan chosen;
  if (!plan) {
    chosen = plan_pivots(gram.values(), rank_g);
    if (plan_out) *plan_out = chosen;
    plan = &chosen;
  } else if (static_cast<int>(plan->cols.size()) != rank_g) {
    throw Error(ErrorKind::NonConstantRank, "radical rank changed between samples");
  }
  if (rank_out) *rank_out = m - rank_g;
  std::vector<JetVec> xi;
  for (const JetVec& c : nullspace(gram, *plan)) xi.push_back(combine(c, frame, n));
  return xi;
}

namespace {

// Tangent and normal frames only; defined for every foliation, lightlike or not.
void tangent_and_perp(const FoliationSpec& spec_, FoliatedPoint& fp, const FoliationPlan& plan,
                      FoliationPlan* planning) {
  const int n = spec_.n, m = spec_.leaf_dim(), q = spec_.codim();
  const Point& p = fp.p;
  const JetMat& g = fp.metric.g;
  fp.tangent.label = DistributionLabel::Tangent;
  fp.perp.label = DistributionLabel::Perp;
  JetMat jac;  // level-function Jacobian, q x n
  if (const auto* lf = std::get_if<LevelFunctions>(&spec_.source)) {
    jac = JetMat(q, n);
    for (int a = 0; a < q; ++a) {
      const Jet y = eval_jet(lf->functions[a], p);
      for (int j = 0; j < n; ++j) jac(a, j) = y.partial(j);
    }
    if (numeric_rank(jac.values(), 1e-10) < q) throw Error(ErrorKind::RankDrop, "level functions dependent");
    if (planning) {
      planning->tangent = lf->pivots.empty() ? plan_pivots(jac.values(), q)
                                             : plan_with_columns(q, lf->pivots);
      if (static_cast<int>(planning->tangent.cols.size()) != q)
        throw Error(ErrorKind::Validation, "need exactly q pivot columns");
    }
    fp.tangent.fields = nullspace(jac, plan.tangent);
    for (int a = 0; a < q; ++a) fp.perp.fields.push_back(fp.metric.ginv * jac.row(a));
  } else {
    fp.tangent.fields = eval_fields(std::get<ExplicitFrame>(spec_.source).fields, p);
    if (numeric_rank(stack(fp.tangent.fields, n), 1e-10) < m)
      throw Error(ErrorKind::RankDrop, "tangent frame dependent");
    JetMat a(m, n);
    for (int r = 0; r < m; ++r) {
      const JetVec row = g * fp.tangent.fields[r];
      for (int j = 0; j < n; ++j) a(r, j) = row[j];
    }
    if (planning) planning->perp = plan_pivots(a.values(), m);
    fp.perp.fields = nullspace(a, plan.perp);
  }

}

}  // namespace

FoliationEngine::FoliationEngine(MetricField metric, FoliationSpec spec, const Point& plan_point)
    : metric_(std::move(metric)), spec_(std::move(spec)) {
  if (spec_.n != metric_.dim()) throw Error(ErrorKind::Validation, "foliation and metric dimensions differ");
  if (spec_.codim() < 1 || spec_.codim() >= spec_.n)
    throw Error(ErrorKind::Validation, "codimension must lie in [1, n-1]");
  assemble(plan_point, &plan_);
}

FoliatedPoint FoliationEngine::build(const Point& p) const { return assemble(p, nullptr); }

FoliatedPoint FoliationEngine::assemble(const Point& p, FoliationPlan* planning) const {
  const int n = spec_.n, m = spec_.leaf_dim(), q = spec_.codim();
  const FoliationPlan& plan = planning ? *planning : plan_;
  FoliatedPoint fp;
  fp.p = p;
  check_signature(metric_, p);
  fp.metric = metric_jet(metric_, p);
  const JetMat& g = fp.metric.g;

  tangent_and_perp(spec_, fp, planning ? *planning : plan_, planning);

  fp.radical.label = DistributionLabel::Radical;
  if (spec_.radical) {
    fp.radical.fields = spec_.radical(p, fp.metric);
    for (const auto& xi : fp.radical.fields) {
      if (orthogonality_defect(g, xi, fp.tangent.fields) > 1e-9)
        throw Error(ErrorKind::InvalidSeed, "supplied radical field is not g-orthogonal to T(F)");
      std::vector<JetVec> ext = fp.tangent.fields;
      ext.push_back(xi);
      if (numeric_rank(stack(ext, n), 1e-9) > m)
        throw Error(ErrorKind::InvalidSeed, "supplied radical field is not tangent");
    }
    int nullity = 0;
    PivotPlan unused;
    radical_of_frame(g, fp.tangent.fields, nullptr, &unused, &nullity);
    if (nullity != fp.radical.rank())
      throw Error(ErrorKind::InvalidSeed, "supplied radical rank differs from the Gram nullity");
    if (planning) planning->radical_rank = nullity;
    else if (nullity != plan.radical_rank)
      throw Error(ErrorKind::NonConstantRank, "radical rank changed between samples");
  } else {
    int rank = 0;
    if (planning) {
      fp.radical.fields = radical_of_frame(g, fp.tangent.fields, nullptr, &planning->radical, &rank);
      planning->radical_rank = rank;
    } else {
      fp.radical.fields = radical_of_frame(g, fp.tangent.fields, &plan.radical, nullptr, &rank);
    }
  }
  const int r = fp.radical.rank();
  if (r == 0) throw Error(ErrorKind::NotLightlike, "induced metric on T(F) is nondegenerate");

  std::vector<JetVec> cand = spec_.screen_seed.empty() ? fp.tangent.fields : eval_fields(spec_.screen_seed, p);
  if (!spec_.screen_seed.empty())
    for (const auto& c : cand) {
      std::vector<JetVec> ext = fp.tangent.fields;
      ext.push_back(c);
      if (numeric_rank(stack(ext, n), 1e-9) > m) throw Error(ErrorKind::InvalidSeed, "screen seed not tangent");
    }
  ScreenResult st = planning ? pseudo_gram_schmidt(g, cand, m - r)
                             : pseudo_gram_schmidt(g, cand, m - r, &plan.screen_choice);
  if (planning) planning->screen_choice = st.choice;
  fp.screen_tan = {DistributionLabel::ScreenTangent, std::move(st.fields), std::move(st.signs)};

  std::vector<JetVec> pc = spec_.perp_seed.empty() ? fp.perp.fields : eval_fields(spec_.perp_seed, p);
  if (!spec_.perp_seed.empty())
    for (const auto& c : pc)
      if (orthogonality_defect(g, c, fp.tangent.fields) > 1e-9)
        throw Error(ErrorKind::InvalidSeed, "perp seed not in T(F)^perp");
  ScreenResult sp = planning ? pseudo_gram_schmidt(g, pc, q - r)
                             : pseudo_gram_schmidt(g, pc, q - r, &plan.perp_choice);
  if (planning) planning->perp_choice = sp.choice;
  fp.screen_perp = {DistributionLabel::ScreenPerp, std::move(sp.fields), std::move(sp.signs)};

  std::vector<JetVec> t = fp.radical.fields;
  t.insert(t.end(), fp.screen_tan.fields.begin(), fp.screen_tan.fields.end());
  if (numeric_rank(stack(t, n), 1e-9) < m) throw Error(ErrorKind::DegenerateScreen, "radical + screen rank deficient");
  std::vector<JetVec> u = fp.radical.fields;
  u.insert(u.end(), fp.screen_perp.fields.begin(), fp.screen_perp.fields.end());
  if (numeric_rank(stack(u, n), 1e-9) < q)
    throw Error(ErrorKind::DegenerateScreen, "radical + perp screen rank deficient");
  return fp;
}

namespace {

FoliatedPoint frames_only(const MetricField& m, const FoliationSpec& spec, const Point& p) {
  if (spec.n != m.dim()) throw Error(ErrorKind::Validation, "foliation and metric dimensions differ");
  FoliatedPoint fp;
  fp.p = p;
  check_signature(m, p);
  fp.metric = metric_jet(m, p);
  FoliationPlan plan;
  tangent_and_perp(spec, fp, plan, &plan);
  return fp;
}

}  // namespace

DistributionFrame tangent_frame(const MetricField& m, const FoliationSpec& spec, const Point& p) {
  return frames_only(m, spec, p).tangent;
}
DistributionFrame perp_frame(const MetricField& m, const FoliationSpec& spec, const Point& p) {
  return frames_only(m, spec, p).perp;
}
DistributionFrame radical_frame(const MetricField& m, const FoliationSpec& spec, const Point& p) {
  return FoliationEngine(m, spec, p).build(p).radical;
}
DistributionFrame screen_tangent(const MetricField& m, const FoliationSpec& spec, const Point& p) {
  return FoliationEngine(m, spec, p).build(p).screen_tan;
}
DistributionFrame screen_perp(const MetricField& m, const FoliationSpec& spec, const Point& p) {
  return FoliationEngine(m, spec, p).build(p).screen_perp;
}

}  // namespace lightfol
