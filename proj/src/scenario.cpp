#include "lightfol/scenario.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lightfol {

namespace {

struct Entry {
  std::string key, value;
  int line;
};

using Sections = std::map<std::string, std::vector<Entry>>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::set<std::string>& known_sections() {
  static const std::set<std::string> s = {"manifold", "foliation", "complement", "flow",
                                          "warped",   "checks",    "sampling",   "options"};
  return s;
}

Sections split_sections(const std::string& text) {
  Sections out;
  std::istringstream in(text);
  std::string raw, current;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    const std::string s = trim(raw);
    if (s.empty() || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      current = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!known_sections().count(current)) throw ParseError(line, "unknown section [" + current + "]");
      if (out.count(current)) throw ParseError(line, "duplicate section [" + current + "]");
      out[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    if (current.empty()) throw ParseError(line, "key outside of any section");
    Entry e{trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)), line};
    if (e.key.empty()) throw ParseError(line, "empty key");
    out[current].push_back(std::move(e));
  }
  return out;
}

// Split on commas that are not nested in parentheses.
std::vector<std::string> split_top(std::string_view s, int line) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') {
      if (--depth < 0) throw ParseError(line, "unbalanced ')'");
    } else if (s[i] == ',' && depth == 0) {
      parts.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError(line, "unbalanced '('");
  parts.push_back(trim(s.substr(start)));
  return parts;
}

std::string strip_parens(const std::string& v, int line) {
  if (v.size() < 2 || v.front() != '(' || v.back() != ')') throw ParseError(line, "expected '( ... )'");
  return v.substr(1, v.size() - 2);
}

Expression expr(const std::string& text, int dim, int line) {
  try {
    return parse_expression(text, dim);
  } catch (const SyntaxError& e) {
    throw ParseError(line, "in '" + text + "': column " + std::to_string(e.position()) + ", expected " + e.expected());
  } catch (const DimensionError& e) {
    throw ParseError(line, "in '" + text + "': " + e.what());
  }
}

double number(const std::string& text, int line) {
  const Expression e = expr(text, 0, line);
  return eval_value(e, {});
}

int integer(const std::string& text, int line) {
  int v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) throw ParseError(line, "expected an integer, got '" + text + "'");
  return v;
}

std::vector<Expression> expr_list(const std::string& v, int dim, int line) {
  std::vector<Expression> out;
  for (const auto& p : split_top(strip_parens(v, line), line)) out.push_back(expr(p, dim, line));
  return out;
}

std::vector<double> number_list(const std::string& v, int line) {
  std::vector<double> out;
  for (const auto& p : split_top(strip_parens(v, line), line)) out.push_back(number(p, line));
  return out;
}

VectorField field(const Entry& e, int dim) {
  auto c = expr_list(e.value, dim, e.line);
  if (static_cast<int>(c.size()) != dim)
    throw ParseError(e.line, "vector '" + e.key + "' has " + std::to_string(c.size()) + " components, expected " +
                                 std::to_string(dim));
  return VectorField(std::move(c));
}

// Metric entries from `<prefix>metric = diag(...)` and `<prefix>g_i_j = expr`.
std::vector<Expression> metric_entries(const std::vector<Entry>& es, const std::string& prefix, int dim,
                                       int section_line) {
  std::vector<Expression> g(static_cast<std::size_t>(dim * dim), Expression::literal(0.0));
  bool any = false;
  for (const auto& e : es) {
    if (e.key == prefix + "metric") {
      const std::string v = e.value;
      if (v.rfind("diag", 0) != 0) throw ParseError(e.line, "metric must be diag(...) or given entrywise");
      const auto d = expr_list(trim(v.substr(4)), dim, e.line);
      if (static_cast<int>(d.size()) != dim) throw ParseError(e.line, "diag needs " + std::to_string(dim) + " entries");
      for (int i = 0; i < dim; ++i) g[static_cast<std::size_t>(i * dim + i)] = d[i];
      any = true;
    } else if (e.key.rfind(prefix + "g_", 0) == 0) {
      const std::string rest = e.key.substr(prefix.size() + 2);
      const auto us = rest.find('_');
      if (us == std::string::npos) throw ParseError(e.line, "expected g_i_j");
      const int i = integer(rest.substr(0, us), e.line) - 1, j = integer(rest.substr(us + 1), e.line) - 1;
      if (i < 0 || j < 0 || i >= dim || j >= dim) throw ParseError(e.line, "metric index out of range");
      const Expression x = expr(e.value, dim, e.line);
      g[static_cast<std::size_t>(i * dim + j)] = x;
      g[static_cast<std::size_t>(j * dim + i)] = x;
      any = true;
    }
  }
  if (!any) throw ParseError(section_line, "no " + prefix + "metric given");
  return g;
}

const Entry* find(const std::vector<Entry>& es, const std::string& key) {
  const Entry* f = nullptr;
  for (const auto& e : es)
    if (e.key == key) {
      if (f) throw ParseError(e.line, "duplicate key '" + key + "'");
      f = &e;
    }
  return f;
}

const Entry& require(const std::vector<Entry>& es, const std::string& key, const std::string& section) {
  const Entry* e = find(es, key);
  if (!e) throw Error(ErrorKind::Validation, "[" + section + "] is missing '" + key + "'");
  return *e;
}

void reject_unknown(const std::vector<Entry>& es, const std::set<std::string>& keys,
                    const std::vector<std::string>& prefixes) {
  for (const auto& e : es) {
    if (keys.count(e.key)) continue;
    bool ok = false;
    for (const auto& p : prefixes) ok = ok || e.key.rfind(p, 0) == 0;
    if (!ok) throw ParseError(e.line, "unknown key '" + e.key + "'");
  }
}

int first_line(const std::vector<Entry>& es) { return es.empty() ? 0 : es.front().line; }

}  // namespace

std::string ScenarioFile::xi_provenance() const {
  switch (kind) {
    case ScenarioKind::Flow:
      return "flow field";
    case ScenarioKind::Warped:
      return "fibre radical";
    default:
      return radical_gradient ? "gradient of level function" : "Gram nullspace of T(F)";
  }
}

std::string ScenarioFile::complement_provenance() const {
  std::string s;
  for (const auto& v : kind == ScenarioKind::Flow ? std::vector<VectorField>{} : complement) {
    s += s.empty() ? "" : "; ";
    s += "(";
    for (int i = 0; i < v.dim(); ++i) s += (i ? ", " : "") + v[i].to_string();
    s += ")";
  }
  if (kind == ScenarioKind::Flow && v) {
    s = "(";
    for (int i = 0; i < v->dim(); ++i) s += (i ? ", " : "") + (*v)[i].to_string();
    s += ")";
  }
  return s.empty() ? "none" : s;
}

ScenarioFile parse_scenario(const std::string& text, const std::string& name) {
  const Sections sec = split_sections(text);
  ScenarioFile s;
  s.name = name;
  // [manifold] is read before the structural checks so that a malformed value
  // is reported with its line rather than hidden behind a missing section.
  if (sec.count("manifold")) {
    const auto& m = sec.at("manifold");
    reject_unknown(m, {"dim", "index", "metric"}, {"g_"});
    const Entry& d = require(m, "dim", "manifold");
    s.dim = integer(d.value, d.line);
    if (s.dim < 2 || s.dim > kMaxDim) throw ParseError(d.line, "dim must lie in [2, " + std::to_string(kMaxDim) + "]");
    const Entry& ix = require(m, "index", "manifold");
    s.index = integer(ix.value, ix.line);
    try {
      s.metric.emplace(s.dim, s.index, metric_entries(m, "", s.dim, first_line(m)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(first_line(m), e.what());
    }
  }

  const int kinds = static_cast<int>(sec.count("foliation") + sec.count("flow") + sec.count("warped"));
  if (kinds != 1) throw Error(ErrorKind::Validation, "exactly one of [foliation], [flow], [warped] is required");
  s.kind = sec.count("flow") ? ScenarioKind::Flow : sec.count("warped") ? ScenarioKind::Warped : ScenarioKind::Foliation;
  if (s.kind != ScenarioKind::Warped && !s.metric) throw Error(ErrorKind::Validation, "missing [manifold]");
  if (s.kind == ScenarioKind::Warped && s.metric) {
    s.metric.reset();
    s.dim = s.index = 0;
  }

  if (s.kind == ScenarioKind::Foliation) {
    const auto& f = sec.at("foliation");
    reject_unknown(f, {"level", "pivots", "frame", "radical", "screen", "perp"}, {});
    for (const auto& e : f) {
      if (e.key == "level") s.levels.push_back(expr(e.value, s.dim, e.line));
      else if (e.key == "frame") s.frame.push_back(field(e, s.dim));
      else if (e.key == "screen") s.screen_seed.push_back(field(e, s.dim));
      else if (e.key == "perp") s.perp_seed.push_back(field(e, s.dim));
      else if (e.key == "pivots") {
        for (const auto& p : split_top(e.value, e.line)) {
          const int c = integer(p, e.line);
          if (c < 1 || c > s.dim) throw ParseError(e.line, "pivot column out of range");
          s.pivots.push_back(c - 1);
        }
      } else if (e.key == "radical") {
        if (e.value == "gradient") s.radical_gradient = true;
        else if (e.value != "gram") throw ParseError(e.line, "radical must be 'gradient' or 'gram'");
      }
    }
    if (s.levels.empty() == s.frame.empty())
      throw Error(ErrorKind::Validation, "[foliation] needs either level functions or a frame");
    if (s.radical_gradient && s.levels.size() != 1)
      throw Error(ErrorKind::Validation, "radical = gradient needs exactly one level function");
    if (sec.count("complement")) {
      const auto& c = sec.at("complement");
      reject_unknown(c, {"V"}, {});
      for (const auto& e : c) s.complement.push_back(field(e, s.dim));
    }
  } else if (s.kind == ScenarioKind::Flow) {
    const auto& f = sec.at("flow");
    reject_unknown(f, {"xi", "V", "W"}, {});
    s.xi = field(require(f, "xi", "flow"), s.dim);
    s.v = field(require(f, "V", "flow"), s.dim);
    if (const Entry* w = find(f, "W")) s.w = field(*w, s.dim);
  } else {
    const auto& w = sec.at("warped");
    reject_unknown(w, {"base_dim", "base_index", "base_metric", "fibre_dim", "fibre_metric", "ambient_dim",
                       "ambient_index", "ambient_metric", "embedding", "warp", "rho"},
                   {"base_g_", "fibre_g_", "ambient_g_"});
    const Entry& bd = require(w, "base_dim", "warped");
    const int q = integer(bd.value, bd.line);
    const Entry* bi = find(w, "base_index");
    const int qi = bi ? integer(bi->value, bi->line) : 0;
    const Entry& fd = require(w, "fibre_dim", "warped");
    const int m = integer(fd.value, fd.line);
    if (q < 1 || m < 1 || q + m > kMaxDim) throw ParseError(fd.line, "warped dimensions out of range");
    WarpedSpec ws{MetricField(q, qi, metric_entries(w, "base_", q, bd.line)), {}, Expression::literal(1.0), {}};
    ws.fibre.dim = m;
    if (const Entry* emb = find(w, "embedding")) {
      const Entry& ad = require(w, "ambient_dim", "warped");
      const int na = integer(ad.value, ad.line);
      const Entry* ai = find(w, "ambient_index");
      ws.fibre.ambient.emplace(na, ai ? integer(ai->value, ai->line) : 0, metric_entries(w, "ambient_", na, ad.line));
      ws.fibre.embedding = expr_list(emb->value, m, emb->line);
      if (static_cast<int>(ws.fibre.embedding.size()) != na)
        throw ParseError(emb->line, "embedding needs " + std::to_string(na) + " components");
    } else {
      ws.fibre.entries = metric_entries(w, "fibre_", m, fd.line);
    }
    const Entry& wf = require(w, "warp", "warped");
    ws.warp = expr(wf.value, q, wf.line);
    if (const Entry* r = find(w, "rho")) ws.rho = integer(r->value, r->line);
    s.warped = std::move(ws);
    s.dim = q + m;
  }

  if (sec.count("checks")) {
    const auto& c = sec.at("checks");
    reject_unknown(c, {"names"}, {});
    for (const auto& e : c)
      for (const auto& n : split_top(e.value, e.line))
        if (!n.empty()) s.checks.push_back(n);
  }

  if (!sec.count("sampling")) throw Error(ErrorKind::Validation, "missing [sampling]");
  {
    const auto& sm = sec.at("sampling");
    reject_unknown(sm, {"point", "box", "count", "seed"}, {"box.x"});
    Box box;
    bool has_box = false;
    for (const auto& e : sm) {
      if (e.key == "point") {
        auto p = number_list(e.value, e.line);
        if (static_cast<int>(p.size()) != s.dim) throw ParseError(e.line, "point has wrong dimension");
        s.points.push_back(std::move(p));
      } else if (e.key == "box") {
        const auto lh = split_top(e.value, e.line);
        if (lh.size() != 2) throw ParseError(e.line, "box = lo, hi");
        box.lo.assign(static_cast<std::size_t>(s.dim), number(lh[0], e.line));
        box.hi.assign(static_cast<std::size_t>(s.dim), number(lh[1], e.line));
        has_box = true;
      } else if (e.key == "count") {
        s.count = integer(e.value, e.line);
      } else if (e.key == "seed") {
        std::uint64_t v = 0;
        const auto r = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
        if (r.ec != std::errc() || r.ptr != e.value.data() + e.value.size()) throw ParseError(e.line, "bad seed");
        s.seed = v;
      }
    }
    for (const auto& e : sm) {
      if (e.key.rfind("box.x", 0) != 0) continue;
      if (!has_box) throw ParseError(e.line, "box.xi needs a preceding box");
      const int i = integer(e.key.substr(5), e.line) - 1;
      if (i < 0 || i >= s.dim) throw ParseError(e.line, "box coordinate out of range");
      const auto lh = split_top(e.value, e.line);
      if (lh.size() != 2) throw ParseError(e.line, "box.xi = lo, hi");
      box.lo[i] = number(lh[0], e.line);
      box.hi[i] = number(lh[1], e.line);
    }
    if (has_box) s.box = box;
    if (s.points.empty() && !has_box) throw Error(ErrorKind::Validation, "[sampling] needs points or a box");
  }

  if (sec.count("options")) {
    const auto& o = sec.at("options");
    reject_unknown(o, {"convention", "kappa_offset", "divergence", "divergence.Y", "gauge.f", "gauge.a", "gauge.b",
                       "gauge.z"},
                   {"tol.", "expect."});
    for (const auto& e : o) {
      try {
        if (e.key == "convention") s.convention = parse_convention(e.value);
      } catch (const Error& err) {
        throw ParseError(e.line, err.what());
      }
      if (e.key == "kappa_offset") s.kappa_offset = number(e.value, e.line);
      else if (e.key == "divergence") {
        if (e.value == "literal") s.divergence = DivergenceForm::Literal;
        else if (e.value == "sign-flip") s.divergence = DivergenceForm::SignFlip;
        else if (e.value == "corrected") s.divergence = DivergenceForm::Corrected;
        else throw ParseError(e.line, "divergence must be literal, sign-flip or corrected");
      } else if (e.key == "divergence.Y") s.divergence_field = field(e, s.dim);
      else if (e.key == "gauge.f") s.gauge_f = expr_list(e.value, s.dim, e.line);
      else if (e.key == "gauge.a") s.gauge_a = expr_list(e.value, s.dim, e.line);
      else if (e.key == "gauge.b") s.gauge_b = expr_list(e.value, s.dim, e.line);
      else if (e.key == "gauge.z") s.gauge_z = number_list(e.value, e.line);
      else if (e.key.rfind("tol.", 0) == 0) s.tolerances[e.key.substr(4)] = number(e.value, e.line);
      else if (e.key.rfind("expect.", 0) == 0) s.expect[e.key.substr(7)] = e.value;
    }
  }
  return s;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (const auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_scenario(ss.str(), name);
}

std::vector<Point> scenario_samples(const ScenarioFile& s, std::optional<std::uint64_t> seed,
                                    std::optional<int> count) {
  std::vector<Point> pts = s.points;
  if (s.box) {
    const auto drawn = sample_box(*s.box, count.value_or(s.count), seed.value_or(s.seed));
    pts.insert(pts.end(), drawn.begin(), drawn.end());
  } else if (count && *count < static_cast<int>(pts.size())) {
    pts.resize(static_cast<std::size_t>(*count));
  }
  return pts;
}

std::string fol45_scenario_text(int n, int s) {
  // Validates (n, s) and self-checks the seed.
  (void)flat_corollary_scenario(n, s);
  const std::string c = "sqrt(" + std::to_string(n - s) + "/" + std::to_string(s) + ")";
  std::ostringstream o;
  o << "# Flat lightlike-function scenario on R^" << n << "_" << s << ": level sets of a linear null function.\n";
  o << "[manifold]\ndim = " << n << "\nindex = " << s << "\nmetric = diag(";
  for (int i = 0; i < n; ++i) o << (i ? ", " : "") << (i < s ? "-1" : "1");
  o << ")\n\n[foliation]\nlevel = ";
  for (int i = 1; i <= n; ++i) o << (i > 1 ? " + " : "") << (i <= s ? c + "*" : "") << "x" << i;
  o << "\nradical = gradient\n";
  for (int a = 1; a <= n - 2; ++a) {
    o << "screen = (";
    for (int j = 1; j <= n; ++j) {
      std::string v = "0";
      if (a <= s - 1) {
        if (j == a) v = "1";
        if (j == n) v = "-" + c;
      } else {
        if (j == a + 1) v = "1";
        if (j == n) v = "-1";
      }
      o << (j > 1 ? ", " : "") << v;
    }
    o << ")\n";
  }
  o << "\n[complement]\nV = (";
  for (int j = 1; j <= n; ++j) o << (j > 1 ? ", " : "") << (j <= s - 1 ? "-" + c : "1");
  o << ")\n\n[checks]\nnames = lightlike, n_levelset, kappa_n, second_fundamental, killing_V, killing_grad,"
       " screen_index, classification, ltr, rad_q, rummler, kappa_routes\n";
  o << "\n[sampling]\nbox = -1, 1\ncount = 8\nseed = 20240101\n";
  o << "\n[options]\nconvention = factorial-alternation\nexpect.kappa_n = 0\nexpect.kind = co-isotropic\n";
  return o.str();
}

FoliationSpec foliation_spec(const ScenarioFile& s) {
  FoliationSpec spec;
  spec.n = s.dim;
  if (!s.levels.empty()) spec.source = LevelFunctions{s.levels, s.pivots};
  else spec.source = ExplicitFrame{s.frame};
  if (s.radical_gradient) {
    const Expression f = s.levels.front();
    spec.radical = [f](const Point& p, const MetricJet& mj) {
      return std::vector<JetVec>{gradient(mj, eval_jet(f, p))};
    };
  }
  spec.screen_seed = s.screen_seed;
  spec.perp_seed = s.perp_seed;
  return spec;
}

LightlikeFunctionScenario lightfn_scenario(const ScenarioFile& s) {
  if (s.kind != ScenarioKind::Foliation || !s.radical_gradient || !s.metric)
    throw Error(ErrorKind::Validation, "not a lightlike-function scenario");
  if (s.complement.size() != 1) throw Error(ErrorKind::Validation, "lightlike-function scenarios need one V");
  return LightlikeFunctionScenario{*s.metric, s.levels.front(), s.complement.front(), s.screen_seed};
}

FlowScenario flow_scenario(const ScenarioFile& s) {
  if (s.kind != ScenarioKind::Flow) throw Error(ErrorKind::Validation, "not a flow scenario");
  return FlowScenario{*s.metric, *s.xi, *s.v, s.w};
}

}  // namespace lightfol
