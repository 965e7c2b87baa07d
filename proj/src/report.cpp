#include "lightfol/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace lightfol {

namespace {

using json = nlohmann::ordered_json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) {
  if (!std::isfinite(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

void emit_jsonl(const Report& r, std::ostream& out) {
  json head;
  head["scenario"] = r.scenario;
  head["seed"] = r.seed;
  head["samples"] = r.points.size();
  head["convention"] = std::string(convention_name(r.convention));
  head["xi"] = r.xi_provenance;
  head["complement"] = r.complement_provenance;
  json names = json::array();
  for (const auto& c : r.checks) names.push_back(c.name);
  head["checks"] = names;
  out << head.dump() << '\n';
  for (const auto& c : r.checks) {
    for (const auto& s : c.samples) {
      json rec;
      rec["check"] = c.name;
      rec["sample_index"] = s.sample_index;
      rec["point"] = s.point;
      rec["residual"] = number_or_null(s.residual);
      rec["tolerance"] = c.tolerance;
      rec["pass"] = s.pass;
      if (!s.error.empty()) rec["error"] = s.error;
      out << rec.dump() << '\n';
    }
  }
}

void emit_text(const Report& r, std::ostream& out) {
  out << "scenario   " << r.scenario << '\n'
      << "seed       " << r.seed << '\n'
      << "samples    " << r.points.size() << '\n'
      << "convention " << convention_name(r.convention) << '\n'
      << "xi         " << r.xi_provenance << '\n'
      << "complement " << r.complement_provenance << "\n\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-12s %-12s %s\n", "check", "max", "tolerance", "status");
  out << line;
  for (const auto& c : r.checks) {
    std::snprintf(line, sizeof line, "%-20s %-12s %-12s %s\n", c.name.c_str(), fmt(c.max_residual).c_str(),
                  fmt(c.tolerance).c_str(), c.pass ? "PASS" : "FAIL");
    out << line;
    for (const auto& s : c.samples)
      if (!s.error.empty()) {
        out << "    sample " << s.sample_index << ": " << s.error << '\n';
        break;
      }
  }
  out << '\n' << (r.pass() ? "all checks passed" : "some checks FAILED") << '\n';
}

}  // namespace

ReportFormat parse_format(std::string_view s) {
  if (s == "text") return ReportFormat::Text;
  if (s == "jsonl" || s == "json-lines") return ReportFormat::JsonLines;
  throw Error(ErrorKind::Validation, "unknown report format '" + std::string(s) + "'");
}

void emit_report(const Report& report, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::JsonLines) emit_jsonl(report, out);
  else emit_text(report, out);
  if (!out) throw Error(ErrorKind::Io, "failed to write report");
}

}  // namespace lightfol
