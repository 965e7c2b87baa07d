#pragma once

#include <ostream>
#include <string_view>

#include "lightfol/checks.hpp"

namespace lightfol {

enum class ReportFormat { Text, JsonLines };

ReportFormat parse_format(std::string_view s);

// Text: a human-readable table, one row per check.
// JsonLines: a header record, then one record per (check, sample) with
// fields check, sample_index, point, residual, tolerance, pass. Residuals of
// failed evaluations are written as null together with an "error" field.
void emit_report(const Report& report, ReportFormat format, std::ostream& out);

}  // namespace lightfol
