#include "lightfol/errors.hpp"

#include <sstream>

namespace lightfol {

std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::Dimension: return "DimensionError";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::RankDrop: return "RankDrop";
    case ErrorKind::NotLightlike: return "NotLightlike";
    case ErrorKind::NonConstantRank: return "NonConstantRank";
    case ErrorKind::DegenerateScreen: return "DegenerateScreen";
    case ErrorKind::InvalidRank: return "InvalidRank";
    case ErrorKind::InvalidSeed: return "InvalidSeed";
    case ErrorKind::SingularPairing: return "SingularPairing";
    case ErrorKind::IncompleteFrame: return "IncompleteFrame";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::DegreeUnderflow: return "DegreeUnderflow";
    case ErrorKind::NotTransversal: return "NotTransversal";
    case ErrorKind::ConventionMismatch: return "ConventionMismatch";
    case ErrorKind::NotAutomorphism: return "NotAutomorphism";
    case ErrorKind::DegeneratePairing: return "DegeneratePairing";
    case ErrorKind::NotBasic: return "NotBasic";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::HypothesisFailure: return "HypothesisFailure";
    case ErrorKind::NotLightlikeFunction: return "NotLightlikeFunction";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::InvalidSignature: return "InvalidSignature";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::NonPositiveWarp: return "NonPositiveWarp";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::InsufficientOrder: return "InsufficientOrder";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

SyntaxError::SyntaxError(std::size_t position, std::string expected)
    : Error(ErrorKind::Syntax,
            "at position " + std::to_string(position) + ", expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

DimensionError::DimensionError(std::string symbol, int dim)
    : Error(ErrorKind::Dimension, symbol + " exceeds chart dimension " + std::to_string(dim)),
      symbol_(std::move(symbol)),
      dim_(dim) {}

static std::string describe_point(const std::vector<double>& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

DomainError::DomainError(std::string node, std::vector<double> point)
    : Error(ErrorKind::Domain, node + " undefined at " + describe_point(point)),
      node_(std::move(node)),
      point_(std::move(point)) {}

ParseError::ParseError(int line, const std::string& message)
    : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace lightfol
