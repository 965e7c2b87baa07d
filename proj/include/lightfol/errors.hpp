#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lightfol {

enum class ErrorKind {
  Syntax,
  Dimension,
  Domain,
  SingularMetric,
  SignatureMismatch,
  RankDrop,
  NotLightlike,
  NonConstantRank,
  DegenerateScreen,
  InvalidRank,
  InvalidSeed,
  SingularPairing,
  IncompleteFrame,
  DegreeOverflow,
  DegreeUnderflow,
  NotTransversal,
  ConventionMismatch,
  NotAutomorphism,
  DegeneratePairing,
  NotBasic,
  NotClosed,
  HypothesisFailure,
  NotLightlikeFunction,
  NotTangent,
  InvalidSignature,
  IndexMismatch,
  NonPositiveWarp,
  RankMismatch,
  Parse,
  Validation,
  Io,
  InsufficientOrder,
};

std::string_view kind_name(ErrorKind kind);

// Every engine failure is an Error; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected);
  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class DimensionError : public Error {
 public:
  DimensionError(std::string symbol, int dim);
  const std::string& symbol() const noexcept { return symbol_; }
  int dim() const noexcept { return dim_; }

 private:
  std::string symbol_;
  int dim_;
};

class DomainError : public Error {
 public:
  DomainError(std::string node, std::vector<double> point);
  const std::string& node() const noexcept { return node_; }
  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::string node_;
  std::vector<double> point_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace lightfol
