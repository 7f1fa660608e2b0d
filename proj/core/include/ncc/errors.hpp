#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One offending configuration argument.
struct FieldError {
  std::string field;
  std::string message;
};

/// Raised by config validation; carries one entry per offending argument.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<FieldError> fields);
  ConfigError(std::string field, std::string message)
      : ConfigError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}
  const std::vector<FieldError>& fields() const { return fields_; }

 private:
  std::vector<FieldError> fields_;
};

/// Failures of a single analysis. simstudy records these per cell.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

class SingularDesign : public AnalysisError {
 public:
  SingularDesign() : AnalysisError("singular design") {}
};

class SeparationDetected : public AnalysisError {
 public:
  SeparationDetected() : AnalysisError("separation detected") {}
};

class DegenerateStandardError : public AnalysisError {
 public:
  DegenerateStandardError() : AnalysisError("degenerate standard error") {}
};

class NoNonConcurrentControls : public AnalysisError {
 public:
  NoNonConcurrentControls() : AnalysisError("no non-concurrent controls available") {}
};

class DivergentChain : public AnalysisError {
 public:
  explicit DivergentChain(const std::string& block)
      : AnalysisError("divergent chain in block '" + block + "'"), block_(block) {}
  const std::string& block() const { return block_; }

 private:
  std::string block_;
};

/// Malformed CSV/JSON input; message carries the line number when known.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncc
