#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dcflex {

/// Machine-readable finding produced by a validator. `code` is an
/// upper-snake identifier such as "DANGLING_REFERENCE".
struct Diagnostic {
  std::string code;
  std::string subject;
  std::string message;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Input that parsed but violates a model invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

}  // namespace dcflex
