#include "dcflex/error.hpp"

namespace dcflex {

namespace {

std::string with_position(const std::string& what, int line, int column) {
  if (line <= 0) return what;
  return what + " (line " + std::to_string(line) + ", column " +
         std::to_string(column) + ")";
}

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  if (diagnostics.empty()) return "validation failed";
  std::string out = "validation failed: " + diagnostics.front().code + ": " +
                    diagnostics.front().message;
  if (diagnostics.size() > 1)
    out += " (+" + std::to_string(diagnostics.size() - 1) + " more)";
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& what, int line, int column)
    : Error(with_position(what, line, column)), line_(line), column_(column) {}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    out += d.code;
    if (!d.subject.empty()) out += " [" + d.subject + "]";
    out += ": " + d.message + "\n";
  }
  return out;
}

}  // namespace dcflex
