#pragma once

// Small helpers for strict schema reading on top of nlohmann::json.

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace dcflex {

using json = nlohmann::json;

/// Parses JSON text; syntax errors become ParseError with line/column.
json parse_json(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

struct JsonItem {
  const json& value;
  std::string path;
};

/// View of a JSON object that reports schema errors with a dotted path.
class JsonObject {
 public:
  JsonObject(const json& value, std::string path);

  void allow_only(std::initializer_list<std::string_view> keys) const;
  bool has(std::string_view key) const;
  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  std::string string(std::string_view key) const;
  double number(std::string_view key) const;
  double number_or(std::string_view key, double fallback) const;
  std::optional<double> optional_number(std::string_view key) const;
  long integer(std::string_view key) const;
  bool boolean_or(std::string_view key, bool fallback) const;
  std::vector<JsonItem> array(std::string_view key) const;
  std::vector<double> numbers(std::string_view key) const;
  std::vector<std::string> strings(std::string_view key) const;
  JsonObject object(std::string_view key) const;
  /// Object whose values are arrays of numbers, e.g. {"b1": [1, 2]}.
  std::map<std::string, std::vector<double>> number_series(std::string_view key) const;

 private:
  const json& at(std::string_view key) const;
  std::string child(std::string_view key) const;

  const json& value_;
  std::string path_;
};

}  // namespace dcflex
