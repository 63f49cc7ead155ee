#include "dcflex/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dcflex/error.hpp"

namespace dcflex {

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i + 1 < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ParseError(path + ": number must be finite");
  return x;
}

}  // namespace

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] " prefix.
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError("JSON syntax error: " + what, line, column);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing file '" + path + "'");
}

JsonObject::JsonObject(const json& value, std::string path)
    : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) throw ParseError(path_ + ": expected an object");
}

void JsonObject::allow_only(std::initializer_list<std::string_view> keys) const {
  for (const auto& [key, _] : value_.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ParseError(path_ + ": unknown key '" + key + "'");
  }
}

bool JsonObject::has(std::string_view key) const {
  return value_.contains(std::string(key)) && !value_.at(std::string(key)).is_null();
}

std::string JsonObject::child(std::string_view key) const {
  return path_ + "." + std::string(key);
}

const json& JsonObject::at(std::string_view key) const {
  if (!has(key)) throw ParseError(path_ + ": missing required key '" + std::string(key) + "'");
  return value_.at(std::string(key));
}

std::string JsonObject::string(std::string_view key) const {
  const auto& v = at(key);
  if (!v.is_string()) throw ParseError(child(key) + ": expected a string");
  return v.get<std::string>();
}

double JsonObject::number(std::string_view key) const { return as_number(at(key), child(key)); }

double JsonObject::number_or(std::string_view key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> JsonObject::optional_number(std::string_view key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

long JsonObject::integer(std::string_view key) const {
  const auto& v = at(key);
  if (v.is_number_integer()) return v.get<long>();
  const double x = as_number(v, child(key));
  if (std::floor(x) != x) throw ParseError(child(key) + ": expected an integer");
  return static_cast<long>(x);
}

bool JsonObject::boolean_or(std::string_view key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_boolean()) throw ParseError(child(key) + ": expected true or false");
  return v.get<bool>();
}

std::vector<JsonItem> JsonObject::array(std::string_view key) const {
  const auto& v = at(key);
  if (!v.is_array()) throw ParseError(child(key) + ": expected an array");
  std::vector<JsonItem> items;
  items.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    items.push_back({v[i], child(key) + "[" + std::to_string(i) + "]"});
  return items;
}

std::vector<double> JsonObject::numbers(std::string_view key) const {
  std::vector<double> out;
  for (const auto& item : array(key)) out.push_back(as_number(item.value, item.path));
  return out;
}

std::vector<std::string> JsonObject::strings(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& item : array(key)) {
    if (!item.value.is_string()) throw ParseError(item.path + ": expected a string");
    out.push_back(item.value.get<std::string>());
  }
  return out;
}

JsonObject JsonObject::object(std::string_view key) const { return JsonObject(at(key), child(key)); }

std::map<std::string, std::vector<double>> JsonObject::number_series(std::string_view key) const {
  const JsonObject obj = object(key);
  std::map<std::string, std::vector<double>> out;
  for (const auto& [name, _] : obj.raw().items()) out[name] = obj.numbers(name);
  return out;
}

}  // namespace dcflex
