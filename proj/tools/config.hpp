#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dcflex/harness.hpp"
#include "dcflex/profile_gen.hpp"

namespace dcflex::cli {

/// Everything a command may need, after file values and flag overrides.
struct RunConfig {
  std::optional<std::string> case_path;
  std::optional<std::string> profiles_path;
  std::optional<std::string> flex_path;
  std::optional<std::string> out;
  int workers = 1;
  ExpansionOptions options;
  PointParams point;

  std::string sweep_kind = "flexibility";
  FlexGrid grid;
  std::vector<double> growth_ratios;

  SearchRequest search;

  ProfileGenSpec generate;
};

/// Reads a TOML (.toml) or JSON document. Relative paths inside it resolve
/// against the file's directory.
RunConfig load_config(const std::string& path);

json to_json(const RunConfig& config);

}  // namespace dcflex::cli
