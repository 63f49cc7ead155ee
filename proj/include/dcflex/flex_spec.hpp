#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcflex/flexload.hpp"
#include "dcflex/netcase.hpp"

namespace dcflex {

/// DC load synthesized from the base profile (growth ratio times nominal
/// load at each DC bus).
struct SuperimposeSpec {
  std::vector<std::string> dc_buses;
  double growth_ratio = 0.0;
  double deferrable_fraction = 0.0;
  double geo_fraction = 0.0;
  int window_h = 0;
};

struct DeferrableSpec {
  std::string id;
  std::string bus;
  int window_h = 0;
  std::vector<double> arrivals_mw;
};

struct GeoConfig {
  std::vector<std::string> buses;
  std::map<std::string, std::vector<double>> baseline_mw;
  std::optional<double> portion;
  std::map<std::string, std::vector<double>> lower_mw;
  std::map<std::string, std::vector<double>> upper_mw;
  std::optional<std::vector<double>> budget_mw;
  double budget_scale = 1.0;
};

/// Flex-spec document: how flexible DC demand is layered on a base profile.
struct FlexSpec {
  std::optional<SuperimposeSpec> superimpose;
  std::vector<DeferrableSpec> deferrable;
  GeoConfig geo;
  double delay_penalty_default = 0.0;
  std::map<std::string, double> delay_penalty_by_class;
  double shift_penalty = 0.0;
};

FlexSpec parse_flex_spec(std::string_view text);
FlexSpec load_flex_spec_file(const std::string& path);
std::string render_flex_spec(const FlexSpec& spec);

/// Resolves a FlexSpec against a network and base profile into a validated
/// LoadSet. Throws ValidationError or Error.
LoadSet build_loadset(const Network& network, const Profile& base, const FlexSpec& spec);

}  // namespace dcflex
