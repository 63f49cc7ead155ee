#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcflex/expansion.hpp"
#include "dcflex/flex_spec.hpp"
#include "dcflex/json_util.hpp"

namespace dcflex {

inline constexpr const char* kToolVersion = "0.3.1";

struct Scenario {
  Network network;
  Profile base;
  FlexSpec flex;
  ExpansionOptions options;
};

Scenario load_scenario(const std::string& case_path, const std::string& profiles_path,
                       const std::optional<std::string>& flex_path, const ExpansionOptions& options = {});

enum class Variant { Flex, Firm };
std::string_view to_string(Variant v);

/// Knob settings for one evaluation. Unset knobs keep the scenario's value.
struct PointParams {
  Variant variant = Variant::Flex;
  double line_factor = 1.0;
  std::optional<int> window_h;        // applied to every deferrable class
  std::optional<double> geo_portion;  // replaces explicit shift bounds
  std::optional<double> growth_ratio; // superimposed DC growth
  double budget_scale = 1.0;          // multiplies the hourly shift budget
};

/// Network and loads a point resolves to.
struct ResolvedPoint {
  Network network;
  LoadSet loads;
  FlexSpec spec;
};

ResolvedPoint resolve_point(const Scenario& scenario, const PointParams& params);

struct SweepRecord {
  // Parameters as resolved; empty when not applicable.
  Variant variant = Variant::Flex;
  double line_factor = 1.0;
  std::optional<int> window_h;
  std::optional<double> geo_portion;
  std::optional<double> growth_ratio;
  double budget_scale = 1.0;

  std::string status;
  std::string error;
  bool requires_shed = false;
  double total_cost = 0, investment_cost = 0, operating_cost = 0, delay_cost = 0, shift_cost = 0, shed_cost = 0;
  double added_capacity_mw = 0;
  std::vector<double> added_by_generator;
  double total_shift_mw = 0;
  double max_backlog_mw = 0;
  int binding_line_hours = 0;

  bool optimal() const { return status == "Optimal"; }
};

/// Solves one point; never throws, failures land in status/error.
SweepRecord evaluate_point(const Scenario& scenario, const PointParams& params);

struct RunHooks {
  /// Points for which this returns true are not evaluated (resume).
  std::function<bool(std::size_t)> skip;
  /// Called once per evaluated point, serialized across workers.
  std::function<void(std::size_t, const SweepRecord&)> on_done;
};

/// Evaluates points with up to `workers` threads; output order follows input.
/// Skipped points come back default-constructed.
std::vector<SweepRecord> run_points(const Scenario& scenario, const std::vector<PointParams>& points, int workers,
                                    const RunHooks& hooks = {});

struct FlexGrid {
  std::vector<double> line_factors;
  std::vector<int> windows;
  std::vector<double> geo_portions;
  std::vector<double> budget_scales;
};

/// Cartesian product ordered by (line_factor, window, portion, budget scale),
/// each axis ascending. An empty axis keeps the scenario's value.
std::vector<PointParams> flexibility_points(const FlexGrid& grid);
std::vector<SweepRecord> sweep_flexibility(const Scenario& scenario, const FlexGrid& grid, int workers = 1);

/// Firm and flexible record for each ratio, ratio ascending, firm first.
std::vector<PointParams> penetration_points(const std::vector<double>& growth_ratios);
std::vector<SweepRecord> sweep_penetration(const Scenario& scenario, const std::vector<double>& growth_ratios,
                                           int workers = 1);

/// Smallest window whose total cost is within `rel` of the largest window's
/// cost, among optimal records that differ only in window.
std::optional<int> window_plateau(const std::vector<SweepRecord>& records, double rel = 0.01);

enum class BudgetKind { Investment, Capacity };
enum class Knob { GeoPortion, Window };
std::string_view to_string(Knob k);
Knob parse_knob(std::string_view text);
BudgetKind parse_budget_kind(std::string_view text);

struct SearchRequest {
  BudgetKind budget_kind = BudgetKind::Investment;
  double budget = 0.0;
  Knob knob = Knob::GeoPortion;
  double tol = 0.01;
  std::optional<int> max_window;  // defaults to horizon - 1
  PointParams base;               // other knobs held fixed
};

struct SearchEvaluation {
  double knob = 0.0;
  std::string status;
};

struct SearchResult {
  std::string status;  // "OK" or "INFEASIBLE_AT_MAX"
  double value = 0.0;
  /// Status of the solve at `value` and just below it (none when value is the
  /// knob's lower end).
  std::string certificate_at;
  std::optional<double> below;
  std::string certificate_below;
  std::vector<SearchEvaluation> evaluations;
};

SearchResult min_flexibility_search(const Scenario& scenario, const SearchRequest& request);
json search_json(const SearchResult& result, const SearchRequest& request);

struct DeltaReport {
  SweepRecord firm;
  SweepRecord flex;
  // Percent change from firm to flexible; empty when the firm value is 0
  // and the flexible one is not.
  std::optional<double> total_pct, investment_pct, operating_pct, added_mw_pct;
};

DeltaReport compare_firm_vs_flex(const Scenario& scenario, const PointParams& params = {});
json delta_json(const DeltaReport& report);

/// CSV with a fixed column set plus one added-capacity column per generator.
std::string sweep_csv_header(const Network& network);
std::string sweep_csv_row(const SweepRecord& record, std::size_t generators);
std::string sweep_csv(const std::vector<SweepRecord>& records, const Network& network);

std::string sha256_file(const std::string& path);
/// Run manifest: resolved configuration, fixture hashes and tool version.
json make_manifest(const std::string& command, const json& resolved_config,
                   const std::map<std::string, std::string>& fixtures);

}  // namespace dcflex
