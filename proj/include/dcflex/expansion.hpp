#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcflex/flexload.hpp"
#include "dcflex/lp/model.hpp"
#include "dcflex/lp/solver.hpp"
#include "dcflex/netcase.hpp"

namespace dcflex {

enum class ShedMode { Allowed, TwoPhase, Forbidden };

std::string_view to_string(ShedMode mode);
ShedMode parse_shed_mode(std::string_view text);

struct ExpansionOptions {
  double shed_penalty = 1.0e4;  // $/MWh of unserved demand
  ShedMode shed_mode = ShedMode::TwoPhase;
  lp::SolverOptions solver;
  /// Optional first-stage caps: sum C_inv x <= budget, sum x <= capacity.
  std::optional<double> investment_budget;
  std::optional<double> capacity_budget_mw;
};

/// Position of every variable block inside the assembled LP. Blocks are
/// hour-major: element (t, k) of a block lives at offset + t * width + k.
struct IndexMap {
  struct Block {
    int offset = 0;
    int width = 0;
    int at(int t, int k) const { return offset + t * width + k; }
  };
  int hours = 0;
  Block investment;  // x: one row, |G| wide
  Block dispatch;    // p
  Block angle;       // theta scaled by base_mva
  Block flow;        // f
  Block served;      // s
  Block backlog;     // b
  Block shift_up;    // delta+
  Block shift_down;  // delta-
  Block shed;
  /// First balance row of each hour; bus n of hour t is balance_rows[t] + n.
  std::vector<int> balance_rows;
  bool has_shift = false;
};

struct AssembledModel {
  lp::LinearModel model;
  IndexMap index;
};

/// Builds the deterministic-equivalent LP. Throws on dimension mismatch or
/// an empty horizon.
AssembledModel assemble(const Network& network, const LoadSet& loads, const ExpansionOptions& options);

struct ExpansionResult {
  lp::SolveStatus status = lp::SolveStatus::IterationLimit;
  bool requires_shed = false;
  std::vector<double> added_capacity;  // MW per generator
  double total_cost = 0.0;
  double investment_cost = 0.0;
  double operating_cost = 0.0;
  double delay_cost = 0.0;
  double shift_cost = 0.0;
  double shed_cost = 0.0;
  Eigen::MatrixXd dispatch;  // T x |G| MW
  Eigen::MatrixXd angles;    // T x |N| rad
  Eigen::MatrixXd flows;     // T x |E| MW
  Eigen::MatrixXd served;    // T x |classes| MW
  Eigen::MatrixXd backlog;   // T x |classes| MW
  Eigen::MatrixXd shifts;    // T x |N| MW
  Eigen::MatrixXd shed;      // T x |N| MW
  long iterations = 0;

  bool optimal() const { return status == lp::SolveStatus::Optimal; }
  double added_capacity_total() const;
};

/// Final LP, its solution and the extracted result.
struct ExpansionRun {
  AssembledModel assembled;
  lp::Solution solution;
  ExpansionResult result;
};

ExpansionRun run_expansion(const Network& network, const LoadSet& loads, const ExpansionOptions& options,
                           const std::vector<double>* fixed_investment = nullptr);

ExpansionResult solve_expansion(const Network& network, const LoadSet& loads, const ExpansionOptions& options);

/// Second-stage cost Q(x) with the investment frozen at `x_fixed`.
ExpansionResult evaluate_second_stage(const Network& network, const LoadSet& loads,
                                      const std::vector<double>& x_fixed, const ExpansionOptions& options);

struct CongestionReport {
  int binding_line_hours = 0;
  std::vector<std::string> binding_lines;
  std::vector<std::string> peak_generators;
  double max_backlog_mw = 0.0;
  double total_shift_mw = 0.0;
};

inline constexpr double kBindingRelTol = 1e-4;

CongestionReport congestion_report(const ExpansionResult& result, const Network& network);

/// Largest |A_gen p - L_base - A_def s - L_geo - K f + shed| over hours and buses.
double nodal_balance_residual(const ExpansionResult& result, const Network& network, const LoadSet& loads);

/// Writes result.json and the trajectory CSVs into `dir` (created if needed).
void write_result_bundle(const std::string& dir, const ExpansionResult& result, const Network& network,
                         const LoadSet& loads);

std::string result_json(const ExpansionResult& result, const Network& network, const LoadSet& loads);

}  // namespace dcflex
