#pragma once

#include <string_view>
#include <vector>

#include "dcflex/lp/model.hpp"

namespace dcflex::lp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(SolveStatus status);

struct SolverOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  /// 0 selects a limit proportional to the model size.
  long max_iterations = 0;
  /// Eta updates between basis refactorizations.
  int refactor_interval = 64;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_pivot_limit = 50;
};

/// Duals follow the convention reduced_cost = c - A^T duals, so a `>=` row
/// has a non-negative dual and a `<=` row a non-positive one at optimality.
struct Solution {
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<double> primal;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  long iterations = 0;
  double solve_seconds = 0.0;
};

/// Bounded-variable revised simplex (two phases, Dantzig pricing with lowest
/// index tie-break, Bland fallback under stalling). Deterministic; the model
/// is not modified and may be solved from several threads at once.
Solution solve(const LinearModel& model, const SolverOptions& options = {});

}  // namespace dcflex::lp
