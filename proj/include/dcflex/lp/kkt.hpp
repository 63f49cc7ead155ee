#pragma once

#include <string>

#include "dcflex/lp/model.hpp"
#include "dcflex/lp/solver.hpp"

namespace dcflex::lp {

struct Violation {
  double amount = 0.0;
  std::string where;  // variable or constraint name of the worst offender
};

/// Worst violation per optimality condition, each on a normalized scale:
///  - primal: bound/row violation / (1 + |bound|)
///  - dual: wrong-signed dual or reduced cost / (1 + max|c|)
///  - complementarity: |multiplier * slack| / (1 + |objective|)
///  - stationarity: |c - A^T y - d| / (1 + max|c|)
/// plus the relative primal-dual objective gap.
struct KktReport {
  Violation primal;
  Violation dual;
  Violation complementarity;
  Violation stationarity;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double duality_gap = 0.0;  // |primal - dual| / (1 + |primal|)
  double tolerance = 0.0;

  bool primal_ok() const { return primal.amount <= tolerance; }
  bool dual_ok() const { return dual.amount <= tolerance; }
  bool complementarity_ok() const { return complementarity.amount <= tolerance; }
  bool stationarity_ok() const { return stationarity.amount <= tolerance; }
  bool gap_ok() const { return duality_gap <= tolerance; }
  bool passed() const {
    return primal_ok() && dual_ok() && complementarity_ok() && stationarity_ok() && gap_ok();
  }
  std::string summary() const;
};

KktReport check_kkt(const LinearModel& model, const Solution& solution, double tol = 1e-6);

}  // namespace dcflex::lp
