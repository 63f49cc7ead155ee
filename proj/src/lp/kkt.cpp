#include "dcflex/lp/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dcflex/error.hpp"

namespace dcflex::lp {

namespace {

void worst(Violation& v, double amount, const std::string& where) {
  if (amount > v.amount) {
    v.amount = amount;
    v.where = where;
  }
}

}  // namespace

std::string KktReport::summary() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "primal %.3e%s dual %.3e%s complementarity %.3e%s stationarity %.3e%s gap %.3e",
                primal.amount, primal.where.empty() ? "" : (" (" + primal.where + ")").c_str(),
                dual.amount, dual.where.empty() ? "" : (" (" + dual.where + ")").c_str(),
                complementarity.amount,
                complementarity.where.empty() ? "" : (" (" + complementarity.where + ")").c_str(),
                stationarity.amount,
                stationarity.where.empty() ? "" : (" (" + stationarity.where + ")").c_str(),
                duality_gap);
  return buf;
}

KktReport check_kkt(const LinearModel& model, const Solution& solution, double tol) {
  const std::size_t n = model.variable_count();
  const std::size_t m = model.constraint_count();
  if (solution.primal.size() != n || solution.reduced_costs.size() != n ||
      solution.duals.size() != m)
    throw Error("check_kkt: solution does not match the model dimensions");

  KktReport report;
  report.tolerance = tol;
  const auto& x = solution.primal;
  const auto& y = solution.duals;
  const auto& d = solution.reduced_costs;

  double cmax = 0.0;
  for (double c : model.costs()) cmax = std::max(cmax, std::fabs(c));
  const double cscale = 1.0 + cmax;

  report.primal_objective = model.objective_value(x);
  const double oscale = 1.0 + std::fabs(report.primal_objective);
  double dual_obj = model.objective_constant();

  // Stationarity: c - A^T y - d = 0.
  std::vector<double> residual(model.costs());
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& t : model.constraint(i).terms)
      residual[static_cast<std::size_t>(t.var)] -= t.coef * y[i];

  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = model.variable(j);
    worst(report.stationarity, std::fabs(residual[j] - d[j]) / cscale, v.name);

    if (x[j] < v.lower) worst(report.primal, (v.lower - x[j]) / (1.0 + std::fabs(v.lower)), v.name);
    if (x[j] > v.upper) worst(report.primal, (x[j] - v.upper) / (1.0 + std::fabs(v.upper)), v.name);

    if (d[j] > 0.0) {
      if (std::isfinite(v.lower)) {
        dual_obj += d[j] * v.lower;
        worst(report.complementarity, d[j] * std::fabs(x[j] - v.lower) / oscale, v.name);
      } else {
        worst(report.dual, d[j] / cscale, v.name);
      }
    } else if (d[j] < 0.0) {
      if (std::isfinite(v.upper)) {
        dual_obj += d[j] * v.upper;
        worst(report.complementarity, -d[j] * std::fabs(v.upper - x[j]) / oscale, v.name);
      } else {
        worst(report.dual, -d[j] / cscale, v.name);
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = model.constraint(i);
    const double activity = model.row_activity(i, x);
    const double slack = activity - c.rhs;
    const double scale = 1.0 + std::fabs(c.rhs);
    switch (c.relation) {
      case Relation::LessEqual:
        if (slack > 0) worst(report.primal, slack / scale, c.name);
        if (y[i] > 0) worst(report.dual, y[i] / cscale, c.name);
        break;
      case Relation::GreaterEqual:
        if (slack < 0) worst(report.primal, -slack / scale, c.name);
        if (y[i] < 0) worst(report.dual, -y[i] / cscale, c.name);
        break;
      case Relation::Equal:
        worst(report.primal, std::fabs(slack) / scale, c.name);
        break;
    }
    worst(report.complementarity, std::fabs(y[i] * slack) / oscale, c.name);
    dual_obj += y[i] * c.rhs;
  }

  report.dual_objective = dual_obj;
  report.duality_gap = std::fabs(report.primal_objective - dual_obj) / oscale;
  return report;
}

}  // namespace dcflex::lp
