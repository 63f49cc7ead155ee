#include "dcflex/lp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dcflex/error.hpp"

namespace dcflex::lp {

namespace {

std::string fmt_number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

}  // namespace

std::size_t LinearModel::check(VarId id) const {
  if (id.index < 0 || static_cast<std::size_t>(id.index) >= variables_.size())
    throw Error("unknown variable handle " + std::to_string(id.index));
  return static_cast<std::size_t>(id.index);
}

std::size_t LinearModel::check(RowId id) const {
  if (id.index < 0 || static_cast<std::size_t>(id.index) >= constraints_.size())
    throw Error("unknown constraint handle " + std::to_string(id.index));
  return static_cast<std::size_t>(id.index);
}

VarId LinearModel::add_variable(std::string name, double lower, double upper, double cost) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw Error("variable '" + name + "' has inverted bounds [" + fmt_number(lower) + ", " +
                fmt_number(upper) + "]");
  if (lower == kInfinity || upper == -kInfinity)
    throw Error("variable '" + name + "' has an empty domain");
  if (!std::isfinite(cost)) throw Error("variable '" + name + "' has a non-finite cost");
  const int index = static_cast<int>(variables_.size());
  if (!variable_names_.emplace(name, index).second)
    throw Error("duplicate variable name '" + name + "'");
  variables_.push_back({std::move(name), lower, upper});
  costs_.push_back(cost);
  return VarId{index};
}

RowId LinearModel::add_constraint(std::string name, std::vector<std::pair<VarId, double>> row,
                                  Relation relation, double rhs) {
  if (!std::isfinite(rhs)) throw Error("constraint '" + name + "' has a non-finite rhs");
  std::vector<Term> terms;
  terms.reserve(row.size());
  for (const auto& [var, coef] : row) {
    if (var.index < 0 || static_cast<std::size_t>(var.index) >= variables_.size())
      throw Error("constraint '" + name + "' references unknown variable handle " +
                  std::to_string(var.index));
    if (!std::isfinite(coef))
      throw Error("constraint '" + name + "' has a non-finite coefficient");
    terms.push_back({var.index, coef});
  }
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });

  const int index = static_cast<int>(constraints_.size());
  if (!constraint_names_.emplace(name, index).second)
    throw Error("duplicate constraint name '" + name + "'");
  constraints_.push_back({std::move(name), std::move(merged), relation, rhs});
  return RowId{index};
}

void LinearModel::set_objective(const std::vector<std::pair<VarId, double>>& costs, double constant) {
  if (!std::isfinite(constant)) throw Error("objective constant must be finite");
  std::vector<double> next(variables_.size(), 0.0);
  for (const auto& [var, c] : costs) {
    if (!std::isfinite(c)) throw Error("objective coefficient must be finite");
    next[check(var)] += c;
  }
  costs_ = std::move(next);
  objective_constant_ = constant;
}

void LinearModel::set_cost(VarId var, double cost) {
  if (!std::isfinite(cost)) throw Error("objective coefficient must be finite");
  costs_[check(var)] = cost;
}

void LinearModel::set_bounds(VarId var, double lower, double upper) {
  auto& v = variables_[check(var)];
  if (std::isnan(lower) || std::isnan(upper) || lower > upper)
    throw Error("variable '" + v.name + "' has inverted bounds");
  v.lower = lower;
  v.upper = upper;
}

void LinearModel::set_rhs(RowId row, double rhs) {
  if (!std::isfinite(rhs)) throw Error("rhs must be finite");
  constraints_[check(row)].rhs = rhs;
}

std::optional<VarId> LinearModel::find_variable(std::string_view name) const {
  auto it = variable_names_.find(std::string(name));
  if (it == variable_names_.end()) return std::nullopt;
  return VarId{it->second};
}

std::optional<RowId> LinearModel::find_constraint(std::string_view name) const {
  auto it = constraint_names_.find(std::string(name));
  if (it == constraint_names_.end()) return std::nullopt;
  return RowId{it->second};
}

std::size_t LinearModel::nonzero_count() const {
  std::size_t nnz = 0;
  for (const auto& c : constraints_) nnz += c.terms.size();
  return nnz;
}

double LinearModel::objective_value(const std::vector<double>& x) const {
  double total = objective_constant_;
  for (std::size_t j = 0; j < costs_.size(); ++j) total += costs_[j] * x.at(j);
  return total;
}

double LinearModel::row_activity(std::size_t row, const std::vector<double>& x) const {
  double total = 0.0;
  for (const auto& t : constraints_.at(row).terms) total += t.coef * x.at(static_cast<std::size_t>(t.var));
  return total;
}

std::string format_lp_review(const LinearModel& model) {
  std::string out = "minimize\n ";
  bool any = false;
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    const double c = model.costs()[j];
    if (c == 0.0) continue;
    out += (c < 0 ? " - " : (any ? " + " : " ")) + fmt_number(std::fabs(c)) + " " +
           model.variable(j).name;
    any = true;
  }
  if (model.objective_constant() != 0.0) out += " + " + fmt_number(model.objective_constant());
  if (!any && model.objective_constant() == 0.0) out += " 0";
  out += "\nsubject to\n";
  for (const auto& c : model.constraints()) {
    out += " " + c.name + ":";
    if (c.terms.empty()) out += " 0";
    bool first = true;
    for (const auto& t : c.terms) {
      out += (t.coef < 0 ? " - " : (first ? " " : " + "));
      if (std::fabs(t.coef) != 1.0) out += fmt_number(std::fabs(t.coef)) + " ";
      out += model.variable(static_cast<std::size_t>(t.var)).name;
      first = false;
    }
    out += std::string(" ") + relation_symbol(c.relation) + " " + fmt_number(c.rhs) + "\n";
  }
  out += "bounds\n";
  for (const auto& v : model.variables())
    out += " " + fmt_number(v.lower) + " <= " + v.name + " <= " + fmt_number(v.upper) + "\n";
  out += "end\n";
  return out;
}

}  // namespace dcflex::lp
