#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dcflex::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };

struct VarId {
  int index = -1;
  friend bool operator==(VarId, VarId) = default;
};

struct RowId {
  int index = -1;
  friend bool operator==(RowId, RowId) = default;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
};

/// Constraint row; terms are sorted by variable index with duplicates merged.
struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::Equal;
  double rhs = 0.0;
};

/// Minimization LP with named variables and constraints.
class LinearModel {
 public:
  /// Throws Error on duplicate name or lower > upper.
  VarId add_variable(std::string name, double lower, double upper, double cost = 0.0);

  /// Throws Error on duplicate name, unknown variable or non-finite rhs.
  /// Repeated variables in `row` are summed; zero coefficients dropped.
  RowId add_constraint(std::string name, std::vector<std::pair<VarId, double>> row,
                       Relation relation, double rhs);

  /// Replaces the whole objective.
  void set_objective(const std::vector<std::pair<VarId, double>>& costs, double constant = 0.0);
  void set_cost(VarId var, double cost);
  void set_bounds(VarId var, double lower, double upper);
  void set_rhs(RowId row, double rhs);

  std::optional<VarId> find_variable(std::string_view name) const;
  std::optional<RowId> find_constraint(std::string_view name) const;

  std::size_t variable_count() const { return variables_.size(); }
  std::size_t constraint_count() const { return constraints_.size(); }
  std::size_t nonzero_count() const;

  const Variable& variable(VarId id) const { return variables_.at(check(id)); }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }
  const Constraint& constraint(RowId id) const { return constraints_.at(check(id)); }
  const Constraint& constraint(std::size_t i) const { return constraints_.at(i); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<double>& costs() const { return costs_; }
  double objective_constant() const { return objective_constant_; }

  double objective_value(const std::vector<double>& x) const;
  double row_activity(std::size_t row, const std::vector<double>& x) const;

 private:
  std::size_t check(VarId id) const;
  std::size_t check(RowId id) const;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<double> costs_;
  double objective_constant_ = 0.0;
  std::unordered_map<std::string, int> variable_names_;
  std::unordered_map<std::string, int> constraint_names_;
};

/// Human-readable listing of the model, one constraint per line.
std::string format_lp_review(const LinearModel& model);

}  // namespace dcflex::lp
