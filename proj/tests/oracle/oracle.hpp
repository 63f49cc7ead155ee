#pragma once

// Reference LP machinery for tests. Shares no code with the library solver:
// dense long-double tableaus on standard-form problems.

#include <optional>
#include <string>
#include <vector>

#include "dcflex/expansion.hpp"
#include "dcflex/lp/model.hpp"

namespace oracle {

using Real = long double;

/// min c'x + constant  s.t.  A x = b, x >= 0.
struct StandardLp {
  std::vector<std::vector<Real>> a;
  std::vector<Real> b;
  std::vector<Real> c;
  Real constant = 0;

  int rows() const { return static_cast<int>(a.size()); }
  int cols() const { return static_cast<int>(c.size()); }
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Outcome {
  Status status = Status::Infeasible;
  Real objective = 0;
};

/// Incremental builder over bounded variables and general rows.
class Builder {
 public:
  int var(Real lower, Real upper, Real cost = 0);
  void row(const std::vector<std::pair<int, Real>>& terms, dcflex::lp::Relation rel, Real rhs);
  void add_constant(Real v) { constant_ += v; }
  void add_cost(int v, Real cost) { vars_[static_cast<std::size_t>(v)].cost += cost; }
  StandardLp build() const;

 private:
  struct Var {
    Real lower, upper, cost;
  };
  struct Row {
    std::vector<std::pair<int, Real>> terms;
    dcflex::lp::Relation rel;
    Real rhs;
  };
  std::vector<Var> vars_;
  std::vector<Row> rows_;
  Real constant_ = 0;
};

/// Rebuilds a library model in standard form (used for generic LP checks).
StandardLp from_model(const dcflex::lp::LinearModel& model);

/// Two-phase tableau simplex with Bland's rule throughout.
Outcome tableau_solve(const StandardLp& lp);

/// Minimum over every basic feasible solution. Exponential; tiny inputs only.
/// Assumes a bounded optimum when any vertex is feasible.
Outcome enumerate_vertices(const StandardLp& lp);

/// The expansion problem written directly from its definition, with
/// cumulative-service deadlines, unscaled angles and an epigraph for |delta|.
StandardLp expansion_lp(const dcflex::Network& network, const dcflex::LoadSet& loads,
                        const dcflex::ExpansionOptions& options);

inline bool close(double a, double b, double rel) {
  const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= rel * scale;
}

}  // namespace oracle
