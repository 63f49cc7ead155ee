#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dcflex/lp/model.hpp"

namespace fixtures {

/// Feasible, bounded LP: a random interior point satisfies every row and
/// unboxed variables carry non-negative cost.
inline dcflex::lp::LinearModel random_lp(std::mt19937_64& rng, int vars, int rows, double density = 0.5) {
  using namespace dcflex::lp;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> coef(-5, 5);
  LinearModel m;
  std::vector<double> point;
  for (int j = 0; j < vars; ++j) {
    const double kind = unit(rng);
    double lo = -std::floor(unit(rng) * 6), hi = std::ceil(unit(rng) * 6);
    double cost = coef(rng);
    if (kind > 0.85) {
      hi = kInfinity;
      cost = std::abs(cost);
    } else if (kind > 0.8) {
      lo = hi;
    }
    const double p = std::isfinite(hi) ? lo + (hi - lo) * unit(rng) : lo + 3 * unit(rng);
    point.push_back(p);
    m.add_variable("v" + std::to_string(j), lo, hi, cost);
  }
  for (int i = 0; i < rows; ++i) {
    std::vector<std::pair<VarId, double>> row;
    double act = 0.0;
    for (int j = 0; j < vars; ++j)
      if (unit(rng) < density) {
        const double a = coef(rng);
        row.emplace_back(VarId{j}, a);
        act += a * point[static_cast<std::size_t>(j)];
      }
    const double r = unit(rng);
    const Relation rel = r < 0.4 ? Relation::LessEqual : r < 0.8 ? Relation::GreaterEqual : Relation::Equal;
    double rhs = act;
    if (rel == Relation::LessEqual) rhs = std::ceil(act + 2 * unit(rng));
    if (rel == Relation::GreaterEqual) rhs = std::floor(act - 2 * unit(rng));
    m.add_constraint("r" + std::to_string(i), std::move(row), rel, rhs);
  }
  return m;
}

}  // namespace fixtures
