#include <algorithm>
#include <cmath>

#include "dcflex/expansion.hpp"

namespace dcflex {

namespace {

using lp::Relation;
using lp::VarId;

std::string tag(const char* block, int t, const std::string& id) {
  return std::string(block) + "[" + std::to_string(t) + "," + id + "]";
}

}  // namespace

std::string_view to_string(ShedMode mode) {
  switch (mode) {
    case ShedMode::Allowed: return "allowed";
    case ShedMode::TwoPhase: return "two_phase";
    case ShedMode::Forbidden: return "forbidden";
  }
  return "unknown";
}

ShedMode parse_shed_mode(std::string_view text) {
  if (text == "allowed") return ShedMode::Allowed;
  if (text == "two_phase" || text == "twophase") return ShedMode::TwoPhase;
  if (text == "forbidden") return ShedMode::Forbidden;
  throw Error("unknown shed mode '" + std::string(text) + "' (allowed, two_phase, forbidden)");
}

AssembledModel assemble(const Network& network, const LoadSet& loads, const ExpansionOptions& options) {
  if (loads.horizon <= 0) throw Error("expansion horizon must be at least one hour");
  auto problems = validate_loadset(loads, network);
  if (!problems.empty()) throw ValidationError(std::move(problems));

  double max_marginal = 0.0;
  for (const auto& g : network.generators) max_marginal = std::max(max_marginal, g.marginal_cost);
  if (!(options.shed_penalty > 10.0 * max_marginal))
    throw Error("shed penalty must exceed ten times the largest marginal cost");

  const int T = loads.horizon;
  const int N = static_cast<int>(network.bus_count());
  const int E = static_cast<int>(network.line_count());
  const int G = static_cast<int>(network.generator_count());
  const int D = static_cast<int>(loads.deferrable.size());
  const auto& geo = loads.geo;
  const bool has_shift = (geo.lower.array() != 0.0).any() || (geo.upper.array() != 0.0).any();

  std::vector<int> class_bus(static_cast<std::size_t>(D));
  for (int d = 0; d < D; ++d)
    class_bus[static_cast<std::size_t>(d)] = static_cast<int>(*network.find_bus(loads.deferrable[static_cast<std::size_t>(d)].bus));

  AssembledModel out;
  auto& m = out.model;
  auto& ix = out.index;
  ix.hours = T;
  ix.has_shift = has_shift;

  auto block = [&](int width) {
    return IndexMap::Block{static_cast<int>(m.variable_count()), width};
  };

  ix.investment = block(G);
  for (const auto& g : network.generators)
    m.add_variable("x[" + g.id + "]", 0.0, g.max_addition_mw, g.investment_cost);

  ix.dispatch = block(G);
  for (int t = 0; t < T; ++t)
    for (const auto& g : network.generators) m.add_variable(tag("p", t, g.id), 0.0, lp::kInfinity, g.marginal_cost);

  const int ref = static_cast<int>(network.reference_index());
  ix.angle = block(N);
  for (int t = 0; t < T; ++t)
    for (int n = 0; n < N; ++n) {
      const double bound = n == ref ? 0.0 : lp::kInfinity;
      m.add_variable(tag("theta", t, network.buses[static_cast<std::size_t>(n)].id), -bound, bound);
    }

  ix.flow = block(E);
  for (int t = 0; t < T; ++t)
    for (const auto& line : network.lines)
      m.add_variable(tag("f", t, line.id), -line.capacity_mw, line.capacity_mw);

  ix.served = block(D);
  for (int t = 0; t < T; ++t)
    for (const auto& cls : loads.deferrable) m.add_variable(tag("s", t, cls.id), 0.0, lp::kInfinity);

  ix.backlog = block(D);
  for (int t = 0; t < T; ++t)
    for (int d = 0; d < D; ++d) {
      const auto& cls = loads.deferrable[static_cast<std::size_t>(d)];
      const double ub = t == T - 1 ? 0.0 : lp::kInfinity;
      m.add_variable(tag("b", t, cls.id), 0.0, ub, loads.delay_penalty[static_cast<std::size_t>(d)]);
    }

  const int shift_width = has_shift ? N : 0;
  ix.shift_up = block(shift_width);
  if (has_shift)
    for (int t = 0; t < T; ++t)
      for (int n = 0; n < N; ++n)
        m.add_variable(tag("dplus", t, network.buses[static_cast<std::size_t>(n)].id), 0.0,
                       std::max(0.0, geo.upper(t, n)), loads.shift_penalty);
  ix.shift_down = block(shift_width);
  if (has_shift)
    for (int t = 0; t < T; ++t)
      for (int n = 0; n < N; ++n)
        m.add_variable(tag("dminus", t, network.buses[static_cast<std::size_t>(n)].id), 0.0,
                       std::max(0.0, -geo.lower(t, n)), loads.shift_penalty);

  ix.shed = block(N);
  const double shed_ub = options.shed_mode == ShedMode::Forbidden ? 0.0 : lp::kInfinity;
  for (int t = 0; t < T; ++t)
    for (int n = 0; n < N; ++n)
      m.add_variable(tag("shed", t, network.buses[static_cast<std::size_t>(n)].id), 0.0, shed_ub,
                     options.shed_penalty);

  auto var = [](const IndexMap::Block& b, int t, int k) { return VarId{b.at(t, k)}; };

  for (int t = 0; t < T; ++t) {
    // Nodal balance: A_gen p - A_def s - delta + shed - K f = L_base + L_geo0.
    ix.balance_rows.push_back(static_cast<int>(m.constraint_count()));
    std::vector<std::vector<std::pair<VarId, double>>> rows(static_cast<std::size_t>(N));
    for (int g = 0; g < G; ++g)
      rows[network.generators[static_cast<std::size_t>(g)].bus_index].emplace_back(var(ix.dispatch, t, g), 1.0);
    for (int d = 0; d < D; ++d) rows[static_cast<std::size_t>(class_bus[static_cast<std::size_t>(d)])].emplace_back(var(ix.served, t, d), -1.0);
    for (int l = 0; l < E; ++l) {
      const auto& line = network.lines[static_cast<std::size_t>(l)];
      rows[line.from_index].emplace_back(var(ix.flow, t, l), -1.0);
      rows[line.to_index].emplace_back(var(ix.flow, t, l), 1.0);
    }
    for (int n = 0; n < N; ++n) {
      auto& row = rows[static_cast<std::size_t>(n)];
      if (has_shift) {
        row.emplace_back(var(ix.shift_up, t, n), -1.0);
        row.emplace_back(var(ix.shift_down, t, n), 1.0);
      }
      row.emplace_back(var(ix.shed, t, n), 1.0);
      m.add_constraint(tag("balance", t, network.buses[static_cast<std::size_t>(n)].id), std::move(row),
                       Relation::Equal, loads.base(t, n) + geo.baseline(t, n));
    }

    // DC flow, angles scaled by base_mva: f - b (psi_from - psi_to) = 0.
    for (int l = 0; l < E; ++l) {
      const auto& line = network.lines[static_cast<std::size_t>(l)];
      m.add_constraint(tag("flow", t, line.id),
                       {{var(ix.flow, t, l), 1.0},
                        {var(ix.angle, t, static_cast<int>(line.from_index)), -line.susceptance},
                        {var(ix.angle, t, static_cast<int>(line.to_index)), line.susceptance}},
                       Relation::Equal, 0.0);
    }

    for (int g = 0; g < G; ++g) {
      const auto& gen = network.generators[static_cast<std::size_t>(g)];
      m.add_constraint(tag("capacity", t, gen.id), {{var(ix.dispatch, t, g), 1.0}, {var(ix.investment, 0, g), -1.0}},
                       Relation::LessEqual, gen.existing_mw);
    }

    for (int d = 0; d < D; ++d) {
      const auto& cls = loads.deferrable[static_cast<std::size_t>(d)];
      const double u = cls.arrivals_mw[static_cast<std::size_t>(t)];
      std::vector<std::pair<VarId, double>> recursion{{var(ix.backlog, t, d), 1.0}, {var(ix.served, t, d), 1.0}};
      std::vector<std::pair<VarId, double>> service{{var(ix.served, t, d), 1.0}};
      if (t > 0) {
        recursion.emplace_back(var(ix.backlog, t - 1, d), -1.0);
        service.emplace_back(var(ix.backlog, t - 1, d), -1.0);
      }
      m.add_constraint(tag("backlog", t, cls.id), std::move(recursion), Relation::Equal, u);
      m.add_constraint(tag("serve", t, cls.id), std::move(service), Relation::LessEqual, u);
      // Cumulative completion condition, written through the backlog:
      // b_t <= arrivals of the last W hours.
      if (t >= cls.window_h) {
        double recent = 0.0;
        for (int tau = t - cls.window_h + 1; tau <= t; ++tau) recent += cls.arrivals_mw[static_cast<std::size_t>(tau)];
        m.add_constraint(tag("deadline", t, cls.id), {{var(ix.backlog, t, d), 1.0}}, Relation::LessEqual, recent);
      }
    }

    if (has_shift) {
      std::vector<std::pair<VarId, double>> zero_sum, l1;
      for (int n = 0; n < N; ++n) {
        zero_sum.emplace_back(var(ix.shift_up, t, n), 1.0);
        zero_sum.emplace_back(var(ix.shift_down, t, n), -1.0);
        l1.emplace_back(var(ix.shift_up, t, n), 1.0);
        l1.emplace_back(var(ix.shift_down, t, n), 1.0);
      }
      m.add_constraint("shift_balance[" + std::to_string(t) + "]", std::move(zero_sum), Relation::Equal, 0.0);
      if (geo.budget)
        m.add_constraint("shift_budget[" + std::to_string(t) + "]", std::move(l1), Relation::LessEqual,
                         (*geo.budget)[static_cast<std::size_t>(t)]);
    }
  }

  if (options.investment_budget) {
    std::vector<std::pair<VarId, double>> row;
    for (int g = 0; g < G; ++g)
      row.emplace_back(var(ix.investment, 0, g), network.generators[static_cast<std::size_t>(g)].investment_cost);
    m.add_constraint("investment_budget", std::move(row), Relation::LessEqual, *options.investment_budget);
  }
  if (options.capacity_budget_mw) {
    std::vector<std::pair<VarId, double>> row;
    for (int g = 0; g < G; ++g) row.emplace_back(var(ix.investment, 0, g), 1.0);
    m.add_constraint("capacity_budget", std::move(row), Relation::LessEqual, *options.capacity_budget_mw);
  }
  return out;
}

}  // namespace dcflex
