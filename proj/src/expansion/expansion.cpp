#include "dcflex/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dcflex {

namespace {

constexpr double kShedTolerance = 1e-6;

Eigen::MatrixXd take(const std::vector<double>& x, const IndexMap::Block& block, int hours, double scale = 1.0) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(hours, block.width);
  for (int t = 0; t < hours; ++t)
    for (int k = 0; k < block.width; ++k) out(t, k) = x[static_cast<std::size_t>(block.at(t, k))] * scale;
  return out;
}

ExpansionResult extract(const AssembledModel& am, const lp::Solution& sol, const Network& network,
                        const LoadSet& loads) {
  ExpansionResult r;
  r.status = sol.status;
  r.iterations = sol.iterations;
  const int T = am.index.hours;
  const auto N = static_cast<Eigen::Index>(network.bus_count());
  if (sol.status != lp::SolveStatus::Optimal) return r;

  const auto& x = sol.primal;
  const auto& ix = am.index;
  for (int g = 0; g < ix.investment.width; ++g) r.added_capacity.push_back(x[static_cast<std::size_t>(ix.investment.at(0, g))]);
  r.dispatch = take(x, ix.dispatch, T);
  r.angles = take(x, ix.angle, T, 1.0 / network.base_mva);
  r.flows = take(x, ix.flow, T);
  r.served = take(x, ix.served, T);
  r.backlog = take(x, ix.backlog, T);
  r.shed = take(x, ix.shed, T);
  r.shifts = ix.has_shift ? Eigen::MatrixXd(take(x, ix.shift_up, T) - take(x, ix.shift_down, T))
                          : Eigen::MatrixXd::Zero(T, N);

  for (std::size_t g = 0; g < network.generators.size(); ++g) {
    const auto& gen = network.generators[g];
    r.investment_cost += gen.investment_cost * r.added_capacity[g];
    r.operating_cost += gen.marginal_cost * r.dispatch.col(static_cast<Eigen::Index>(g)).sum();
  }
  for (std::size_t d = 0; d < loads.deferrable.size(); ++d)
    r.delay_cost += loads.delay_penalty[d] * r.backlog.col(static_cast<Eigen::Index>(d)).sum();
  if (ix.has_shift)
    r.shift_cost = loads.shift_penalty * (take(x, ix.shift_up, T).sum() + take(x, ix.shift_down, T).sum());
  const auto& costs = am.model.costs();
  double shed_cost = 0.0;
  for (int t = 0; t < T; ++t)
    for (int n = 0; n < ix.shed.width; ++n) {
      const auto j = static_cast<std::size_t>(ix.shed.at(t, n));
      shed_cost += costs[j] * x[j];
    }
  r.shed_cost = shed_cost;
  r.total_cost = sol.objective;
  r.requires_shed = (r.shed.array() > kShedTolerance).any();
  return r;
}

ExpansionRun solve_assembled(AssembledModel am, const Network& network, const LoadSet& loads,
                             const ExpansionOptions& options) {
  ExpansionRun run{std::move(am), {}, {}};
  run.solution = lp::solve(run.assembled.model, options.solver);
  run.result = extract(run.assembled, run.solution, network, loads);
  return run;
}

}  // namespace

double ExpansionResult::added_capacity_total() const {
  return std::accumulate(added_capacity.begin(), added_capacity.end(), 0.0);
}

ExpansionRun run_expansion(const Network& network, const LoadSet& loads, const ExpansionOptions& options,
                           const std::vector<double>* fixed_investment) {
  auto am = assemble(network, loads, options);
  if (fixed_investment) {
    if (fixed_investment->size() != network.generator_count())
      throw Error("fixed investment needs one value per generator");
    for (std::size_t g = 0; g < network.generators.size(); ++g) {
      const double v = (*fixed_investment)[g];
      const double cap = network.generators[g].max_addition_mw;
      if (!std::isfinite(v) || v < -1e-9 || v > cap + 1e-9)
        throw Error("fixed investment for '" + network.generators[g].id + "' is outside [0, max_addition]");
      const double clamped = std::clamp(v, 0.0, cap);
      am.model.set_bounds(lp::VarId{am.index.investment.at(0, static_cast<int>(g))}, clamped, clamped);
    }
  }

  if (options.shed_mode != ShedMode::TwoPhase) return solve_assembled(std::move(am), network, loads, options);

  // Shed is first allowed everywhere, then pinned to zero wherever the
  // relaxed optimum did not need it.
  auto first = solve_assembled(am, network, loads, options);
  if (!first.result.optimal()) return first;
  const auto& ix = am.index;
  for (int t = 0; t < ix.hours; ++t)
    for (int n = 0; n < ix.shed.width; ++n)
      if (first.result.shed(t, n) <= kShedTolerance) am.model.set_bounds(lp::VarId{ix.shed.at(t, n)}, 0.0, 0.0);
  auto second = solve_assembled(std::move(am), network, loads, options);
  if (!second.result.optimal()) return first;
  second.result.iterations += first.result.iterations;
  return second;
}

ExpansionResult solve_expansion(const Network& network, const LoadSet& loads, const ExpansionOptions& options) {
  return run_expansion(network, loads, options).result;
}

ExpansionResult evaluate_second_stage(const Network& network, const LoadSet& loads,
                                      const std::vector<double>& x_fixed, const ExpansionOptions& options) {
  return run_expansion(network, loads, options, &x_fixed).result;
}

CongestionReport congestion_report(const ExpansionResult& result, const Network& network) {
  CongestionReport rep;
  if (!result.optimal()) return rep;
  for (std::size_t l = 0; l < network.lines.size(); ++l) {
    const double cap = network.lines[l].capacity_mw;
    int hours = 0;
    for (Eigen::Index t = 0; t < result.flows.rows(); ++t)
      if (std::abs(result.flows(t, static_cast<Eigen::Index>(l))) >= cap * (1.0 - kBindingRelTol)) ++hours;
    if (hours > 0) rep.binding_lines.push_back(network.lines[l].id);
    rep.binding_line_hours += hours;
  }
  for (std::size_t g = 0; g < network.generators.size(); ++g) {
    const double cap = network.generators[g].existing_mw + result.added_capacity[g];
    if (cap <= 0.0) continue;
    const double peak = result.dispatch.col(static_cast<Eigen::Index>(g)).maxCoeff();
    if (peak >= cap * (1.0 - kBindingRelTol)) rep.peak_generators.push_back(network.generators[g].id);
  }
  rep.max_backlog_mw = result.backlog.size() ? result.backlog.maxCoeff() : 0.0;
  rep.total_shift_mw = result.shifts.cwiseAbs().sum();
  return rep;
}

double nodal_balance_residual(const ExpansionResult& result, const Network& network, const LoadSet& loads) {
  if (!result.optimal()) throw Error("no solution to check");
  Eigen::MatrixXd net = -loads.base - loads.geo.baseline - result.shifts + result.shed;
  for (std::size_t g = 0; g < network.generators.size(); ++g)
    net.col(static_cast<Eigen::Index>(network.generators[g].bus_index)) += result.dispatch.col(static_cast<Eigen::Index>(g));
  for (std::size_t d = 0; d < loads.deferrable.size(); ++d)
    net.col(static_cast<Eigen::Index>(*network.find_bus(loads.deferrable[d].bus))) -= result.served.col(static_cast<Eigen::Index>(d));
  for (std::size_t l = 0; l < network.lines.size(); ++l) {
    const auto& line = network.lines[l];
    net.col(static_cast<Eigen::Index>(line.from_index)) -= result.flows.col(static_cast<Eigen::Index>(l));
    net.col(static_cast<Eigen::Index>(line.to_index)) += result.flows.col(static_cast<Eigen::Index>(l));
  }
  return net.size() ? net.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace dcflex
