#include <algorithm>

#include "dcflex/harness.hpp"

namespace dcflex {

Scenario load_scenario(const std::string& case_path, const std::string& profiles_path,
                       const std::optional<std::string>& flex_path, const ExpansionOptions& options) {
  Scenario s;
  s.network = load_case_file(case_path);
  s.base = load_profiles_file(profiles_path, s.network);
  if (flex_path) s.flex = load_flex_spec_file(*flex_path);
  s.options = options;
  return s;
}

std::string_view to_string(Variant v) { return v == Variant::Firm ? "firm" : "flex"; }

ResolvedPoint resolve_point(const Scenario& scenario, const PointParams& params) {
  ResolvedPoint out{scale_line_capacities(scenario.network, params.line_factor), {}, scenario.flex};
  auto& spec = out.spec;
  if (params.window_h) {
    if (*params.window_h < 0) throw Error("window must be non-negative");
    if (spec.superimpose) spec.superimpose->window_h = *params.window_h;
    for (auto& d : spec.deferrable) d.window_h = *params.window_h;
  }
  if (params.geo_portion) {
    spec.geo.portion = *params.geo_portion;
    spec.geo.lower_mw.clear();
    spec.geo.upper_mw.clear();
  }
  if (params.growth_ratio) {
    if (!spec.superimpose) throw Error("growth ratio given but the flex spec has no superimpose block");
    spec.superimpose->growth_ratio = *params.growth_ratio;
  }
  if (!(params.budget_scale >= 0.0)) throw Error("budget scale must be non-negative");
  spec.geo.budget_scale *= params.budget_scale;
  out.loads = build_loadset(out.network, scenario.base, spec);
  if (params.variant == Variant::Firm) out.loads = firm_equivalent(out.loads);
  return out;
}

SweepRecord evaluate_point(const Scenario& scenario, const PointParams& params) {
  SweepRecord rec;
  rec.variant = params.variant;
  rec.line_factor = params.line_factor;
  rec.window_h = params.window_h;
  rec.geo_portion = params.geo_portion;
  rec.growth_ratio = params.growth_ratio;
  rec.budget_scale = params.budget_scale;
  try {
    const auto point = resolve_point(scenario, params);
    const auto& spec = point.spec;
    if (!rec.window_h && !point.loads.deferrable.empty()) {
      const int w = point.loads.deferrable.front().window_h;
      if (std::all_of(point.loads.deferrable.begin(), point.loads.deferrable.end(),
                      [&](const DeferrableClass& c) { return c.window_h == w; }))
        rec.window_h = w;
    }
    if (!rec.geo_portion) rec.geo_portion = spec.geo.portion;
    if (!rec.growth_ratio && spec.superimpose) rec.growth_ratio = spec.superimpose->growth_ratio;
    rec.budget_scale = spec.geo.budget_scale;

    const auto r = solve_expansion(point.network, point.loads, scenario.options);
    rec.status = std::string(lp::to_string(r.status));
    if (!r.optimal()) return rec;
    rec.requires_shed = r.requires_shed;
    rec.total_cost = r.total_cost;
    rec.investment_cost = r.investment_cost;
    rec.operating_cost = r.operating_cost;
    rec.delay_cost = r.delay_cost;
    rec.shift_cost = r.shift_cost;
    rec.shed_cost = r.shed_cost;
    rec.added_by_generator = r.added_capacity;
    rec.added_capacity_mw = r.added_capacity_total();
    const auto cong = congestion_report(r, point.network);
    rec.total_shift_mw = cong.total_shift_mw;
    rec.max_backlog_mw = cong.max_backlog_mw;
    rec.binding_line_hours = cong.binding_line_hours;
  } catch (const std::exception& e) {
    rec.status = "Error";
    rec.error = e.what();
  }
  return rec;
}

}  // namespace dcflex
