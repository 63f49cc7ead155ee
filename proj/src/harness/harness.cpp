#include "dcflex/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

namespace dcflex {

std::vector<SweepRecord> run_points(const Scenario& scenario, const std::vector<PointParams>& points, int workers,
                                    const RunHooks& hooks) {
  std::vector<SweepRecord> out(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      if (hooks.skip && hooks.skip(i)) continue;
      out[i] = evaluate_point(scenario, points[i]);
      if (hooks.on_done) {
        std::lock_guard lock(report);
        hooks.on_done(i, out[i]);
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, workers));
  if (n == 1 || points.size() <= 1) {
    work();
    return out;
  }
  std::vector<std::jthread> pool;
  for (std::size_t k = 0; k < std::min(n, points.size()); ++k) pool.emplace_back(work);
  pool.clear();
  return out;
}

namespace {

template <class T>
std::vector<std::optional<T>> axis(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<std::optional<T>> out(values.begin(), values.end());
  if (out.empty()) out.push_back(std::nullopt);
  return out;
}

}  // namespace

std::vector<PointParams> flexibility_points(const FlexGrid& grid) {
  std::vector<PointParams> out;
  for (const auto& lf : axis(grid.line_factors))
    for (const auto& w : axis(grid.windows))
      for (const auto& p : axis(grid.geo_portions))
        for (const auto& bs : axis(grid.budget_scales)) {
          PointParams pp;
          pp.line_factor = lf.value_or(1.0);
          pp.window_h = w;
          pp.geo_portion = p;
          pp.budget_scale = bs.value_or(1.0);
          out.push_back(pp);
        }
  return out;
}

std::vector<SweepRecord> sweep_flexibility(const Scenario& scenario, const FlexGrid& grid, int workers) {
  return run_points(scenario, flexibility_points(grid), workers);
}

std::vector<PointParams> penetration_points(const std::vector<double>& growth_ratios) {
  std::vector<PointParams> out;
  for (const auto& r : axis(growth_ratios)) {
    if (!r) break;
    if (*r < 0) throw Error("growth ratios must be non-negative");
    for (Variant v : {Variant::Firm, Variant::Flex}) {
      PointParams pp;
      pp.variant = v;
      pp.growth_ratio = r;
      out.push_back(pp);
    }
  }
  if (out.empty()) throw Error("penetration sweep needs at least one growth ratio");
  return out;
}

std::vector<SweepRecord> sweep_penetration(const Scenario& scenario, const std::vector<double>& growth_ratios,
                                           int workers) {
  return run_points(scenario, penetration_points(growth_ratios), workers);
}

std::optional<int> window_plateau(const std::vector<SweepRecord>& records, double rel) {
  std::vector<const SweepRecord*> rows;
  for (const auto& r : records)
    if (r.optimal() && r.window_h) rows.push_back(&r);
  if (rows.empty()) return std::nullopt;
  auto key = [](const SweepRecord* r) {
    return std::tuple(r->variant, r->line_factor, r->geo_portion, r->growth_ratio, r->budget_scale);
  };
  const auto first = key(rows.front());
  for (const auto* r : rows)
    if (key(r) != first) throw Error("plateau detection needs records that differ only in window");
  const auto* last = *std::max_element(rows.begin(), rows.end(),
                                       [](const auto* a, const auto* b) { return *a->window_h < *b->window_h; });
  const double target = last->total_cost + rel * std::abs(last->total_cost);
  std::optional<int> best;
  for (const auto* r : rows)
    if (r->total_cost <= target && (!best || *r->window_h < *best)) best = *r->window_h;
  return best;
}

std::string_view to_string(Knob k) { return k == Knob::Window ? "window" : "geo_portion"; }

Knob parse_knob(std::string_view text) {
  if (text == "geo_portion" || text == "portion") return Knob::GeoPortion;
  if (text == "window" || text == "window_h") return Knob::Window;
  throw Error("unknown search knob '" + std::string(text) + "' (geo_portion, window)");
}

BudgetKind parse_budget_kind(std::string_view text) {
  if (text == "investment") return BudgetKind::Investment;
  if (text == "capacity") return BudgetKind::Capacity;
  throw Error("unknown budget kind '" + std::string(text) + "' (investment, capacity)");
}

SearchResult min_flexibility_search(const Scenario& scenario, const SearchRequest& req) {
  if (!(req.budget >= 0.0)) throw Error("search budget must be non-negative");
  if (req.knob == Knob::GeoPortion && !(req.tol > 0.0 && req.tol < 1.0)) throw Error("search tolerance must lie in (0,1)");
  Scenario sc = scenario;
  sc.options.shed_mode = ShedMode::Forbidden;
  sc.options.investment_budget.reset();
  sc.options.capacity_budget_mw.reset();
  if (req.budget_kind == BudgetKind::Investment) sc.options.investment_budget = req.budget;
  else sc.options.capacity_budget_mw = req.budget;

  SearchResult res;
  auto probe = [&](double k) {
    PointParams p = req.base;
    p.variant = Variant::Flex;
    if (req.knob == Knob::GeoPortion) p.geo_portion = k;
    else p.window_h = static_cast<int>(k);
    const auto rec = evaluate_point(sc, p);
    if (rec.status == "Error") throw Error("search point failed: " + rec.error);
    if (rec.status != "Optimal" && rec.status != "Infeasible")
      throw Error("search point ended with status " + rec.status);
    res.evaluations.push_back({k, rec.status});
    return rec.status == "Optimal";
  };

  if (req.knob == Knob::GeoPortion) {
    if (!probe(1.0)) {
      res.status = "INFEASIBLE_AT_MAX";
      res.value = 1.0;
      res.certificate_at = "Infeasible";
      return res;
    }
    double lo = 0.0, hi = 1.0;
    if (probe(0.0)) {
      hi = 0.0;
    } else {
      while (hi - lo > req.tol) {
        const double mid = 0.5 * (lo + hi);
        (probe(mid) ? hi : lo) = mid;
      }
    }
    res.value = hi;
    res.certificate_at = "Optimal";
    if (hi > 0.0) {
      res.below = std::max(0.0, hi - req.tol);
      res.certificate_below = probe(*res.below) ? "Optimal" : "Infeasible";
    }
  } else {
    const int horizon = static_cast<int>(scenario.base.rows());
    const int max_w = req.max_window.value_or(std::max(0, horizon - 1));
    std::optional<int> found;
    for (int w = 0; w <= max_w && !found; ++w)
      if (probe(w)) found = w;
    if (!found) {
      res.status = "INFEASIBLE_AT_MAX";
      res.value = max_w;
      res.certificate_at = "Infeasible";
      return res;
    }
    res.value = *found;
    res.certificate_at = "Optimal";
    if (*found > 0) {
      res.below = *found - 1;
      res.certificate_below = "Infeasible";
    }
  }
  if (res.below && res.certificate_below != "Infeasible")
    throw Error("feasibility is not monotone in the search knob");
  res.status = "OK";
  return res;
}

json search_json(const SearchResult& r, const SearchRequest& req) {
  json doc;
  doc["status"] = r.status;
  doc["knob"] = std::string(to_string(req.knob));
  doc["value"] = r.value;
  doc["budget_kind"] = req.budget_kind == BudgetKind::Investment ? "investment" : "capacity";
  doc["budget"] = req.budget;
  if (req.knob == Knob::GeoPortion) doc["tolerance"] = req.tol;
  doc["certificate"] = {{"at", {{"knob", r.value}, {"status", r.certificate_at}}}};
  if (r.below) doc["certificate"]["below"] = {{"knob", *r.below}, {"status", r.certificate_below}};
  json evals = json::array();
  for (const auto& e : r.evaluations) evals.push_back({{"knob", e.knob}, {"status", e.status}});
  doc["evaluations"] = evals;
  return doc;
}

namespace {

std::optional<double> pct(double firm, double flex) {
  if (std::abs(firm) < 1e-12) {
    if (std::abs(flex) < 1e-12) return 0.0;
    return std::nullopt;
  }
  return 100.0 * (flex - firm) / std::abs(firm);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

DeltaReport compare_firm_vs_flex(const Scenario& scenario, const PointParams& params) {
  PointParams firm = params, flex = params;
  firm.variant = Variant::Firm;
  flex.variant = Variant::Flex;
  DeltaReport rep{evaluate_point(scenario, firm), evaluate_point(scenario, flex), {}, {}, {}, {}};
  for (const auto* r : {&rep.firm, &rep.flex})
    if (!r->optimal())
      throw Error(std::string(to_string(r->variant)) + " solve did not reach optimality: " +
                  (r->error.empty() ? r->status : r->error));
  rep.total_pct = pct(rep.firm.total_cost, rep.flex.total_cost);
  rep.investment_pct = pct(rep.firm.investment_cost, rep.flex.investment_cost);
  rep.operating_pct = pct(rep.firm.operating_cost, rep.flex.operating_cost);
  rep.added_mw_pct = pct(rep.firm.added_capacity_mw, rep.flex.added_capacity_mw);
  return rep;
}

json delta_json(const DeltaReport& r) {
  auto side = [](const SweepRecord& s) {
    return json{{"total_cost", s.total_cost},
                {"investment_cost", s.investment_cost},
                {"operating_cost", s.operating_cost},
                {"added_capacity_mw", s.added_capacity_mw}};
  };
  return json{{"firm", side(r.firm)},
              {"flex", side(r.flex)},
              {"delta_pct",
               {{"total_cost", opt_json(r.total_pct)},
                {"investment_cost", opt_json(r.investment_pct)},
                {"operating_cost", opt_json(r.operating_pct)},
                {"added_capacity_mw", opt_json(r.added_mw_pct)}}}};
}

}  // namespace dcflex
