// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dcflex/expansion.hpp"
#include "dcflex/harness.hpp"
#include "dcflex/lp/kkt.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace dcflex;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Collects failures; keeps only the first few messages.
class Tally {
 public:
  void fail(const std::string& msg) {
    std::lock_guard lock(mu_);
    ++failures_;
    if (messages_.size() < 5) messages_.push_back(msg);
  }
  void count(int n = 1) { checked_ += n; }
  int failures() const { return failures_; }
  int checked() const { return checked_; }
  std::string messages() const {
    std::string out;
    for (const auto& m : messages_) out += "\n    " + m;
    return out;
  }

 private:
  std::mutex mu_;
  std::atomic<int> failures_{0};
  std::atomic<int> checked_{0};
  std::vector<std::string> messages_;
};

/// Audit and KKT tallies shared by suites 1-3.
Tally audit_tally, kkt_tally;

bool rel_close(double a, double b, double rel) { return std::abs(a - b) <= rel * (1.0 + std::max(std::abs(a), std::abs(b))); }

void audit(const std::string& tag, const ExpansionRun& run, const Network& net, const LoadSet& loads) {
  const auto& r = run.result;
  kkt_tally.count();
  const auto kkt = lp::check_kkt(run.assembled.model, run.solution, 1e-6);
  if (!kkt.passed()) kkt_tally.fail(tag + ": " + kkt.summary());
  if (std::abs(run.solution.objective - kkt.dual_objective) > 1e-6 * (1.0 + std::abs(run.solution.objective)))
    kkt_tally.fail(tag + ": primal/dual objectives differ");

  audit_tally.count();
  const double residual = nodal_balance_residual(r, net, loads);
  if (residual > 1e-5) audit_tally.fail(tag + ": nodal residual " + std::to_string(residual));
  for (std::size_t c = 0; c < loads.deferrable.size(); ++c) {
    std::vector<double> served(static_cast<std::size_t>(r.served.rows()));
    for (Eigen::Index t = 0; t < r.served.rows(); ++t) served[static_cast<std::size_t>(t)] = r.served(t, static_cast<Eigen::Index>(c));
    const auto v = check_backlog_trajectory(loads.deferrable[c], served);
    if (!v.empty()) audit_tally.fail(tag + ": backlog " + std::string(to_string(v.front().kind)));
  }
  const auto g = check_geo_shift(loads.geo, r.shifts);
  if (!g.empty()) audit_tally.fail(tag + ": shift " + std::string(to_string(g.front().kind)));
  for (std::size_t l = 0; l < net.lines.size(); ++l) {
    const double cap = net.lines[l].capacity_mw;
    for (Eigen::Index t = 0; t < r.flows.rows(); ++t)
      if (std::abs(r.flows(t, static_cast<Eigen::Index>(l))) > cap + 1e-6 * (1.0 + cap))
        audit_tally.fail(tag + ": flow limit on " + net.lines[l].id);
  }
  const double sum = r.investment_cost + r.operating_cost + r.delay_cost + r.shift_cost + r.shed_cost;
  if (!rel_close(sum, r.total_cost, 1e-6)) audit_tally.fail(tag + ": cost decomposition");
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  const auto net = fixtures::toy2();
  ExpansionOptions opt;
  opt.shed_mode = ShedMode::Forbidden;
  auto check = [&](const std::string& tag, const LoadSet& loads, double expected) {
    const auto run = run_expansion(net, loads, opt);
    if (!run.result.optimal() || !rel_close(run.result.total_cost, expected, 1e-6)) {
      out.pass = false;
      out.detail += " " + tag + "=" + std::to_string(run.result.total_cost);
    }
    if (run.result.optimal()) audit("toy2 " + tag, run, net, loads);
  };
  check("2MW", fixtures::toy2_firm(2), 6.0);
  check("3MW", fixtures::toy2_firm(3), 111.0);
  const auto spec = load_flex_spec_file(fixtures::path("flex/toy2_shift1.json"));
  auto shift = build_loadset(net, load_profiles_file(fixtures::path("profiles/toy2_empty.csv"), net), spec);
  check("shift", shift, 7.2);
  if (out.pass) out.detail = "costs 6, 111, 7.2";
  return out;
}

// Tiny random instance: 2-3 buses, 1-3 hours, up to 2 deferrable classes,
// optional geo shifting.
struct Tiny {
  Network net;
  LoadSet loads;
};

Tiny random_tiny(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Network net;
  const int buses = pick(2, 3);
  for (int n = 0; n < buses; ++n) net.buses.push_back({"n" + std::to_string(n), 0, n == 0});
  auto line = [&](int a, int b) {
    net.lines.push_back({"l" + std::to_string(a) + std::to_string(b), net.buses[a].id, net.buses[b].id,
                         1.0 + 9.0 * u(rng), 0.5 + 2.5 * u(rng)});
  };
  line(0, 1);
  if (buses == 3) {
    line(1, 2);
    if (u(rng) < 0.5) line(0, 2);
  }
  const int gens = pick(1, 3);
  for (int g = 0; g < gens; ++g)
    net.generators.push_back({"g" + std::to_string(g), net.buses[static_cast<std::size_t>(pick(0, buses - 1))].id,
                              3.0 * u(rng), 5.0 * u(rng), 1.0 + 9.0 * u(rng), 5.0 + 45.0 * u(rng)});
  net = make_network(std::move(net));

  const int hours = pick(1, 3);
  Profile base(hours, buses);
  for (int t = 0; t < hours; ++t)
    for (int n = 0; n < buses; ++n) base(t, n) = 2.0 * u(rng);
  LoadSet loads = LoadSet::firm(base);
  const int classes = pick(0, 2);
  for (int c = 0; c < classes; ++c) {
    DeferrableClass d{"c" + std::to_string(c), net.buses[static_cast<std::size_t>(pick(0, buses - 1))].id,
                      pick(0, hours - 1), {}};
    for (int t = 0; t < hours; ++t) d.arrivals_mw.push_back(2.0 * u(rng));
    loads.deferrable.push_back(d);
    loads.delay_penalty.push_back(3.0 * u(rng));
  }
  if (u(rng) < 0.6) {
    Profile baseline = Profile::Zero(hours, buses);
    std::vector<std::size_t> geo;
    for (int n = 0; n < buses; ++n)
      if (u(rng) < 0.7 || geo.empty()) {
        geo.push_back(static_cast<std::size_t>(n));
        for (int t = 0; t < hours; ++t) baseline(t, n) = 2.0 * u(rng);
      }
    loads.geo = geo_bounds_from_portion(baseline, geo, u(rng));
    loads.shift_penalty = u(rng);
  } else {
    loads.geo = GeoShiftSpec::none(static_cast<std::size_t>(hours), static_cast<std::size_t>(buses));
  }
  return {std::move(net), std::move(loads)};
}

Outcome criterion2() {
  Outcome out;
  std::mt19937_64 rng(2024);
  ExpansionOptions opt;
  opt.shed_mode = ShedMode::Allowed;
  int mismatches = 0;
  for (int k = 0; k < 200; ++k) {
    const auto inst = random_tiny(rng);
    const auto run = run_expansion(inst.net, inst.loads, opt);
    const auto ref = oracle::tableau_solve(oracle::expansion_lp(inst.net, inst.loads, opt));
    const bool ok = run.result.optimal() && ref.status == oracle::Status::Optimal &&
                    rel_close(run.result.total_cost, static_cast<double>(ref.objective), 1e-6);
    if (!ok) {
      ++mismatches;
      if (mismatches <= 3)
        out.detail += " #" + std::to_string(k) + " " + std::to_string(run.result.total_cost) + " vs " +
                      std::to_string(static_cast<double>(ref.objective));
    }
    if (run.result.optimal()) audit("tiny#" + std::to_string(k), run, inst.net, inst.loads);
  }
  out.pass = mismatches == 0;
  out.detail = std::to_string(200 - mismatches) + "/200 match" + out.detail;
  return out;
}

// ---------------------------------------------------------------------------
// Suite 3: randomized 14-bus scenarios, 12 hours.

Scenario random_ieee14(std::uint64_t seed, const Network& ieee14, const Profile& diurnal) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Scenario s;
  s.network = ieee14;
  for (auto& l : s.network.lines) l.capacity_mw *= 0.8 + 0.6 * u(rng);
  for (auto& g : s.network.generators) {
    g.marginal_cost *= 0.8 + 0.4 * u(rng);
    g.investment_cost *= 0.8 + 0.4 * u(rng);
  }
  const int hours = 12;
  const int start = std::uniform_int_distribution<int>(0, static_cast<int>(diurnal.rows()) - hours)(rng);
  s.base = diurnal.middleRows(start, hours);
  for (Eigen::Index n = 0; n < s.base.cols(); ++n) s.base.col(n) *= 0.7 + 0.4 * u(rng);

  std::vector<std::string> ids;
  for (const auto& b : s.network.buses) ids.push_back(b.id);
  std::shuffle(ids.begin(), ids.end(), rng);
  SuperimposeSpec sup;
  const int dc = std::uniform_int_distribution<int>(2, 4)(rng);
  sup.dc_buses.assign(ids.begin(), ids.begin() + dc);
  sup.growth_ratio = 0.3 + 1.2 * u(rng);
  sup.deferrable_fraction = 0.2 + 0.3 * u(rng);
  sup.geo_fraction = 0.2 + 0.3 * u(rng);
  sup.window_h = 2;
  s.flex.superimpose = sup;
  s.flex.geo.portion = 0.5;
  if (u(rng) < 0.5) s.flex.geo.buses = {ids.begin(), ids.begin() + dc + 1};
  s.flex.delay_penalty_default = 2.0 * u(rng);
  s.flex.shift_penalty = u(rng);
  return s;
}

struct Suite3 {
  Tally monotone;
  Tally firm_identity;
  int instances = 0;
  int solves = 0;
};

void run_instance(const Scenario& sc, std::uint64_t id, Suite3& suite) {
  auto solve = [&](const PointParams& p, const std::string& tag) {
    const auto point = resolve_point(sc, p);
    auto run = run_expansion(point.network, point.loads, sc.options);
    if (run.result.optimal()) audit(tag, run, point.network, point.loads);
    return std::pair(std::move(run), point.loads);
  };
  auto axis = [&](const std::string& name, const std::vector<PointParams>& points) {
    double prev = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::string tag = "inst" + std::to_string(id) + " " + name + "[" + std::to_string(i) + "]";
      const auto [run, loads] = solve(points[i], tag);
      suite.monotone.count();
      if (!run.result.optimal()) {
        suite.monotone.fail(tag + ": " + std::string(lp::to_string(run.result.status)));
        return;
      }
      const double cost = run.result.total_cost;
      if (i > 0 && cost > prev + 1e-6 * std::max(1.0, std::abs(prev)))
        suite.monotone.fail(tag + ": cost rose from " + std::to_string(prev) + " to " + std::to_string(cost));
      prev = cost;
      if (points[i].window_h && *points[i].window_h == 0) {
        suite.firm_identity.count();
        double worst = 0.0;
        for (std::size_t c = 0; c < loads.deferrable.size(); ++c)
          for (Eigen::Index t = 0; t < run.result.served.rows(); ++t)
            worst = std::max(worst, std::abs(run.result.served(t, static_cast<Eigen::Index>(c)) -
                                             loads.deferrable[c].arrivals_mw[static_cast<std::size_t>(t)]));
        if (worst > 1e-6) suite.firm_identity.fail(tag + ": |s - u| = " + std::to_string(worst));
      }
    }
  };
  std::vector<PointParams> windows, portions, budgets;
  for (int w : {0, 1, 2, 4, 8}) {
    PointParams p;
    p.window_h = w;
    windows.push_back(p);
  }
  for (double rho : {0.0, 0.25, 0.5, 1.0}) {
    PointParams p;
    p.geo_portion = rho;
    portions.push_back(p);
  }
  for (double scale : {0.0, 0.5, 1.0, 2.0}) {
    PointParams p;
    p.budget_scale = scale;
    budgets.push_back(p);
  }
  axis("window", windows);
  axis("portion", portions);
  axis("budget", budgets);
}

Outcome criterion3(Suite3& suite) {
  const auto ieee14 = load_case_file(fixtures::path("cases/ieee14.json"));
  const auto diurnal = load_profiles_file(fixtures::path("profiles/ieee14_diurnal.csv"), ieee14);
  constexpr int kInstances = 50;
  std::atomic<int> next{0};
  {
    const unsigned workers = std::clamp(std::thread::hardware_concurrency(), 1u, 8u);
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int k = next++; k < kInstances; k = next++) {
          const auto sc = random_ieee14(1000 + static_cast<std::uint64_t>(k), ieee14, diurnal);
          try {
            run_instance(sc, static_cast<std::uint64_t>(k), suite);
          } catch (const std::exception& e) {
            suite.monotone.fail("inst" + std::to_string(k) + ": " + e.what());
          }
        }
      });
  }
  suite.instances = kInstances;
  Outcome out;
  out.pass = suite.monotone.failures() == 0;
  out.detail = std::to_string(suite.monotone.checked()) + " solves on " + std::to_string(kInstances) +
               " instances, " + std::to_string(suite.monotone.failures()) + " violations" + suite.monotone.messages();
  return out;
}

Outcome criterion4(const Suite3& suite) {
  Outcome out;
  out.pass = suite.firm_identity.failures() == 0 && suite.firm_identity.checked() == suite.instances;
  out.detail = std::to_string(suite.firm_identity.checked()) + " window-0 solves, " +
               std::to_string(suite.firm_identity.failures()) + " mismatches" + suite.firm_identity.messages();
  return out;
}

Outcome from_tally(const Tally& t, const std::string& what) {
  Outcome out;
  out.pass = t.failures() == 0 && t.checked() > 0;
  out.detail = std::to_string(t.checked()) + " " + what + ", " + std::to_string(t.failures()) + " failures" + t.messages();
  return out;
}

// ---------------------------------------------------------------------------

std::string pct_text(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+.2f%%", *v);
  return buf;
}

Outcome criterion7() {
  Outcome out;
  const auto base = load_scenario(fixtures::path("cases/ieee14.json"), fixtures::path("profiles/ieee14_diurnal.csv"),
                                  fixtures::path("flex/ieee14_dc.json"));
  PointParams p;
  p.growth_ratio = 1.5;
  p.geo_portion = 0.6;
  const auto d = compare_firm_vs_flex(base, p);
  const bool lower = d.flex.total_cost < d.firm.total_cost;
  out.detail = "ieee14 total " + pct_text(d.total_pct);

  const auto congested = load_scenario(fixtures::path("cases/ieee14_congested.json"),
                                       fixtures::path("profiles/ieee14_diurnal.csv"),
                                       fixtures::path("flex/ieee14_congested_dc.json"));
  bool split = false;
  for (double rho : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    PointParams q;
    q.geo_portion = rho;
    const auto c = compare_firm_vs_flex(congested, q);
    const bool hit = c.flex.investment_cost > c.firm.investment_cost && c.flex.total_cost < c.firm.total_cost;
    if (hit && !split) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "; congested portion %.1f investment %s total %s", rho,
                    pct_text(c.investment_pct).c_str(), pct_text(c.total_pct).c_str());
      out.detail += buf;
    }
    split = split || hit;
  }
  if (!split) out.detail += "; congested fixture shows no investment-up/total-down portion";
  out.pass = lower && split;
  return out;
}

Outcome criterion8() {
  Outcome out;
  // Documented in the fixture description: within 1% of the 8 h cost from W = 1.
  constexpr int kDocumentedPlateau = 1;
  const auto sc = load_scenario(fixtures::path("cases/ieee14.json"), fixtures::path("profiles/ieee14_evening.csv"),
                                fixtures::path("flex/ieee14_evening.json"));
  FlexGrid grid;
  grid.windows = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  const auto recs = sweep_flexibility(sc, grid, 4);
  std::vector<double> cost;
  for (const auto& r : recs) {
    if (!r.optimal()) {
      out.pass = false;
      out.detail = "window " + std::to_string(*r.window_h) + " " + r.status;
      return out;
    }
    cost.push_back(r.total_cost);
  }
  for (std::size_t k = 1; k < cost.size(); ++k)
    if (cost[k] > cost[k - 1] + 1e-6 * std::abs(cost[k - 1])) {
      out.pass = false;
      out.detail += " cost rises at W=" + std::to_string(k) + ";";
    }
  for (std::size_t k = kDocumentedPlateau + 1; k + 1 < cost.size(); ++k) {
    const double prev = cost[k - 1] - cost[k], next = cost[k] - cost[k + 1];
    if (next > prev + 1e-6 * std::abs(cost[k])) {
      out.pass = false;
      out.detail += " marginal saving grows at W=" + std::to_string(k) + ";";
    }
  }
  const auto plateau = window_plateau(recs);
  if (!plateau) {
    out.pass = false;
    out.detail += " no plateau;";
  } else {
    out.detail += " plateau W=" + std::to_string(*plateau) + ", costs";
  }
  char buf[64];
  for (double c : cost) {
    std::snprintf(buf, sizeof buf, " %.0f", c);
    out.detail += buf;
  }
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DCFLEX_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome criterion9() {
  Outcome out;
  const auto root = fs::temp_directory_path() / "dcflex_acceptance_determinism";
  fs::remove_all(root);
  const std::string config = fixtures::path("configs/ieee14_window_sweep.toml");
  const std::vector<std::pair<std::string, int>> runs = {{"serial_a", 1}, {"serial_b", 1}, {"parallel", 4}};
  std::vector<std::string> csv;
  for (const auto& [name, workers] : runs) {
    const auto dir = root / name;
    const int rc = run_cli("sweep --config " + config + " --out " + dir.string() + " --workers " + std::to_string(workers));
    if (rc != 0) {
      out.pass = false;
      out.detail = "sweep " + name + " exited with " + std::to_string(rc);
      return out;
    }
    csv.push_back(read_text_file((dir / "sweep.csv").string()));
  }
  out.pass = csv[0] == csv[1] && csv[0] == csv[2];

  // Same property through the library, independent of the CLI.
  const auto sc = load_scenario(fixtures::path("cases/toy2.json"), fixtures::path("profiles/toy2_empty.csv"),
                                fixtures::path("flex/toy2_portion.json"));
  FlexGrid grid;
  grid.geo_portions = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0};
  grid.budget_scales = {0.5, 1.0};
  const auto serial = sweep_csv(sweep_flexibility(sc, grid, 1), sc.network);
  const auto parallel = sweep_csv(sweep_flexibility(sc, grid, 4), sc.network);
  out.pass = out.pass && serial == parallel;
  out.detail = out.pass ? "sweep.csv identical across 2 serial runs and workers=4; library sweep identical"
                        : "outputs differ";
  fs::remove_all(root);
  return out;
}

Outcome criterion10() {
  Outcome out;
  auto sc = load_scenario(fixtures::path("cases/toy2.json"), fixtures::path("profiles/toy2_empty.csv"),
                          fixtures::path("flex/toy2_portion.json"));
  SearchRequest req;
  req.budget_kind = BudgetKind::Investment;
  req.budget = 0.0;
  req.knob = Knob::GeoPortion;
  req.tol = 0.01;
  const auto res = min_flexibility_search(sc, req);
  out.pass = res.status == "OK" && std::abs(res.value - 1.0 / 3.0) <= 0.01 && res.certificate_at == "Optimal" &&
             res.below && res.certificate_below == "Infeasible";

  // Re-check both certificates with fresh solves.
  sc.options.shed_mode = ShedMode::Forbidden;
  sc.options.investment_budget = 0.0;
  PointParams at, below;
  at.geo_portion = res.value;
  below.geo_portion = res.value - req.tol;
  const auto r_at = evaluate_point(sc, at);
  const auto r_below = evaluate_point(sc, below);
  out.pass = out.pass && r_at.optimal() && r_below.status == "Infeasible";
  char buf[160];
  std::snprintf(buf, sizeof buf, "portion %.4f (%s), %.4f (%s), %zu evaluations", res.value, r_at.status.c_str(),
                res.value - req.tol, r_below.status.c_str(), res.evaluations.size());
  out.detail = buf;
  return out;
}

}  // namespace

int main() {
  struct Row {
    int id;
    std::string name;
    double limit_s;
    Outcome outcome;
    double seconds = 0.0;
  };
  std::vector<Row> rows;
  auto timed = [&](int id, const std::string& name, double limit, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    rows.push_back({id, name, limit, o, seconds_since(t0)});
  };

  Suite3 suite;
  timed(1, "hand-LP oracle on toy2", 1.0, criterion1);
  timed(2, "random small instances vs reference LP", 60.0, criterion2);
  timed(3, "monotonicity on randomized 14-bus instances", 600.0, [&] { return criterion3(suite); });
  timed(4, "window 0 serves arrivals on time", 0.0, [&] { return criterion4(suite); });
  timed(5, "conservation and feasibility audit", 0.0, [] { return from_tally(audit_tally, "optimal results audited"); });
  timed(6, "KKT and duality", 0.0, [] { return from_tally(kkt_tally, "solves checked"); });
  timed(7, "directional 14-bus reproduction", 300.0, criterion7);
  timed(8, "window plateau", 0.0, criterion8);
  timed(9, "determinism", 0.0, criterion9);
  timed(10, "minimum-flexibility search", 0.0, criterion10);

  bool all = true;
  for (auto& r : rows) {
    if (r.limit_s > 0 && r.seconds > r.limit_s) {
      r.outcome.pass = false;
      r.outcome.detail += " (over the " + std::to_string(static_cast<int>(r.limit_s)) + " s limit)";
    }
    all = all && r.outcome.pass;
    std::printf("criterion %2d: %s  %s [%.2f s] %s\n", r.id, r.outcome.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.seconds, r.outcome.detail.c_str());
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
