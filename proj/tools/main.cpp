// dcflex command-line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 infeasible.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "config.hpp"
#include "dcflex/lp/kkt.hpp"
#include "dcflex/lp/mps.hpp"

namespace fs = std::filesystem;
using namespace dcflex;
using cli::RunConfig;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInfeasible = 2;

struct Flags {
  std::string config;
  std::string case_path, profiles_path, flex_path, out;
  std::optional<int> workers;
  std::optional<double> feas_tol, opt_tol;
  std::string shed_mode;
  std::string export_mps, dump_lp;
  bool resume = false;
  bool compare = false;
  long stop_after = 0;
};

RunConfig resolve(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : cli::load_config(f.config);
  if (!f.case_path.empty()) c.case_path = f.case_path;
  if (!f.profiles_path.empty()) c.profiles_path = f.profiles_path;
  if (!f.flex_path.empty()) c.flex_path = f.flex_path;
  if (!f.out.empty()) c.out = f.out;
  if (f.workers) c.workers = *f.workers;
  if (f.feas_tol) c.options.solver.feas_tol = *f.feas_tol;
  if (f.opt_tol) c.options.solver.opt_tol = *f.opt_tol;
  if (!f.shed_mode.empty()) c.options.shed_mode = parse_shed_mode(f.shed_mode);
  if (c.workers < 1) throw Error("--workers must be at least 1");
  return c;
}

const std::string& need(const std::optional<std::string>& v, const char* what) {
  if (!v) throw Error(std::string("no ") + what + " given (set it in the config or pass --" + what + ")");
  return *v;
}

Scenario scenario_of(const RunConfig& c) {
  return load_scenario(need(c.case_path, "case"), need(c.profiles_path, "profiles"), c.flex_path, c.options);
}

std::map<std::string, std::string> fixture_files(const RunConfig& c) {
  std::map<std::string, std::string> out;
  if (c.case_path) out["case"] = *c.case_path;
  if (c.profiles_path) out["profiles"] = *c.profiles_path;
  if (c.flex_path) out["flex"] = *c.flex_path;
  return out;
}

std::string out_dir(const RunConfig& c) {
  const auto& d = need(c.out, "out");
  fs::create_directories(d);
  return d;
}

void write_manifest(const std::string& dir, const std::string& command, const RunConfig& c) {
  write_text_file((fs::path(dir) / "manifest.json").string(),
                  make_manifest(command, cli::to_json(c), fixture_files(c)).dump(2) + "\n");
}

std::string describe(const PointParams& p) {
  std::ostringstream s;
  s << "variant=" << to_string(p.variant) << " line_factor=" << p.line_factor;
  if (p.window_h) s << " window_h=" << *p.window_h;
  if (p.geo_portion) s << " geo_portion=" << *p.geo_portion;
  if (p.growth_ratio) s << " growth_ratio=" << *p.growth_ratio;
  if (p.budget_scale != 1.0) s << " budget_scale=" << p.budget_scale;
  return s.str();
}

int cmd_solve(const Flags& f) {
  const auto c = resolve(f);
  const auto sc = scenario_of(c);
  const auto point = resolve_point(sc, c.point);
  auto am = assemble(point.network, point.loads, c.options);

  if (!f.dump_lp.empty()) write_text_file(f.dump_lp, lp::format_lp_review(am.model));
  if (!f.export_mps.empty()) {
    const auto mps = lp::export_mps(am.model);
    write_text_file(f.export_mps, mps.text);
    write_text_file(f.export_mps + ".names.csv", mps.name_map_csv(am.model));
    std::cerr << "wrote " << f.export_mps << " (" << am.model.variable_count() << " columns, "
              << am.model.constraint_count() << " rows)\n";
    return kOk;
  }

  const auto run = run_expansion(point.network, point.loads, c.options);
  const auto dir = out_dir(c);
  write_result_bundle(dir, run.result, point.network, point.loads);
  if (run.result.optimal()) {
    const auto kkt = lp::check_kkt(run.assembled.model, run.solution);
    if (!kkt.passed()) std::cerr << "warning: optimality check: " << kkt.summary() << "\n";
  }
  if (f.compare) {
    const auto rep = compare_firm_vs_flex(sc, c.point);
    write_text_file((fs::path(dir) / "compare.json").string(), delta_json(rep).dump(2) + "\n");
  }
  write_manifest(dir, "solve", c);

  const auto& r = run.result;
  std::cerr << "status " << lp::to_string(r.status);
  if (r.optimal()) std::cerr << ", total cost " << r.total_cost << ", added " << r.added_capacity_total() << " MW";
  if (r.requires_shed) std::cerr << ", load shedding required";
  std::cerr << "\n";
  if (r.status == lp::SolveStatus::Infeasible) return kInfeasible;
  return r.optimal() ? kOk : kError;
}

// Journal: first line holds the run fingerprint, then "<index>\t<csv row>".
std::map<std::size_t, std::string> read_journal(const fs::path& path, const std::string& fingerprint) {
  std::map<std::size_t, std::string> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  if (!std::getline(in, line) || line != "# " + fingerprint)
    throw Error("journal " + path.string() + " belongs to a different sweep; remove it or drop --resume");
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;  // torn final write
    rows[std::stoul(line.substr(0, tab))] = line.substr(tab + 1) + "\n";
  }
  return rows;
}

int cmd_sweep(const Flags& f) {
  const auto c = resolve(f);
  const auto sc = scenario_of(c);
  const auto points = c.sweep_kind == "penetration" ? penetration_points(c.growth_ratios) : flexibility_points(c.grid);
  const auto dir = out_dir(c);
  const fs::path journal = fs::path(dir) / "sweep.journal";

  // Worker count does not change results, so it stays out of the fingerprint.
  auto key = cli::to_json(c);
  key.erase("workers");
  key["fixtures"] = json::object();
  for (const auto& [role, path] : fixture_files(c)) key["fixtures"][role] = sha256_file(path);
  const std::string tmp = (fs::path(dir) / ".fingerprint").string();
  write_text_file(tmp, key.dump());
  const auto fingerprint = sha256_file(tmp);
  fs::remove(tmp);

  std::map<std::size_t, std::string> done;
  if (f.resume) done = read_journal(journal, fingerprint);
  std::ofstream log;
  if (f.resume && fs::exists(journal)) {
    log.open(journal, std::ios::app);
  } else {
    log.open(journal, std::ios::trunc);
    log << "# " << fingerprint << "\n";
  }
  log.flush();

  const auto gens = sc.network.generator_count();
  std::size_t completed = done.size();
  long evaluated = 0;
  bool stopped = false;
  RunHooks hooks;
  hooks.skip = [&](std::size_t i) { return done.count(i) > 0 || stopped; };
  hooks.on_done = [&](std::size_t i, const SweepRecord& r) {
    const auto row = sweep_csv_row(r, gens);
    done[i] = row;
    log << i << '\t' << row;
    log.flush();
    ++completed;
    std::cerr << "[" << completed << "/" << points.size() << "] " << describe(points[i]) << " status=" << r.status;
    if (r.optimal()) std::cerr << " total_cost=" << r.total_cost;
    std::cerr << "\n";
    if (f.stop_after > 0 && ++evaluated >= f.stop_after) stopped = true;
  };
  const auto records = run_points(sc, points, c.workers, hooks);
  log.close();
  if (done.size() < points.size()) {
    std::cerr << "sweep stopped after " << done.size() << " of " << points.size()
              << " points; rerun with --resume to finish\n";
    return kError;
  }

  std::string csv = sweep_csv_header(sc.network);
  for (std::size_t i = 0; i < points.size(); ++i) csv += done.at(i);
  write_text_file((fs::path(dir) / "sweep.csv").string(), csv);

  // Plateau per group of points that differ only in window.
  if (c.sweep_kind == "flexibility" && c.grid.windows.size() > 1) {
    json plateaus = json::array();
    std::map<std::tuple<double, std::optional<double>, double>, std::vector<SweepRecord>> groups;
    for (std::size_t i = 0; i < points.size(); ++i) {
      SweepRecord r = records[i];
      if (r.status.empty()) {  // resumed point: rebuild from the evaluated value
        r = evaluate_point(sc, points[i]);
      }
      groups[{points[i].line_factor, points[i].geo_portion, points[i].budget_scale}].push_back(r);
    }
    for (const auto& [k, recs] : groups) {
      const auto w = window_plateau(recs);
      plateaus.push_back({{"line_factor", std::get<0>(k)},
                          {"geo_portion", std::get<1>(k) ? json(*std::get<1>(k)) : json(nullptr)},
                          {"budget_scale", std::get<2>(k)},
                          {"plateau_window_h", w ? json(*w) : json(nullptr)}});
    }
    write_text_file((fs::path(dir) / "plateau.json").string(), plateaus.dump(2) + "\n");
  }
  write_manifest(dir, "sweep", c);
  fs::remove(journal);
  std::cerr << "wrote " << (fs::path(dir) / "sweep.csv").string() << "\n";
  return kOk;
}

int cmd_search(const Flags& f) {
  const auto c = resolve(f);
  const auto sc = scenario_of(c);
  auto req = c.search;
  req.base = c.point;
  const auto res = min_flexibility_search(sc, req);
  const auto dir = out_dir(c);
  write_text_file((fs::path(dir) / "search.json").string(), search_json(res, req).dump(2) + "\n");
  write_manifest(dir, "search", c);
  std::cerr << "search " << res.status << ": " << to_string(req.knob) << " = " << res.value << "\n";
  return res.status == "OK" ? kOk : kInfeasible;
}

int cmd_gen_profiles(const Flags& f) {
  const auto c = resolve(f);
  const auto net = load_case_file(need(c.case_path, "case"));
  const auto profile = generate_profiles(net, c.generate);
  const auto& target = need(c.out, "out");
  const auto parent = fs::path(target).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  write_text_file(target, render_profiles(profile, net));
  std::cerr << "wrote " << target << " (" << profile.rows() << " hours)\n";
  return kOk;
}

int cmd_validate(const Flags& f) {
  const auto c = resolve(f);
  std::vector<Diagnostic> warnings;
  const auto net = load_case_file(need(c.case_path, "case"), &warnings);
  if (!warnings.empty()) std::cerr << format_diagnostics(warnings);
  std::cout << "case ok: " << net.bus_count() << " buses, " << net.line_count() << " lines, "
            << net.generator_count() << " generators\n";
  if (c.profiles_path) {
    const auto base = load_profiles_file(*c.profiles_path, net);
    std::cout << "profiles ok: " << base.rows() << " hours\n";
    if (c.flex_path) {
      const auto loads = build_loadset(net, base, load_flex_spec_file(*c.flex_path));
      std::cout << "flex ok: " << loads.deferrable.size() << " deferrable classes\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity expansion with flexible data-center demand"};
  app.set_version_flag("--version", std::string("dcflex ") + kToolVersion);
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "TOML or JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--case", f.case_path, "network case file (overrides config)");
    sub->add_option("--profiles", f.profiles_path, "base load profile CSV (overrides config)");
    sub->add_option("--flex", f.flex_path, "flexibility spec (overrides config)");
    sub->add_option("--out", f.out, "output directory (or file for gen-profiles)");
    sub->add_option("--workers", f.workers, "parallel solves for sweeps");
    sub->add_option("--feas-tol", f.feas_tol, "primal feasibility tolerance");
    sub->add_option("--opt-tol", f.opt_tol, "optimality tolerance");
    sub->add_option("--shed-mode", f.shed_mode, "allowed, two_phase or forbidden");
  };

  auto* solve = app.add_subcommand("solve", "solve one expansion problem");
  common(solve);
  solve->add_option("--export-mps", f.export_mps, "write the LP as fixed MPS instead of solving");
  solve->add_option("--dump-lp", f.dump_lp, "also write a readable listing of the LP");
  solve->add_flag("--compare", f.compare, "also solve the firm variant and write compare.json");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  common(sweep);
  sweep->add_flag("--resume", f.resume, "continue an interrupted sweep from its journal");
  sweep->add_option("--stop-after", f.stop_after)->group("");

  auto* search = app.add_subcommand("search", "find the least flexibility meeting a budget");
  common(search);

  auto* gen = app.add_subcommand("gen-profiles", "write synthetic diurnal load profiles");
  common(gen);

  auto* validate = app.add_subcommand("validate", "check input files");
  common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*solve) return cmd_solve(f);
    if (*sweep) return cmd_sweep(f);
    if (*search) return cmd_search(f);
    if (*gen) return cmd_gen_profiles(f);
    if (*validate) return cmd_validate(f);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n" << format_diagnostics(e.diagnostics());
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
