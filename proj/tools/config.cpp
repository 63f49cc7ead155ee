#include "config.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <cmath>

namespace dcflex::cli {

namespace {

namespace fs = std::filesystem;

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) return f->get();
  if (const auto* b = node.as_boolean()) return b->get();
  throw Error("unsupported TOML value (dates and times are not accepted)");
}

json read_document(const std::string& path) {
  const auto text = read_text_file(path);
  if (fs::path(path).extension() == ".toml") {
    try {
      return toml_to_json(toml::parse(text, path));
    } catch (const toml::parse_error& e) {
      const auto& where = e.source().begin;
      throw ParseError(path + ": " + std::string(e.description()), static_cast<int>(where.line),
                       static_cast<int>(where.column));
    }
  }
  return parse_json(text);
}

std::string resolve(const fs::path& dir, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? p : (dir / path).lexically_normal().string();
}

std::vector<int> ints(const JsonObject& obj, std::string_view key) {
  std::vector<int> out;
  for (double v : obj.numbers(key)) {
    if (v != std::floor(v) || v < 0) throw ParseError(obj.path() + "." + std::string(key) + ": expected non-negative integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void read_point(const JsonObject& obj, PointParams& p) {
  obj.allow_only({"line_factor", "window_h", "geo_portion", "growth_ratio", "budget_scale"});
  p.line_factor = obj.number_or("line_factor", p.line_factor);
  if (obj.has("window_h")) p.window_h = static_cast<int>(obj.integer("window_h"));
  if (obj.has("geo_portion")) p.geo_portion = obj.number("geo_portion");
  if (obj.has("growth_ratio")) p.growth_ratio = obj.number("growth_ratio");
  p.budget_scale = obj.number_or("budget_scale", p.budget_scale);
}

}  // namespace

RunConfig load_config(const std::string& path) {
  const json doc = read_document(path);
  const fs::path dir = fs::path(path).parent_path();
  const JsonObject root(doc, "config");
  root.allow_only({"case", "profiles", "flex", "out", "workers", "solver", "expansion", "point", "sweep", "search",
                   "generate", "description"});
  RunConfig c;
  if (root.has("case")) c.case_path = resolve(dir, root.string("case"));
  if (root.has("profiles")) c.profiles_path = resolve(dir, root.string("profiles"));
  if (root.has("flex")) c.flex_path = resolve(dir, root.string("flex"));
  if (root.has("out")) c.out = resolve(dir, root.string("out"));
  c.workers = static_cast<int>(root.has("workers") ? root.integer("workers") : 1);

  if (root.has("solver")) {
    const auto s = root.object("solver");
    s.allow_only({"feas_tol", "opt_tol", "max_iterations"});
    c.options.solver.feas_tol = s.number_or("feas_tol", c.options.solver.feas_tol);
    c.options.solver.opt_tol = s.number_or("opt_tol", c.options.solver.opt_tol);
    if (s.has("max_iterations")) c.options.solver.max_iterations = s.integer("max_iterations");
  }
  if (root.has("expansion")) {
    const auto e = root.object("expansion");
    e.allow_only({"shed_penalty", "shed_mode", "investment_budget", "capacity_budget_mw"});
    c.options.shed_penalty = e.number_or("shed_penalty", c.options.shed_penalty);
    if (e.has("shed_mode")) c.options.shed_mode = parse_shed_mode(e.string("shed_mode"));
    c.options.investment_budget = e.optional_number("investment_budget");
    c.options.capacity_budget_mw = e.optional_number("capacity_budget_mw");
  }
  if (root.has("point")) read_point(root.object("point"), c.point);
  if (root.has("sweep")) {
    const auto s = root.object("sweep");
    s.allow_only({"kind", "line_factors", "windows", "geo_portions", "budget_scales", "growth_ratios"});
    if (s.has("kind")) c.sweep_kind = s.string("kind");
    if (c.sweep_kind != "flexibility" && c.sweep_kind != "penetration")
      throw ParseError("config.sweep.kind: expected 'flexibility' or 'penetration'");
    if (s.has("line_factors")) c.grid.line_factors = s.numbers("line_factors");
    if (s.has("windows")) c.grid.windows = ints(s, "windows");
    if (s.has("geo_portions")) c.grid.geo_portions = s.numbers("geo_portions");
    if (s.has("budget_scales")) c.grid.budget_scales = s.numbers("budget_scales");
    if (s.has("growth_ratios")) c.growth_ratios = s.numbers("growth_ratios");
  }
  if (root.has("search")) {
    const auto s = root.object("search");
    s.allow_only({"budget_kind", "budget", "knob", "tol", "max_window"});
    if (s.has("budget_kind")) c.search.budget_kind = parse_budget_kind(s.string("budget_kind"));
    c.search.budget = s.number_or("budget", 0.0);
    if (s.has("knob")) c.search.knob = parse_knob(s.string("knob"));
    c.search.tol = s.number_or("tol", c.search.tol);
    if (s.has("max_window")) c.search.max_window = static_cast<int>(s.integer("max_window"));
  }
  if (root.has("generate")) {
    const auto g = root.object("generate");
    g.allow_only({"hours", "seed", "shape", "peak_hour", "trough_ratio", "noise", "peak_mw"});
    auto& p = c.generate;
    if (g.has("hours")) p.hours = static_cast<int>(g.integer("hours"));
    if (g.has("seed")) p.seed = static_cast<std::uint64_t>(g.integer("seed"));
    if (g.has("shape")) p.shape = parse_profile_shape(g.string("shape"));
    p.peak_hour = g.number_or("peak_hour", p.peak_hour);
    p.trough_ratio = g.number_or("trough_ratio", p.trough_ratio);
    p.noise = g.number_or("noise", p.noise);
    if (g.has("peak_mw")) {
      const auto sub = g.object("peak_mw");
      for (const auto& [k, _] : sub.raw().items()) p.peak_mw[k] = sub.number(k);
    }
  }
  return c;
}

json to_json(const RunConfig& c) {
  auto opt_str = [](const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); };
  auto opt_num = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json peaks = json::object();
  for (const auto& [k, v] : c.generate.peak_mw) peaks[k] = v;
  return json{
      {"case", opt_str(c.case_path)},
      {"profiles", opt_str(c.profiles_path)},
      {"flex", opt_str(c.flex_path)},
      {"workers", c.workers},
      {"solver",
       {{"feas_tol", c.options.solver.feas_tol},
        {"opt_tol", c.options.solver.opt_tol},
        {"max_iterations", c.options.solver.max_iterations}}},
      {"expansion",
       {{"shed_penalty", c.options.shed_penalty},
        {"shed_mode", std::string(to_string(c.options.shed_mode))},
        {"investment_budget", opt_num(c.options.investment_budget)},
        {"capacity_budget_mw", opt_num(c.options.capacity_budget_mw)}}},
      {"point",
       {{"line_factor", c.point.line_factor},
        {"window_h", opt_num(c.point.window_h)},
        {"geo_portion", opt_num(c.point.geo_portion)},
        {"growth_ratio", opt_num(c.point.growth_ratio)},
        {"budget_scale", c.point.budget_scale}}},
      {"sweep",
       {{"kind", c.sweep_kind},
        {"line_factors", c.grid.line_factors},
        {"windows", c.grid.windows},
        {"geo_portions", c.grid.geo_portions},
        {"budget_scales", c.grid.budget_scales},
        {"growth_ratios", c.growth_ratios}}},
      {"search",
       {{"budget_kind", c.search.budget_kind == BudgetKind::Investment ? "investment" : "capacity"},
        {"budget", c.search.budget},
        {"knob", std::string(to_string(c.search.knob))},
        {"tol", c.search.tol},
        {"max_window", opt_num(c.search.max_window)}}},
      {"generate",
       {{"hours", c.generate.hours},
        {"seed", c.generate.seed},
        {"shape", c.generate.shape == ProfileShape::Flat ? "flat" : "sinusoidal"},
        {"peak_hour", c.generate.peak_hour},
        {"trough_ratio", c.generate.trough_ratio},
        {"noise", c.generate.noise},
        {"peak_mw", peaks}}},
  };
}

}  // namespace dcflex::cli
