#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dcflex/expansion.hpp"
#include "dcflex/json_util.hpp"

namespace dcflex {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", std::abs(v) < 1e-9 ? 0.0 : v);
  return buf;
}

template <class Ids>
std::string matrix_csv(const Eigen::MatrixXd& m, const Ids& ids) {
  std::string out = "hour";
  for (const auto& id : ids) out += "," + id;
  out += "\n";
  for (Eigen::Index t = 0; t < m.rows(); ++t) {
    out += std::to_string(t);
    for (Eigen::Index k = 0; k < m.cols(); ++k) out += "," + num(m(t, k));
    out += "\n";
  }
  return out;
}

template <class Items>
std::vector<std::string> ids_of(const Items& items) {
  std::vector<std::string> out;
  for (const auto& it : items) out.push_back(it.id);
  return out;
}

}  // namespace

std::string result_json(const ExpansionResult& result, const Network& network, const LoadSet& loads) {
  json doc;
  doc["status"] = std::string(lp::to_string(result.status));
  doc["requires_shed"] = result.requires_shed;
  if (result.optimal()) {
    json added = json::object();
    for (std::size_t g = 0; g < network.generators.size(); ++g)
      added[network.generators[g].id] = result.added_capacity[g];
    doc["added_capacity_mw"] = added;
    doc["added_capacity_total_mw"] = result.added_capacity_total();
    doc["cost"] = {{"total", result.total_cost},       {"investment", result.investment_cost},
                   {"operating", result.operating_cost}, {"delay", result.delay_cost},
                   {"shift", result.shift_cost},         {"shed", result.shed_cost}};
    const auto rep = congestion_report(result, network);
    doc["congestion"] = {{"binding_line_hours", rep.binding_line_hours},
                         {"binding_lines", rep.binding_lines},
                         {"peak_generators", rep.peak_generators},
                         {"max_backlog_mw", rep.max_backlog_mw},
                         {"total_shift_mw", rep.total_shift_mw}};
    doc["shed_mwh"] = result.shed.sum();
    doc["balance_residual_mw"] = nodal_balance_residual(result, network, loads);
  }
  doc["hours"] = loads.horizon;
  doc["simplex_iterations"] = result.iterations;
  return doc.dump(2) + "\n";
}

void write_result_bundle(const std::string& dir, const ExpansionResult& result, const Network& network,
                         const LoadSet& loads) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);
  write_text_file((root / "result.json").string(), result_json(result, network, loads));
  if (!result.optimal()) return;
  const auto buses = ids_of(network.buses);
  const auto classes = ids_of(loads.deferrable);
  write_text_file((root / "dispatch.csv").string(), matrix_csv(result.dispatch, ids_of(network.generators)));
  write_text_file((root / "flows.csv").string(), matrix_csv(result.flows, ids_of(network.lines)));
  write_text_file((root / "angles.csv").string(), matrix_csv(result.angles, buses));
  write_text_file((root / "shifts.csv").string(), matrix_csv(result.shifts, buses));
  write_text_file((root / "shed.csv").string(), matrix_csv(result.shed, buses));
  write_text_file((root / "served.csv").string(), matrix_csv(result.served, classes));
  write_text_file((root / "backlog.csv").string(), matrix_csv(result.backlog, classes));
}

}  // namespace dcflex
