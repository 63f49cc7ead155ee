#include "dcflex/netcase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dcflex/json_util.hpp"

namespace dcflex {

namespace {

template <typename Range, typename Key>
std::optional<std::size_t> find_by_id(const Range& items, Key id) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].id == id) return i;
  return std::nullopt;
}

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

// Union-find over bus ordinals.
struct Components {
  std::vector<std::size_t> parent;
  explicit Components(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t root(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void join(std::size_t a, std::size_t b) { parent[root(a)] = root(b); }
};

}  // namespace

std::optional<std::size_t> Network::find_bus(std::string_view id) const {
  return find_by_id(buses, id);
}

std::optional<std::size_t> Network::find_line(std::string_view id) const {
  return find_by_id(lines, id);
}

std::optional<std::size_t> Network::find_generator(std::string_view id) const {
  return find_by_id(generators, id);
}

std::size_t Network::reference_index() const {
  for (const auto& bus : buses)
    if (bus.is_reference) return bus.index;
  return 0;
}

void index_network(Network& network) {
  std::unordered_map<std::string, std::size_t> ordinal;
  for (std::size_t i = 0; i < network.buses.size(); ++i) {
    network.buses[i].index = i;
    ordinal.emplace(network.buses[i].id, i);
  }
  auto lookup = [&](const std::string& id) {
    auto it = ordinal.find(id);
    return it == ordinal.end() ? std::size_t{0} : it->second;
  };
  for (auto& line : network.lines) {
    line.from_index = lookup(line.from_bus);
    line.to_index = lookup(line.to_bus);
  }
  for (auto& gen : network.generators) gen.bus_index = lookup(gen.bus);
}

std::vector<Diagnostic> validate(const Network& network) {
  std::vector<Diagnostic> out;
  auto report = [&](const char* code, std::string subject, std::string message) {
    out.push_back({code, std::move(subject), std::move(message)});
  };

  if (!(std::isfinite(network.base_mva) && network.base_mva > 0.0))
    report(diag::kBadBaseMva, "", "base_mva must be positive and finite");
  if (network.buses.empty()) report(diag::kNoBuses, "", "network has no buses");
  if (network.lines.empty()) report(diag::kNoLines, "", "network has no lines");
  if (network.generators.empty())
    report(diag::kNoGenerators, "", "network has no generators");

  auto check_unique = [&](const auto& items, const char* kind) {
    std::unordered_set<std::string> seen;
    for (const auto& item : items)
      if (!seen.insert(item.id).second)
        report(diag::kDuplicateId, item.id, std::string("duplicate ") + kind + " id '" + item.id + "'");
  };
  check_unique(network.buses, "bus");
  check_unique(network.lines, "line");
  check_unique(network.generators, "generator");

  std::unordered_map<std::string, std::size_t> ordinal;
  std::size_t reference_count = 0;
  for (std::size_t i = 0; i < network.buses.size(); ++i) {
    const auto& bus = network.buses[i];
    ordinal.emplace(bus.id, i);
    if (bus.index != i)
      report(diag::kBadIndex, bus.id, "bus index " + std::to_string(bus.index) +
                                          " does not match position " + std::to_string(i));
    if (bus.is_reference) ++reference_count;
  }
  if (!network.buses.empty()) {
    if (reference_count > 1)
      report(diag::kMultipleReference, "", std::to_string(reference_count) +
                                               " buses are marked as reference");
    else if (reference_count == 0)
      report(diag::kNoReference, "", "no reference bus is marked");
  }

  auto resolves = [&](const std::string& id, std::size_t index) {
    auto it = ordinal.find(id);
    return it != ordinal.end() && it->second == index;
  };

  bool endpoints_ok = true;
  for (const auto& line : network.lines) {
    for (const auto* end : {&line.from_bus, &line.to_bus}) {
      if (!ordinal.count(*end)) {
        endpoints_ok = false;
        report(diag::kDanglingReference, line.id,
               "line '" + line.id + "' references unknown bus '" + *end + "'");
      }
    }
    if (ordinal.count(line.from_bus) && ordinal.count(line.to_bus) &&
        (!resolves(line.from_bus, line.from_index) || !resolves(line.to_bus, line.to_index))) {
      endpoints_ok = false;
      report(diag::kBadIndex, line.id, "line '" + line.id + "' has stale endpoint indices");
    }
    if (line.from_bus == line.to_bus)
      report(diag::kSelfLoop, line.id, "line '" + line.id + "' connects bus '" + line.from_bus + "' to itself");
    if (!(std::isfinite(line.susceptance) && line.susceptance > 0.0))
      report(diag::kBadSusceptance, line.id, "line '" + line.id + "' susceptance must be positive");
    if (!(std::isfinite(line.capacity_mw) && line.capacity_mw > 0.0))
      report(diag::kBadCapacity, line.id, "line '" + line.id + "' capacity must be positive");
  }

  for (const auto& gen : network.generators) {
    if (!ordinal.count(gen.bus))
      report(diag::kDanglingReference, gen.id,
             "generator '" + gen.id + "' references unknown bus '" + gen.bus + "'");
    else if (!resolves(gen.bus, gen.bus_index))
      report(diag::kBadIndex, gen.id, "generator '" + gen.id + "' has a stale bus index");
    if (!finite_non_negative(gen.existing_mw) || !finite_non_negative(gen.max_addition_mw) ||
        !finite_non_negative(gen.marginal_cost) || !finite_non_negative(gen.investment_cost))
      report(diag::kBadGenerator, gen.id,
             "generator '" + gen.id + "' capacities and costs must be finite and non-negative");
  }

  if (endpoints_ok && !network.buses.empty()) {
    Components comp(network.buses.size());
    for (const auto& line : network.lines) comp.join(line.from_index, line.to_index);
    const std::size_t root = comp.root(network.reference_index());
    for (const auto& bus : network.buses)
      if (comp.root(bus.index) != root)
        report(diag::kDisconnected, bus.id, "bus '" + bus.id + "' is not connected to the reference bus");
  }
  return out;
}

Network make_network(Network network, std::vector<Diagnostic>* warnings) {
  index_network(network);
  const bool any_reference = std::any_of(network.buses.begin(), network.buses.end(),
                                         [](const Bus& b) { return b.is_reference; });
  if (!any_reference && !network.buses.empty()) {
    network.buses.front().is_reference = true;
    if (warnings)
      warnings->push_back({diag::kDefaultReference, network.buses.front().id,
                           "no reference bus given; using first bus '" +
                               network.buses.front().id + "'"});
  }
  auto problems = validate(network);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return network;
}

Network parse_case(std::string_view text, std::vector<Diagnostic>* warnings) {
  const json doc = parse_json(text);
  const JsonObject root(doc, "case");
  root.allow_only({"base_mva", "buses", "lines", "generators", "name", "description"});

  Network net;
  net.base_mva = root.number_or("base_mva", 100.0);

  for (const auto& item : root.array("buses")) {
    JsonObject obj(item.value, item.path);
    obj.allow_only({"id", "reference"});
    Bus bus;
    bus.id = obj.string("id");
    bus.is_reference = obj.boolean_or("reference", false);
    net.buses.push_back(std::move(bus));
  }
  for (const auto& item : root.array("lines")) {
    JsonObject obj(item.value, item.path);
    obj.allow_only({"id", "from", "to", "susceptance_pu", "capacity_mw"});
    Line line;
    line.id = obj.string("id");
    line.from_bus = obj.string("from");
    line.to_bus = obj.string("to");
    line.susceptance = obj.number("susceptance_pu");
    line.capacity_mw = obj.number("capacity_mw");
    net.lines.push_back(std::move(line));
  }
  for (const auto& item : root.array("generators")) {
    JsonObject obj(item.value, item.path);
    obj.allow_only({"id", "bus", "existing_mw", "max_addition_mw", "marginal_cost_per_mwh",
                    "investment_cost_per_mw"});
    Generator gen;
    gen.id = obj.string("id");
    gen.bus = obj.string("bus");
    gen.existing_mw = obj.number("existing_mw");
    gen.max_addition_mw = obj.number("max_addition_mw");
    gen.marginal_cost = obj.number("marginal_cost_per_mwh");
    gen.investment_cost = obj.number("investment_cost_per_mw");
    net.generators.push_back(std::move(gen));
  }
  return make_network(std::move(net), warnings);
}

Network load_case_file(const std::string& path, std::vector<Diagnostic>* warnings) {
  return parse_case(read_text_file(path), warnings);
}

std::string render_case(const Network& network) {
  json doc;
  doc["base_mva"] = network.base_mva;
  doc["buses"] = json::array();
  for (const auto& bus : network.buses) {
    json b{{"id", bus.id}};
    if (bus.is_reference) b["reference"] = true;
    doc["buses"].push_back(std::move(b));
  }
  doc["lines"] = json::array();
  for (const auto& line : network.lines)
    doc["lines"].push_back({{"id", line.id},
                            {"from", line.from_bus},
                            {"to", line.to_bus},
                            {"susceptance_pu", line.susceptance},
                            {"capacity_mw", line.capacity_mw}});
  doc["generators"] = json::array();
  for (const auto& gen : network.generators)
    doc["generators"].push_back({{"id", gen.id},
                                 {"bus", gen.bus},
                                 {"existing_mw", gen.existing_mw},
                                 {"max_addition_mw", gen.max_addition_mw},
                                 {"marginal_cost_per_mwh", gen.marginal_cost},
                                 {"investment_cost_per_mw", gen.investment_cost}});
  return doc.dump(2) + "\n";
}

SparseMatrix incidence_matrix(const Network& network) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * network.line_count());
  for (std::size_t l = 0; l < network.line_count(); ++l) {
    const auto& line = network.lines[l];
    const auto col = static_cast<int>(l);
    entries.emplace_back(static_cast<int>(line.from_index), col, 1.0);
    entries.emplace_back(static_cast<int>(line.to_index), col, -1.0);
  }
  SparseMatrix k(static_cast<int>(network.bus_count()), static_cast<int>(network.line_count()));
  k.setFromTriplets(entries.begin(), entries.end());
  return k;
}

SparseMatrix dc_flow_operator(const Network& network) {
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(2 * network.line_count());
  for (std::size_t l = 0; l < network.line_count(); ++l) {
    const auto& line = network.lines[l];
    if (!(std::isfinite(line.susceptance) && line.susceptance > 0.0))
      throw ValidationError({{diag::kBadSusceptance, line.id,
                              "line '" + line.id + "' susceptance must be positive"}});
    const auto row = static_cast<int>(l);
    entries.emplace_back(row, static_cast<int>(line.from_index), line.susceptance);
    entries.emplace_back(row, static_cast<int>(line.to_index), -line.susceptance);
  }
  SparseMatrix m(static_cast<int>(network.line_count()), static_cast<int>(network.bus_count()));
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

Network scale_line_capacities(const Network& network, double factor) {
  if (!(std::isfinite(factor) && factor > 0.0))
    throw Error("line capacity factor must be positive, got " + std::to_string(factor));
  Network scaled = network;
  for (auto& line : scaled.lines) line.capacity_mw *= factor;
  return scaled;
}

bool structurally_equal(const Network& a, const Network& b) {
  if (a.base_mva != b.base_mva || a.buses.size() != b.buses.size() ||
      a.lines.size() != b.lines.size() || a.generators.size() != b.generators.size())
    return false;
  for (std::size_t i = 0; i < a.buses.size(); ++i) {
    const auto &x = a.buses[i], &y = b.buses[i];
    if (x.id != y.id || x.index != y.index || x.is_reference != y.is_reference) return false;
  }
  for (std::size_t i = 0; i < a.lines.size(); ++i) {
    const auto &x = a.lines[i], &y = b.lines[i];
    if (x.id != y.id || x.from_bus != y.from_bus || x.to_bus != y.to_bus ||
        x.susceptance != y.susceptance || x.capacity_mw != y.capacity_mw ||
        x.from_index != y.from_index || x.to_index != y.to_index)
      return false;
  }
  for (std::size_t i = 0; i < a.generators.size(); ++i) {
    const auto &x = a.generators[i], &y = b.generators[i];
    if (x.id != y.id || x.bus != y.bus || x.existing_mw != y.existing_mw ||
        x.max_addition_mw != y.max_addition_mw || x.marginal_cost != y.marginal_cost ||
        x.investment_cost != y.investment_cost || x.bus_index != y.bus_index)
      return false;
  }
  return true;
}

}  // namespace dcflex
