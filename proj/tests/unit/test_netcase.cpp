#include <doctest.h>

#include <algorithm>
#include <random>

#include "dcflex/netcase.hpp"
#include "fixtures.hpp"

using namespace dcflex;

namespace {

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::vector<Diagnostic> diagnostics_of(std::string_view text) {
  try {
    parse_case(text);
  } catch (const ValidationError& e) {
    return e.diagnostics();
  }
  return {};
}

const char* kTriangle = R"({
  "buses": [{"id": "a"}, {"id": "b", "reference": true}, {"id": "c"}],
  "lines": [
    {"id": "ab", "from": "a", "to": "b", "susceptance_pu": 2, "capacity_mw": 5},
    {"id": "bc", "from": "b", "to": "c", "susceptance_pu": 4, "capacity_mw": 5}
  ],
  "generators": [{"id": "g", "bus": "c", "existing_mw": 1, "max_addition_mw": 0,
                  "marginal_cost_per_mwh": 3, "investment_cost_per_mw": 1}]
})";

}  // namespace

TEST_CASE("toy2 parses") {
  const auto net = fixtures::toy2();
  CHECK(net.bus_count() == 2);
  CHECK(net.reference_index() == 0);
  CHECK(net.lines[0].to_index == 1);
  CHECK(net.generators[1].bus_index == 1);
  CHECK(net.find_generator("g2") == 1);
  CHECK_FALSE(net.find_bus("b9"));
  CHECK(net.base_mva == 100.0);
}

TEST_CASE("ieee14 fixture is a connected 14-bus, 20-line system") {
  const auto net = load_case_file(fixtures::path("cases/ieee14.json"));
  CHECK(net.bus_count() == 14);
  CHECK(net.line_count() == 20);
  CHECK(net.generator_count() == 5);
  CHECK(validate(net).empty());
}

TEST_CASE("incidence and flow operator") {
  const auto net = parse_case(kTriangle);
  const Eigen::MatrixXd k = incidence_matrix(net);
  CHECK(k.rows() == 3);
  CHECK(k.cols() == 2);
  CHECK(k(0, 0) == 1);
  CHECK(k(1, 0) == -1);
  CHECK(k(1, 1) == 1);
  CHECK(k(2, 1) == -1);
  CHECK(k.colwise().sum().cwiseAbs().maxCoeff() == 0.0);

  const Eigen::MatrixXd h = dc_flow_operator(net);
  CHECK(h.rows() == 2);
  CHECK(h(0, 0) == 2);
  CHECK(h(0, 1) == -2);
  CHECK(h(1, 2) == -4);
  // Equal angles carry no flow.
  CHECK((h * Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("render and parse round trip") {
  for (const char* rel : {"cases/toy2.json", "cases/ieee14.json", "cases/ieee14_congested.json"}) {
    const auto net = load_case_file(fixtures::path(rel));
    CHECK(structurally_equal(parse_case(render_case(net)), net));
  }
}

TEST_CASE("scaling line capacities") {
  const auto net = fixtures::toy2();
  CHECK(scale_line_capacities(net, 2.5).lines[0].capacity_mw == doctest::Approx(2.5));
  CHECK_THROWS_AS(scale_line_capacities(net, 0.0), Error);
  CHECK_FALSE(structurally_equal(scale_line_capacities(net, 2.0), net));
}

TEST_CASE("reference bus defaults to the first bus with a warning") {
  std::string text = kTriangle;
  text.replace(text.find(", \"reference\": true"), 19, "");
  std::vector<Diagnostic> warnings;
  const auto net = parse_case(text, &warnings);
  CHECK(net.reference_index() == 0);
  CHECK(has_code(warnings, diag::kDefaultReference));
}

TEST_CASE("invalid networks are reported with codes") {
  auto mutate = [](std::string from, std::string to) {
    std::string text = kTriangle;
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
  };
  CHECK(has_code(diagnostics_of(mutate("\"to\": \"c\"", "\"to\": \"z\"")), diag::kDanglingReference));
  CHECK(has_code(diagnostics_of(mutate("\"to\": \"c\"", "\"to\": \"b\"")), diag::kSelfLoop));
  CHECK(has_code(diagnostics_of(mutate("\"susceptance_pu\": 4", "\"susceptance_pu\": 0")), diag::kBadSusceptance));
  CHECK(has_code(diagnostics_of(mutate("\"capacity_mw\": 5}\n  ]", "\"capacity_mw\": -1}\n  ]")), diag::kBadCapacity));
  CHECK(has_code(diagnostics_of(mutate("{\"id\": \"c\"}", "{\"id\": \"a\"}")), diag::kDuplicateId));
  CHECK(has_code(diagnostics_of(mutate("{\"id\": \"a\"}", "{\"id\": \"a\", \"reference\": true}")),
                 diag::kMultipleReference));
  CHECK(has_code(diagnostics_of(mutate("\"existing_mw\": 1", "\"existing_mw\": -1")), diag::kBadGenerator));
  CHECK(has_code(diagnostics_of(mutate("\"from\": \"b\", \"to\": \"c\"", "\"from\": \"a\", \"to\": \"b\"")),
                 diag::kDisconnected));
}

TEST_CASE("schema errors are parse errors") {
  CHECK_THROWS_AS(parse_case("{"), ParseError);
  CHECK_THROWS_AS(parse_case(R"({"buses": [], "lines": [], "generators": [], "colour": 1})"), ParseError);
  CHECK_THROWS_AS(parse_case(R"({"buses": [{"id": 3}], "lines": [], "generators": []})"), ParseError);
  CHECK_THROWS_AS(load_case_file("/nonexistent/case.json"), Error);
}

TEST_CASE("random connected networks validate and round trip") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    Network net;
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    for (int i = 0; i < n; ++i) net.buses.push_back({"bus" + std::to_string(i), 0, i == 0});
    for (int i = 1; i < n; ++i) {
      const int j = std::uniform_int_distribution<int>(0, i - 1)(rng);
      net.lines.push_back({"L" + std::to_string(i), net.buses[j].id, net.buses[i].id, 1.0 + i, 10.0});
    }
    net.generators.push_back({"G", "bus0", 5, 1, 2, 3});
    const auto built = make_network(net);
    CHECK(validate(built).empty());
    const Eigen::MatrixXd inc = incidence_matrix(built);
    CHECK(inc.cwiseAbs().sum() == doctest::Approx(2.0 * (n - 1)));
    CHECK(structurally_equal(parse_case(render_case(built)), built));
  }
}
