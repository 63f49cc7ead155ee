#include <doctest.h>

#include <cmath>

#include "dcflex/error.hpp"
#include "dcflex/lp/model.hpp"

using namespace dcflex;
using namespace dcflex::lp;

TEST_CASE("rows merge repeated variables and drop zeros") {
  LinearModel m;
  const auto x = m.add_variable("x", 0, 10, 1);
  const auto y = m.add_variable("y", -kInfinity, kInfinity);
  const auto r = m.add_constraint("r", {{y, 2}, {x, 1}, {x, 2}, {y, -2}}, Relation::LessEqual, 4);
  const auto& row = m.constraint(r);
  REQUIRE(row.terms.size() == 1);
  CHECK(row.terms[0].var == x.index);
  CHECK(row.terms[0].coef == 3);
  CHECK(m.nonzero_count() == 1);
  CHECK(m.row_activity(0, {2, 7}) == 6);
}

TEST_CASE("lookup by name") {
  LinearModel m;
  const auto x = m.add_variable("x[0,g1]", 0, 1);
  m.add_constraint("cap", {{x, 1}}, Relation::LessEqual, 1);
  CHECK(m.find_variable("x[0,g1]") == x);
  CHECK_FALSE(m.find_variable("x"));
  CHECK(m.find_constraint("cap")->index == 0);
}

TEST_CASE("objective handling") {
  LinearModel m;
  const auto x = m.add_variable("x", 0, 1, 2);
  const auto y = m.add_variable("y", 0, 1, 3);
  CHECK(m.objective_value({1, 1}) == 5);
  m.set_objective({{x, 1}, {x, 1}}, 4);
  CHECK(m.costs()[0] == 2);
  CHECK(m.costs()[1] == 0);
  CHECK(m.objective_value({1, 1}) == 6);
  m.set_cost(y, -1);
  CHECK(m.objective_value({0, 1}) == 3);
  m.set_bounds(x, 0.5, 0.5);
  CHECK(m.variable(x).lower == 0.5);
}

TEST_CASE("invalid input is rejected") {
  LinearModel m;
  const auto x = m.add_variable("x", 0, 1);
  CHECK_THROWS_AS(m.add_variable("x", 0, 1), Error);
  CHECK_THROWS_AS(m.add_variable("z", 2, 1), Error);
  CHECK_THROWS_AS(m.add_variable("z", kInfinity, kInfinity), Error);
  CHECK_THROWS_AS(m.add_variable("z", 0, 1, std::nan("")), Error);
  CHECK_THROWS_AS(m.add_constraint("r", {{VarId{5}, 1}}, Relation::Equal, 0), Error);
  CHECK_THROWS_AS(m.add_constraint("r", {{x, 1}}, Relation::Equal, kInfinity), Error);
  using Row = std::vector<std::pair<VarId, double>>;
  CHECK_THROWS_AS(m.add_constraint("r", Row{{x, std::nan("")}}, Relation::Equal, 0), Error);
  m.add_constraint("r", {{x, 1}}, Relation::Equal, 0);
  CHECK_THROWS_AS(m.add_constraint("r", {{x, 1}}, Relation::Equal, 0), Error);
  CHECK_THROWS_AS(m.set_bounds(x, 1, 0), Error);
  CHECK_THROWS_AS(m.variable(VarId{3}), Error);
  CHECK_THROWS_AS(m.set_rhs(RowId{9}, 1), Error);
}

TEST_CASE("review listing names every row") {
  LinearModel m;
  const auto x = m.add_variable("x", 0, 1, 1);
  const auto y = m.add_variable("y", 0, kInfinity);
  m.add_constraint("first", {{x, 1}, {y, -2}}, Relation::GreaterEqual, 1);
  m.add_constraint("second", {{y, 1}}, Relation::Equal, 3);
  const auto text = format_lp_review(m);
  CHECK(text.find("first") != std::string::npos);
  CHECK(text.find("second") != std::string::npos);
  CHECK(text.find(">=") != std::string::npos);
}
