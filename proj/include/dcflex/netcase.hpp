#pragma once

#include <Eigen/SparseCore>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcflex/error.hpp"

namespace dcflex {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct Bus {
  std::string id;
  std::size_t index = 0;
  bool is_reference = false;
};

/// Transmission line. Susceptance is per-unit on the network base; capacity
/// is the thermal rating in MW, applied symmetrically to both directions.
struct Line {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double susceptance = 0.0;
  double capacity_mw = 0.0;
  // Resolved by index_network().
  std::size_t from_index = 0;
  std::size_t to_index = 0;
};

struct Generator {
  std::string id;
  std::string bus;
  double existing_mw = 0.0;
  double max_addition_mw = 0.0;
  double marginal_cost = 0.0;    // $/MWh
  double investment_cost = 0.0;  // $/MW over the studied horizon
  std::size_t bus_index = 0;
};

/// Physical system: buses, lines and generators. Immutable once built by
/// parse_case() or make_network(); share freely across threads.
struct Network {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;

  std::size_t bus_count() const { return buses.size(); }
  std::size_t line_count() const { return lines.size(); }
  std::size_t generator_count() const { return generators.size(); }

  std::optional<std::size_t> find_bus(std::string_view id) const;
  std::optional<std::size_t> find_line(std::string_view id) const;
  std::optional<std::size_t> find_generator(std::string_view id) const;
  std::size_t reference_index() const;
};

namespace diag {
inline constexpr const char* kNoBuses = "NO_BUSES";
inline constexpr const char* kNoLines = "NO_LINES";
inline constexpr const char* kNoGenerators = "NO_GENERATORS";
inline constexpr const char* kDuplicateId = "DUPLICATE_ID";
inline constexpr const char* kDanglingReference = "DANGLING_REFERENCE";
inline constexpr const char* kSelfLoop = "SELF_LOOP";
inline constexpr const char* kMultipleReference = "MULTIPLE_REFERENCE";
inline constexpr const char* kNoReference = "NO_REFERENCE";
inline constexpr const char* kDefaultReference = "DEFAULT_REFERENCE";
inline constexpr const char* kDisconnected = "DISCONNECTED";
inline constexpr const char* kBadSusceptance = "NON_POSITIVE_SUSCEPTANCE";
inline constexpr const char* kBadCapacity = "NON_POSITIVE_CAPACITY";
inline constexpr const char* kBadGenerator = "INVALID_GENERATOR";
inline constexpr const char* kBadBaseMva = "INVALID_BASE_MVA";
inline constexpr const char* kBadIndex = "INVALID_INDEX";
}  // namespace diag

/// Checks every Network invariant. Returns one diagnostic per violation;
/// an empty list means the network is usable by the rest of the toolkit.
std::vector<Diagnostic> validate(const Network& network);

/// Assigns bus ordinals and resolves line/generator bus references. Ids that
/// do not resolve are left at index 0 and reported by validate().
void index_network(Network& network);

/// Indexes, defaults the reference bus (first bus, reported through
/// `warnings`) and validates. Throws ValidationError.
Network make_network(Network network, std::vector<Diagnostic>* warnings = nullptr);

/// Parses a JSON case document. Throws ParseError on syntax or schema errors
/// and ValidationError when the document describes an invalid network.
Network parse_case(std::string_view text, std::vector<Diagnostic>* warnings = nullptr);
Network load_case_file(const std::string& path, std::vector<Diagnostic>* warnings = nullptr);

/// Serializes to the case document schema; parse_case(render_case(n)) == n.
std::string render_case(const Network& network);

/// Bus-by-line incidence: +1 at the from bus, -1 at the to bus.
SparseMatrix incidence_matrix(const Network& network);

/// DC flow operator diag(b) K^T in per-unit. Throws on non-positive
/// susceptance.
SparseMatrix dc_flow_operator(const Network& network);

/// Copy of `network` with every line rating multiplied by `factor` (> 0).
Network scale_line_capacities(const Network& network, double factor);

bool structurally_equal(const Network& a, const Network& b);

}  // namespace dcflex
