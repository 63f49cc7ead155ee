#pragma once

#include <string>

#include "dcflex/flex_spec.hpp"
#include "dcflex/flexload.hpp"
#include "dcflex/netcase.hpp"

namespace fixtures {

inline std::string path(const std::string& rel) { return std::string(DCFLEX_SOURCE_DIR) + "/" + rel; }

inline dcflex::Network toy2() { return dcflex::load_case_file(path("cases/toy2.json")); }

inline dcflex::LoadSet toy2_firm(double load_b2) {
  dcflex::Profile base(1, 2);
  base << 0.0, load_b2;
  return dcflex::LoadSet::firm(base);
}

}  // namespace fixtures
