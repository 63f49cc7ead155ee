#pragma once

#include <string>
#include <vector>

#include "dcflex/lp/model.hpp"

namespace dcflex::lp {

struct MpsExport {
  std::string text;
  /// Original names indexed like the model; entries are 8-character MPS names.
  std::vector<std::string> column_names;
  std::vector<std::string> row_names;

  /// Sidecar CSV: kind,mps_name,original_name
  std::string name_map_csv(const LinearModel& model) const;
};

/// Fixed-format MPS. Names longer than 8 characters, containing blanks, or
/// colliding after truncation are replaced by generated C#######/R####### names.
MpsExport export_mps(const LinearModel& model, const std::string& problem_name = "DCFLEX");

}  // namespace dcflex::lp
