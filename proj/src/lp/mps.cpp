#include "dcflex/lp/mps.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace dcflex::lp {

namespace {

// Shortest %g rendering that fits the 12-character numeric field.
std::string mps_number(double v) {
  char buf[40];
  for (int precision = 12; precision >= 1; --precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::string_view(buf).size() <= 12) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

// Fields start at columns 2, 5, 15, 25, 40 and 50 (1-based).
std::string line(const std::string& code, const std::string& name1, const std::string& name2 = "",
                 const std::string& value = "") {
  std::string out = " " + pad(code, 2) + " " + pad(name1, 8);
  if (!name2.empty() || !value.empty()) {
    out += "  " + pad(name2, 8) + "  ";
    std::string v = value;
    if (v.size() < 12) v.insert(0, 12 - v.size(), ' ');
    out += v;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out + "\n";
}

class NameTable {
 public:
  explicit NameTable(char prefix) : prefix_(prefix) { used_.insert("OBJ"); used_.insert("RHS"); used_.insert("BND"); }

  std::string assign(const std::string& original, std::size_t index) {
    if (original.size() <= 8 && !original.empty() &&
        original.find_first_of(" \t$*") == std::string::npos &&
        used_.insert(original).second)
      return original;
    for (std::size_t k = index;; k += 10000000) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%c%07zu", prefix_, k % 10000000);
      if (used_.insert(buf).second) return buf;
    }
  }

  std::unordered_set<std::string>& used() { return used_; }

 private:
  char prefix_;
  std::unordered_set<std::string> used_;
};

}  // namespace

std::string MpsExport::name_map_csv(const LinearModel& model) const {
  std::string out = "kind,mps_name,original_name\n";
  for (std::size_t j = 0; j < column_names.size(); ++j)
    out += "column," + column_names[j] + "," + model.variable(j).name + "\n";
  for (std::size_t i = 0; i < row_names.size(); ++i)
    out += "row," + row_names[i] + "," + model.constraint(i).name + "\n";
  return out;
}

MpsExport export_mps(const LinearModel& model, const std::string& problem_name) {
  MpsExport out;
  NameTable rows('R');
  for (std::size_t i = 0; i < model.constraint_count(); ++i)
    out.row_names.push_back(rows.assign(model.constraint(i).name, i));
  NameTable cols('C');
  for (const auto& r : out.row_names) cols.used().insert(r);
  for (std::size_t j = 0; j < model.variable_count(); ++j)
    out.column_names.push_back(cols.assign(model.variable(j).name, j));

  std::vector<std::vector<std::pair<std::size_t, double>>> by_col(model.variable_count());
  for (std::size_t i = 0; i < model.constraint_count(); ++i)
    for (const auto& t : model.constraint(i).terms)
      by_col[static_cast<std::size_t>(t.var)].emplace_back(i, t.coef);

  std::string& s = out.text;
  s += "NAME          " + problem_name.substr(0, 8) + "\n";
  s += "ROWS\n";
  s += line("N", "OBJ");
  for (std::size_t i = 0; i < model.constraint_count(); ++i) {
    const char* code = "E";
    switch (model.constraint(i).relation) {
      case Relation::LessEqual: code = "L"; break;
      case Relation::GreaterEqual: code = "G"; break;
      case Relation::Equal: code = "E"; break;
    }
    s += line(code, out.row_names[i]);
  }

  s += "COLUMNS\n";
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    const double c = model.costs()[j];
    if (c != 0.0 || by_col[j].empty()) s += line("", out.column_names[j], "OBJ", mps_number(c));
    for (const auto& [i, a] : by_col[j]) s += line("", out.column_names[j], out.row_names[i], mps_number(a));
  }

  s += "RHS\n";
  if (model.objective_constant() != 0.0)
    s += line("", "RHS", "OBJ", mps_number(-model.objective_constant()));
  for (std::size_t i = 0; i < model.constraint_count(); ++i)
    if (model.constraint(i).rhs != 0.0)
      s += line("", "RHS", out.row_names[i], mps_number(model.constraint(i).rhs));

  s += "BOUNDS\n";
  for (std::size_t j = 0; j < model.variable_count(); ++j) {
    const auto& v = model.variable(j);
    const auto& name = out.column_names[j];
    const bool lo_inf = std::isinf(v.lower), up_inf = std::isinf(v.upper);
    if (lo_inf && up_inf) {
      s += line("FR", "BND", name);
    } else if (!lo_inf && !up_inf && v.lower == v.upper) {
      s += line("FX", "BND", name, mps_number(v.lower));
    } else {
      if (lo_inf) s += line("MI", "BND", name);
      else if (v.lower != 0.0) s += line("LO", "BND", name, mps_number(v.lower));
      if (!up_inf) s += line("UP", "BND", name, mps_number(v.upper));
    }
  }
  s += "ENDATA\n";
  return out;
}

}  // namespace dcflex::lp
