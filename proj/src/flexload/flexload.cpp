#include "dcflex/flexload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dcflex/json_util.hpp"

namespace dcflex {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& s, int line, int column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("invalid number '" + s + "'", line, column);
  }
}

std::string format_mw(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

GeoShiftSpec GeoShiftSpec::none(std::size_t hours, std::size_t buses) {
  const auto t = static_cast<Eigen::Index>(hours), n = static_cast<Eigen::Index>(buses);
  return {Profile::Zero(t, n), Profile::Zero(t, n), Profile::Zero(t, n), std::nullopt};
}

LoadSet LoadSet::firm(Profile base) {
  LoadSet loads;
  loads.horizon = static_cast<int>(base.rows());
  loads.geo = GeoShiftSpec::none(static_cast<std::size_t>(base.rows()),
                                 static_cast<std::size_t>(base.cols()));
  loads.base = std::move(base);
  return loads;
}

Profile LoadSet::nominal_demand(const Network& network) const {
  Profile total = base + geo.baseline;
  for (const auto& cls : deferrable) {
    const auto n = network.find_bus(cls.bus);
    if (!n) throw Error("deferrable class '" + cls.id + "' references unknown bus '" + cls.bus + "'");
    for (int t = 0; t < horizon; ++t) total(t, static_cast<Eigen::Index>(*n)) += cls.arrivals_mw[t];
  }
  return total;
}

Profile load_profiles(std::string_view csv, const Network& network) {
  std::istringstream in{std::string(csv)};
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("profile CSV is empty");
  if (header.front() != "hour")
    throw ParseError("profile CSV header must start with 'hour'", line_no, 1);

  const std::size_t n_bus = network.bus_count();
  std::vector<std::size_t> column_bus;
  std::unordered_set<std::size_t> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const auto bus = network.find_bus(header[c]);
    if (!bus) throw ParseError("profile column '" + header[c] + "' is not a bus of the network", line_no);
    if (!seen.insert(*bus).second)
      throw ParseError("profile column '" + header[c] + "' appears twice", line_no);
    column_bus.push_back(*bus);
  }
  for (const auto& bus : network.buses)
    if (!seen.count(bus.index)) throw ParseError("profile is missing bus '" + bus.id + "'", line_no);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    std::vector<double> values(n_bus, 0.0);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const double v = parse_number(fields[c], line_no, static_cast<int>(c) + 1);
      if (v < 0) throw ParseError("negative load " + fields[c] + " for bus '" + header[c] + "'", line_no,
                                  static_cast<int>(c) + 1);
      values[column_bus[c - 1]] = v;
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("profile CSV has no hourly rows");

  Profile out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_bus));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t n = 0; n < n_bus; ++n)
      out(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n)) = rows[t][n];
  return out;
}

Profile load_profiles_file(const std::string& path, const Network& network) {
  return load_profiles(read_text_file(path), network);
}

std::string render_profiles(const Profile& profile, const Network& network) {
  std::string out = "hour";
  for (const auto& bus : network.buses) out += "," + bus.id;
  out += "\n";
  for (Eigen::Index t = 0; t < profile.rows(); ++t) {
    out += std::to_string(t);
    for (Eigen::Index n = 0; n < profile.cols(); ++n) out += "," + format_mw(profile(t, n));
    out += "\n";
  }
  return out;
}

DcLoadFragments superimpose_dc_load(const Profile& base, const Network& network,
                                    const std::vector<std::string>& dc_buses, double growth_ratio,
                                    DcSplit split) {
  if (!(std::isfinite(growth_ratio) && growth_ratio >= 0.0))
    throw Error("DC growth ratio must be non-negative");
  auto in_unit = [](double f) { return std::isfinite(f) && f >= 0.0 && f <= 1.0; };
  if (!in_unit(split.deferrable) || !in_unit(split.geo) || split.deferrable + split.geo > 1.0 + 1e-12)
    throw Error("DC split fractions must lie in [0,1] and sum to at most 1");
  if (base.cols() != static_cast<Eigen::Index>(network.bus_count()))
    throw Error("base profile has " + std::to_string(base.cols()) + " columns, network has " +
                std::to_string(network.bus_count()) + " buses");

  DcLoadFragments out{base, {}, Profile::Zero(base.rows(), base.cols())};
  const double firm_fraction = std::max(0.0, 1.0 - split.deferrable - split.geo);
  std::unordered_set<std::string> seen;
  for (const auto& id : dc_buses) {
    const auto n = network.find_bus(id);
    if (!n) throw Error("DC bus '" + id + "' is not a bus of the network");
    if (!seen.insert(id).second) throw Error("DC bus '" + id + "' listed twice");
    const auto col = static_cast<Eigen::Index>(*n);
    DeferrableClass cls{"dc_" + id, id, 0, std::vector<double>(static_cast<std::size_t>(base.rows()), 0.0)};
    bool any_deferrable = false;
    for (Eigen::Index t = 0; t < base.rows(); ++t) {
      const double dc = growth_ratio * base(t, col);
      out.base(t, col) += firm_fraction * dc;
      out.geo_baseline(t, col) += split.geo * dc;
      cls.arrivals_mw[static_cast<std::size_t>(t)] = split.deferrable * dc;
      any_deferrable = any_deferrable || cls.arrivals_mw[static_cast<std::size_t>(t)] > 0.0;
    }
    if (any_deferrable) out.deferrable.push_back(std::move(cls));
  }
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NegativeService: return "NEGATIVE_SERVICE";
    case ViolationKind::ServiceExceedsAvailable: return "SERVICE_EXCEEDS_AVAILABLE";
    case ViolationKind::NegativeBacklog: return "NEGATIVE_BACKLOG";
    case ViolationKind::BacklogNotCleared: return "BACKLOG_NOT_CLEARED";
    case ViolationKind::DeadlineMissed: return "DEADLINE_MISSED";
    case ViolationKind::ZeroSum: return "ZERO_SUM";
    case ViolationKind::BelowLowerBound: return "BELOW_LOWER_BOUND";
    case ViolationKind::AboveUpperBound: return "ABOVE_UPPER_BOUND";
    case ViolationKind::BudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "UNKNOWN";
}

std::vector<double> backlog_trajectory(const DeferrableClass& cls, std::span<const double> served) {
  if (served.size() != cls.arrivals_mw.size())
    throw Error("served trajectory has " + std::to_string(served.size()) + " hours, class '" + cls.id +
                "' has " + std::to_string(cls.arrivals_mw.size()));
  std::vector<double> backlog(served.size());
  double b = 0.0;
  for (std::size_t t = 0; t < served.size(); ++t) {
    b += cls.arrivals_mw[t] - served[t];
    backlog[t] = b;
  }
  return backlog;
}

std::vector<LoadViolation> check_backlog_trajectory(const DeferrableClass& cls,
                                                    std::span<const double> served, double tol) {
  const auto backlog = backlog_trajectory(cls, served);
  const int T = static_cast<int>(served.size());
  std::vector<LoadViolation> out;
  double prev = 0.0;
  for (int t = 0; t < T; ++t) {
    const double s = served[t];
    const double available = prev + cls.arrivals_mw[t];
    if (s < -tol) out.push_back({ViolationKind::NegativeService, t, std::nullopt, -s});
    if (s > available + tol) out.push_back({ViolationKind::ServiceExceedsAvailable, t, std::nullopt, s - available});
    if (backlog[t] < -tol) out.push_back({ViolationKind::NegativeBacklog, t, std::nullopt, -backlog[t]});
    prev = backlog[t];
  }
  if (T > 0 && std::fabs(backlog.back()) > tol)
    out.push_back({ViolationKind::BacklogNotCleared, T - 1, std::nullopt, std::fabs(backlog.back())});

  const int W = cls.window_h;
  double served_total = 0.0, due_total = 0.0;
  for (int t = 0; t < T; ++t) {
    served_total += served[t];
    if (t - W >= 0) due_total += cls.arrivals_mw[t - W];
    if (t >= W && served_total < due_total - tol)
      out.push_back({ViolationKind::DeadlineMissed, t, std::nullopt, due_total - served_total});
  }
  return out;
}

std::vector<LoadViolation> check_geo_shift(const GeoShiftSpec& spec, const Profile& delta, double tol) {
  if (delta.rows() != spec.lower.rows() || delta.cols() != spec.lower.cols())
    throw Error("shift matrix is " + std::to_string(delta.rows()) + "x" + std::to_string(delta.cols()) +
                ", expected " + std::to_string(spec.lower.rows()) + "x" + std::to_string(spec.lower.cols()));
  std::vector<LoadViolation> out;
  for (Eigen::Index t = 0; t < delta.rows(); ++t) {
    const int hour = static_cast<int>(t);
    const double sum = delta.row(t).sum();
    if (std::fabs(sum) > tol) out.push_back({ViolationKind::ZeroSum, hour, std::nullopt, std::fabs(sum)});
    for (Eigen::Index n = 0; n < delta.cols(); ++n) {
      const auto bus = static_cast<std::size_t>(n);
      if (delta(t, n) < spec.lower(t, n) - tol)
        out.push_back({ViolationKind::BelowLowerBound, hour, bus, spec.lower(t, n) - delta(t, n)});
      if (delta(t, n) > spec.upper(t, n) + tol)
        out.push_back({ViolationKind::AboveUpperBound, hour, bus, delta(t, n) - spec.upper(t, n)});
    }
    if (spec.budget) {
      const double l1 = delta.row(t).cwiseAbs().sum();
      const double cap = (*spec.budget)[static_cast<std::size_t>(t)];
      if (l1 > cap + tol) out.push_back({ViolationKind::BudgetExceeded, hour, std::nullopt, l1 - cap});
    }
  }
  return out;
}

LoadSet firm_equivalent(const LoadSet& loads) {
  LoadSet firm = loads;
  for (auto& cls : firm.deferrable) cls.window_h = 0;
  firm.geo.lower.setZero();
  firm.geo.upper.setZero();
  firm.geo.budget = std::vector<double>(static_cast<std::size_t>(loads.horizon), 0.0);
  return firm;
}

GeoShiftSpec geo_bounds_from_portion(const Profile& baseline, const std::vector<std::size_t>& geo_buses,
                                     double portion) {
  if (!(std::isfinite(portion) && portion >= 0.0 && portion <= 1.0))
    throw Error("geo portion must lie in [0,1]");
  GeoShiftSpec spec{baseline, Profile::Zero(baseline.rows(), baseline.cols()),
                    Profile::Zero(baseline.rows(), baseline.cols()),
                    std::vector<double>(static_cast<std::size_t>(baseline.rows()), 0.0)};
  for (Eigen::Index t = 0; t < baseline.rows(); ++t) {
    double peak = 0.0, total = 0.0;
    for (auto n : geo_buses) {
      peak = std::max(peak, baseline(t, static_cast<Eigen::Index>(n)));
      total += baseline(t, static_cast<Eigen::Index>(n));
    }
    for (auto n : geo_buses) {
      const auto col = static_cast<Eigen::Index>(n);
      spec.upper(t, col) = portion * peak;
      spec.lower(t, col) = -portion * baseline(t, col);
    }
    (*spec.budget)[static_cast<std::size_t>(t)] = 2.0 * portion * total;
  }
  return spec;
}

std::vector<Diagnostic> validate_loadset(const LoadSet& loads, const Network& network) {
  std::vector<Diagnostic> out;
  auto report = [&](const char* code, std::string subject, std::string message) {
    out.push_back({code, std::move(subject), std::move(message)});
  };
  const Eigen::Index T = loads.horizon;
  const auto N = static_cast<Eigen::Index>(network.bus_count());
  if (T <= 0) {
    report("EMPTY_HORIZON", "", "load horizon must be at least one hour");
    return out;
  }
  auto check_dims = [&](const Profile& p, const char* what) {
    if (p.rows() != T || p.cols() != N) {
      report("DIMENSION_MISMATCH", what,
             std::string(what) + " is " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()) +
                 ", expected " + std::to_string(T) + "x" + std::to_string(N));
      return false;
    }
    return true;
  };
  const bool base_ok = check_dims(loads.base, "base");
  const bool geo_ok = check_dims(loads.geo.baseline, "geo.baseline") & check_dims(loads.geo.lower, "geo.lower") &
                      check_dims(loads.geo.upper, "geo.upper");
  if (base_ok && (loads.base.array() < 0).any()) report("NEGATIVE_LOAD", "base", "base load must be non-negative");
  if (geo_ok) {
    const auto& g = loads.geo;
    if ((g.baseline.array() < 0).any()) report("NEGATIVE_LOAD", "geo.baseline", "geo baseline must be non-negative");
    if ((g.lower.array() > 0).any() || (g.upper.array() < 0).any())
      report("BAD_SHIFT_BOUNDS", "geo", "shift bounds must satisfy lower <= 0 <= upper");
    if (((g.baseline + g.lower).array() < -kLoadTolerance).any())
      report("BAD_SHIFT_BOUNDS", "geo", "baseline + lower must be non-negative");
  }
  if (loads.geo.budget) {
    const auto& b = *loads.geo.budget;
    if (static_cast<Eigen::Index>(b.size()) != T)
      report("DIMENSION_MISMATCH", "geo.budget", "shift budget must have one entry per hour");
    else if (std::any_of(b.begin(), b.end(), [](double v) { return !(v >= 0.0 && std::isfinite(v)); }))
      report("BAD_SHIFT_BUDGET", "geo.budget", "shift budget must be finite and non-negative");
  }
  std::unordered_set<std::string> ids;
  for (const auto& cls : loads.deferrable) {
    if (!ids.insert(cls.id).second) report("DUPLICATE_ID", cls.id, "duplicate deferrable class id '" + cls.id + "'");
    if (!network.find_bus(cls.bus))
      report("DANGLING_REFERENCE", cls.id, "deferrable class '" + cls.id + "' references unknown bus '" + cls.bus + "'");
    if (static_cast<Eigen::Index>(cls.arrivals_mw.size()) != T)
      report("DIMENSION_MISMATCH", cls.id, "class '" + cls.id + "' arrivals must have one entry per hour");
    if (std::any_of(cls.arrivals_mw.begin(), cls.arrivals_mw.end(), [](double v) { return !(v >= 0.0 && std::isfinite(v)); }))
      report("NEGATIVE_LOAD", cls.id, "class '" + cls.id + "' arrivals must be non-negative");
    if (cls.window_h < 0 || cls.window_h >= T)
      report("BAD_WINDOW", cls.id, "class '" + cls.id + "' window must lie in [0, horizon)");
  }
  if (loads.delay_penalty.size() != loads.deferrable.size())
    report("DIMENSION_MISMATCH", "delay_penalty", "one delay penalty per deferrable class is required");
  if (std::any_of(loads.delay_penalty.begin(), loads.delay_penalty.end(), [](double v) { return !(v >= 0.0 && std::isfinite(v)); }) ||
      !(loads.shift_penalty >= 0.0 && std::isfinite(loads.shift_penalty)))
    report("BAD_PENALTY", "penalties", "penalties must be finite and non-negative");
  return out;
}

}  // namespace dcflex
