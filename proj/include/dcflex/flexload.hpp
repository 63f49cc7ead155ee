#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcflex/error.hpp"
#include "dcflex/netcase.hpp"

namespace dcflex {

/// Hour-by-bus matrix in MW; row t is hour t (0-based), column n is bus n.
using Profile = Eigen::MatrixXd;

/// Workload that may be served after it arrives, within `window_h` hours.
struct DeferrableClass {
  std::string id;
  std::string bus;
  int window_h = 0;
  std::vector<double> arrivals_mw;
};

/// Geographically shiftable demand. Shift delta (hour x bus) must satisfy
/// sum_n delta[t,n] = 0, lower <= delta <= upper and, when a budget is
/// present, ||delta_t||_1 <= budget[t].
struct GeoShiftSpec {
  Profile baseline;
  Profile lower;
  Profile upper;
  std::optional<std::vector<double>> budget;

  static GeoShiftSpec none(std::size_t hours, std::size_t buses);
};

/// Demand seen by the network: base load plus flexible DC components.
struct LoadSet {
  int horizon = 0;
  Profile base;
  std::vector<DeferrableClass> deferrable;
  GeoShiftSpec geo;
  std::vector<double> delay_penalty;  // $/MWh of backlog, one per class
  double shift_penalty = 0.0;         // $/MWh of |delta|

  /// Firm LoadSet with the given base and no flexible components.
  static LoadSet firm(Profile base);

  /// Nominal hourly demand per bus: base + arrivals + geo baseline.
  Profile nominal_demand(const Network& network) const;
};

/// Reads an hourly profile CSV (`hour,<bus-id>,...`). Columns must map 1:1
/// onto the network's buses; the result is ordered by bus index.
Profile load_profiles(std::string_view csv, const Network& network);
Profile load_profiles_file(const std::string& path, const Network& network);
std::string render_profiles(const Profile& profile, const Network& network);

/// Fractions of superimposed DC load; the remainder is firm.
struct DcSplit {
  double deferrable = 0.0;
  double geo = 0.0;
};

struct DcLoadFragments {
  Profile base;  // input base plus the firm DC share
  std::vector<DeferrableClass> deferrable;  // one class per DC bus, window 0
  Profile geo_baseline;
};

/// DC load at bus n, hour t is growth_ratio * base[t,n]; it is partitioned
/// into deferrable arrivals, geo baseline and a firm remainder.
DcLoadFragments superimpose_dc_load(const Profile& base, const Network& network,
                                    const std::vector<std::string>& dc_buses,
                                    double growth_ratio, DcSplit split);

enum class ViolationKind {
  NegativeService,
  ServiceExceedsAvailable,
  NegativeBacklog,
  BacklogNotCleared,
  DeadlineMissed,
  ZeroSum,
  BelowLowerBound,
  AboveUpperBound,
  BudgetExceeded,
};

std::string_view to_string(ViolationKind kind);

/// One failed constraint; `hour` is 0-based and `bus` is set for per-bus
/// conditions. `amount` is the size of the violation in MW.
struct LoadViolation {
  ViolationKind kind;
  int hour = 0;
  std::optional<std::size_t> bus;
  double amount = 0.0;
};

inline constexpr double kLoadTolerance = 1e-6;

/// Backlog recursion b_t = b_{t-1} + u_t - s_t with b_0 = b_T = 0, service
/// bounds and the completion-window condition. Throws on length mismatch.
std::vector<LoadViolation> check_backlog_trajectory(const DeferrableClass& cls,
                                                    std::span<const double> served,
                                                    double tol = kLoadTolerance);

/// Backlog implied by a service trajectory.
std::vector<double> backlog_trajectory(const DeferrableClass& cls, std::span<const double> served);

std::vector<LoadViolation> check_geo_shift(const GeoShiftSpec& spec, const Profile& delta,
                                           double tol = kLoadTolerance);

/// Every flexible MW forced to its nominal hour and bus.
LoadSet firm_equivalent(const LoadSet& loads);

/// Default shift bounds for a flexible portion rho over `geo_buses`:
/// upper = rho * max_n baseline[t,n], lower = -rho * baseline[t,n],
/// budget = 2 * rho * sum_n baseline[t,n] (moving 1 MW costs 2 in L1).
GeoShiftSpec geo_bounds_from_portion(const Profile& baseline,
                                     const std::vector<std::size_t>& geo_buses, double portion);

/// Structural checks of a LoadSet against a network; empty when usable.
std::vector<Diagnostic> validate_loadset(const LoadSet& loads, const Network& network);

}  // namespace dcflex
