#include "dcflex/profile_gen.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace dcflex {

ProfileShape parse_profile_shape(std::string_view text) {
  if (text == "flat") return ProfileShape::Flat;
  if (text == "sinusoidal" || text == "diurnal") return ProfileShape::Sinusoidal;
  throw Error("unknown profile shape '" + std::string(text) + "' (flat, sinusoidal)");
}

Profile generate_profiles(const Network& network, const ProfileGenSpec& spec) {
  if (spec.hours <= 0) throw Error("profile horizon must be positive");
  if (!(spec.trough_ratio >= 0.0 && spec.trough_ratio <= 1.0)) throw Error("trough_ratio must lie in [0,1]");
  if (!(spec.noise >= 0.0 && spec.noise < 1.0)) throw Error("noise must lie in [0,1)");
  if (!std::isfinite(spec.peak_hour)) throw Error("peak_hour must be finite");
  std::vector<double> peaks(network.bus_count(), 0.0);
  for (const auto& [bus, mw] : spec.peak_mw) {
    const auto n = network.find_bus(bus);
    if (!n) throw Error("profile peak given for unknown bus '" + bus + "'");
    if (!(mw >= 0.0 && std::isfinite(mw))) throw Error("peak for bus '" + bus + "' must be non-negative");
    peaks[*n] = mw;
  }

  // Raw engine output only: the standard distributions are not portable.
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const double mid = 0.5 * (1.0 + spec.trough_ratio);
  const double amp = 0.5 * (1.0 - spec.trough_ratio);

  Profile p(spec.hours, static_cast<Eigen::Index>(network.bus_count()));
  for (int t = 0; t < spec.hours; ++t) {
    double shape = 1.0;
    if (spec.shape == ProfileShape::Sinusoidal)
      shape = mid + amp * std::cos(2.0 * std::numbers::pi * (t - spec.peak_hour) / 24.0);
    for (std::size_t n = 0; n < peaks.size(); ++n) {
      const double jitter = spec.noise > 0.0 ? 1.0 + spec.noise * (2.0 * uniform() - 1.0) : 1.0;
      p(t, static_cast<Eigen::Index>(n)) = peaks[n] * shape * jitter;
    }
  }
  return p;
}

}  // namespace dcflex
