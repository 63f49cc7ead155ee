#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "dcflex/flexload.hpp"
#include "dcflex/netcase.hpp"

namespace dcflex {

enum class ProfileShape { Flat, Sinusoidal };
ProfileShape parse_profile_shape(std::string_view text);

/// Synthetic diurnal load. Sinusoidal hours follow
/// peak * (mid + amp * cos(2 pi (h - peak_hour) / 24)) with the trough at
/// trough_ratio * peak, then multiplicative uniform noise of +-noise.
struct ProfileGenSpec {
  int hours = 24;
  std::uint64_t seed = 1;
  ProfileShape shape = ProfileShape::Sinusoidal;
  double peak_hour = 18.0;
  double trough_ratio = 0.6;
  double noise = 0.0;
  std::map<std::string, double> peak_mw;  // buses not listed stay at 0
};

/// Deterministic for a given spec on every platform.
Profile generate_profiles(const Network& network, const ProfileGenSpec& spec);

}  // namespace dcflex
