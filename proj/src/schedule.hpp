#pragma once

#include <string>
#include <vector>

namespace mixlab {

enum class ScheduleKind { kCosine, kLinear };

std::string to_string(ScheduleKind k);
ScheduleKind schedule_kind_from_string(const std::string& s);

// Cumulative signal fractions abar_0..abar_T: abar[0] = 1 exactly, strictly
// decreasing, abar[T] >= kAbarFloor.
struct NoiseSchedule {
  int T = 0;
  ScheduleKind kind = ScheduleKind::kCosine;
  std::vector<double> abar;

  double at(int t) const { return abar[static_cast<size_t>(t)]; }
};

inline constexpr double kAbarFloor = 1e-4;

// cosine: abar_t = max(cos^2(pi/2 * t/T), 1e-4)
// linear: abar_t = max(1 - t/(T+1), 1e-4)
// Where the raw curve would tie at the floor for more than the final entry,
// the tail tapers geometrically to exactly 1e-4 at t = T so the sequence
// stays strictly decreasing.
NoiseSchedule build_schedule(int T, ScheduleKind kind);

}  // namespace mixlab
