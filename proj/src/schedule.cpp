#include "schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace mixlab {

std::string to_string(ScheduleKind k) {
  return k == ScheduleKind::kCosine ? "cosine" : "linear";
}

ScheduleKind schedule_kind_from_string(const std::string& s) {
  if (s == "cosine") return ScheduleKind::kCosine;
  if (s == "linear") return ScheduleKind::kLinear;
  throw std::invalid_argument("unknown schedule kind '" + s + "' (expected cosine|linear)");
}

NoiseSchedule build_schedule(int T, ScheduleKind kind) {
  if (T < 1) throw std::invalid_argument("build_schedule: T must be >= 1, got " + std::to_string(T));
  NoiseSchedule s;
  s.T = T;
  s.kind = kind;
  s.abar.resize(static_cast<size_t>(T) + 1);
  for (int t = 0; t <= T; ++t) {
    double raw;
    if (kind == ScheduleKind::kCosine) {
      double c = std::cos(M_PI / 2.0 * static_cast<double>(t) / T);
      raw = c * c;
    } else {
      raw = 1.0 - static_cast<double>(t) / (T + 1);
    }
    s.abar[static_cast<size_t>(t)] = std::max(raw, kAbarFloor);
  }
  s.abar[0] = 1.0;
  // De-tie any floor-clamped tail: geometric taper from the last unclamped
  // value down to exactly the floor at t = T.
  int first_clamped = T + 1;
  for (int t = 1; t <= T; ++t) {
    if (s.abar[static_cast<size_t>(t)] <= kAbarFloor) {
      first_clamped = t;
      break;
    }
  }
  if (first_clamped <= T) {
    double a = s.abar[static_cast<size_t>(first_clamped - 1)];
    int span = T - first_clamped + 1;
    for (int j = 0; j < span; ++j) {
      double frac = static_cast<double>(j + 1) / span;
      s.abar[static_cast<size_t>(first_clamped + j)] = a * std::pow(kAbarFloor / a, frac);
    }
    s.abar[static_cast<size_t>(T)] = kAbarFloor;
  }
  return s;
}

}  // namespace mixlab
