#pragma once

#include <cmath>
#include <stdexcept>

#include "linalg.hpp"
#include "rng.hpp"
#include "schedule.hpp"

namespace mixlab {

// Step algebra shared by the sampler loop and the guidance transforms.
// All levels refer to the cumulative signal fraction abar of the schedule.

inline void check_step(int t, const NoiseSchedule& s, int lo) {
  if (t < lo || t > s.T)
    throw std::invalid_argument("step t=" + std::to_string(t) + " outside [" +
                                std::to_string(lo) + ", " + std::to_string(s.T) + "]");
}

// z_t = sqrt(abar_t) z0 + sqrt(1 - abar_t) eps ; t in [0, T].
inline Vec forward_noise(const Vec& z0, int t, const Vec& eps, const NoiseSchedule& s) {
  check_step(t, s, 0);
  double a = s.at(t);
  return std::sqrt(a) * z0 + std::sqrt(1.0 - a) * eps;
}

// Inversion of the noise parameterization: (z_t - sqrt(1-abar_t) eps) / sqrt(abar_t).
inline Vec predict_z0(const Vec& z_t, const Vec& eps, int t, const NoiseSchedule& s) {
  check_step(t, s, 1);
  double a = s.at(t);
  return (1.0 / std::sqrt(a)) * (z_t - std::sqrt(1.0 - a) * eps);
}

// Deterministic reverse step (eta = 0):
// z_{t-1} = sqrt(abar_{t-1}) predict_z0(z_t, eps, t) + sqrt(1 - abar_{t-1}) eps.
inline Vec ddim_step(const Vec& z_t, const Vec& eps, int t, const NoiseSchedule& s) {
  check_step(t, s, 1);
  double ap = s.at(t - 1);
  return std::sqrt(ap) * predict_z0(z_t, eps, t, s) + std::sqrt(1.0 - ap) * eps;
}

// Take a level-(t-1) point back to level t with fresh noise:
// sqrt(abar_t/abar_{t-1}) z_prev + sqrt(1 - abar_t/abar_{t-1}) eps'.
inline Vec renoise(const Vec& z_prev, int t, RngStream& rng, const NoiseSchedule& s) {
  check_step(t, s, 1);
  double ratio = s.at(t) / s.at(t - 1);
  Vec eps = gaussian_draw(rng, z_prev.size());
  return std::sqrt(ratio) * z_prev + std::sqrt(1.0 - ratio) * eps;
}

}  // namespace mixlab
