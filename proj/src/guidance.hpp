#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "linalg.hpp"
#include "schedule.hpp"
#include "world.hpp"

namespace mixlab {

// Calibrated on the four-corners world so that the schedule ablations keep
// their early-vs-late asymmetry; larger values let late-step guidance drag
// samples across basins.
inline constexpr double kDefaultGuidanceStrength = 0.2;
inline constexpr double kDefaultBackwardLr = 5e-4;

// Fixed linear map into the comparison space where prompts live. Columns are
// orthonormal (an isometry R^d -> R^e), frozen at construction from a seed.
// Requires e >= d.
class EmbeddingMap {
 public:
  EmbeddingMap(int embed_dim, int dim, uint64_t seed);

  int embed_dim() const { return m_.rows(); }
  int dim() const { return m_.cols(); }
  uint64_t seed() const { return seed_; }
  const Mat& mat() const { return m_; }

  Vec embed(const Vec& z) const { return m_.matvec(z); }
  Vec pullback(const Vec& u) const { return m_.tmatvec(u); }

  // Normalized embedding of a component mean; the prompt vector for that class.
  Vec class_embedding(const MixtureWorld& world, int label) const;

 private:
  Mat m_;
  uint64_t seed_;
};

struct GuidancePrompt {
  enum class Kind { kEmbeddingTarget, kClassTarget };

  Kind kind = Kind::kClassTarget;
  int target_label = 0;     // class-target
  Vec target_embedding;     // embedding-target, unit norm
  double strength = kDefaultGuidanceStrength;

  static GuidancePrompt class_target(int label, double strength = kDefaultGuidanceStrength);
  // Normalizes; throws DegenerateInputError on a zero vector.
  static GuidancePrompt embedding_target(const Vec& target,
                                         double strength = kDefaultGuidanceStrength);
};

// Time-window policy. q = (T - t)/T is the progress fraction: q = 0 at the
// first reverse step, approaching 1 at the last.
//   always:           prompt at every step
//   on-then-off(p):   prompt iff q < p
//   off-then-on(p):   prompt iff q >= p
//   switch(c1,c2,p):  c1 if q < p else c2
//   none:             never active
struct GuidanceSchedule {
  enum class Mode { kAlways, kOnThenOff, kOffThenOn, kSwitch, kNone };

  Mode mode = Mode::kAlways;
  double p = 0.0;
  int k = 5;   // self-recurrence rounds per step
  int m = 10;  // backward gradient steps per recurrence
  double backward_lr = kDefaultBackwardLr;
  GuidancePrompt prompt;                    // c1
  std::optional<GuidancePrompt> prompt2;    // c2, switch mode only

  void validate() const;
};

std::string to_string(GuidanceSchedule::Mode m);
GuidanceSchedule::Mode schedule_mode_from_string(const std::string& s);

// Active prompt at reverse step t of T, or nullptr when guidance is off.
const GuidancePrompt* schedule_query(const GuidanceSchedule& schedule, int t, int T);

struct LossEval {
  double value = 0.0;
  Vec grad;  // d(value)/d(z0hat)
};

using LossFn = std::function<LossEval(const Vec&)>;

// Immutable per-run bundle giving allocation-light loss evaluations.
class GuidanceContext {
 public:
  GuidanceContext(const MixtureWorld& world, const EmbeddingMap& map);

  LossEval loss(const GuidancePrompt& prompt, const Vec& z0hat) const;
  LossFn loss_fn(const GuidancePrompt& prompt) const;

  const MixtureWorld& world() const { return *world_; }
  const EmbeddingMap& map() const { return *map_; }

 private:
  const MixtureWorld* world_;
  const EmbeddingMap* map_;
  NoisedWorldView clean_view_;  // abar = 1: clean-data posteriors
};

// Loss and analytic gradient at a predicted clean point.
//   embedding-target: -cos(map(z0hat), target)
//   class-target:     -log responsibility of the target component at abar = 1
LossEval guidance_loss(const GuidancePrompt& prompt, const EmbeddingMap& map,
                       const MixtureWorld& world, const Vec& z0hat);

// eps_tilde = eps_hat + s sqrt(1-abar_t) g with g the loss gradient at
// z0hat(z_t) pushed through d z0hat / d z_t = (1/sqrt(abar_t)) I, eps_hat
// held frozen. Returns eps_hat bit-identically when s = 0 or the gradient
// vanishes.
Vec forward_guidance(const Vec& eps_hat, const Vec& z_t, int t, const LossFn& loss,
                     double strength, const NoiseSchedule& schedule);
Vec forward_guidance(const Vec& eps_hat, const Vec& z_t, int t, const GuidancePrompt& prompt,
                     const EmbeddingMap& map, const MixtureWorld& world,
                     const NoiseSchedule& schedule);

// m plain gradient-descent steps on delta -> loss(z0hat + delta) from
// delta = 0; returns the clean-space correction delta.
Vec backward_guidance(const Vec& z0hat, const LossFn& loss, int m, double lr);
Vec backward_guidance(const Vec& z0hat, const GuidancePrompt& prompt, const EmbeddingMap& map,
                      const MixtureWorld& world, int m, double lr);

// eps' = eps_tilde - sqrt(abar_t/(1-abar_t)) delta, so that
// predict_z0(z_t, eps', t) = predict_z0(z_t, eps_tilde, t) + delta exactly.
Vec apply_backward_to_eps(const Vec& eps_tilde, const Vec& delta, int t,
                          const NoiseSchedule& schedule);

}  // namespace mixlab
