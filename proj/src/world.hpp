#pragma once

#include <cstdint>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"
#include "schedule.hpp"

namespace mixlab {

inline constexpr size_t kMaxComponents = 64;

struct MixtureComponent {
  double weight = 1.0;
  Vec mean;
  SpdMatrix cov;
  int label = 0;
};

struct ComponentPosterior {
  std::vector<double> responsibilities;  // nonnegative, sums to 1
};

// A Gaussian-mixture data distribution with closed-form posteriors, so the
// denoiser is exact rather than learned. Immutable after construction.
class MixtureWorld {
 public:
  explicit MixtureWorld(std::vector<MixtureComponent> components);

  // Equal-weight unit-covariance components at (+-4, +-4), labels 0..3.
  static MixtureWorld four_corners();
  static MixtureWorld standard_normal(int d);

  int dim() const { return d_; }
  int component_count() const { return static_cast<int>(components_.size()); }
  const MixtureComponent& component(int i) const { return components_[static_cast<size_t>(i)]; }
  const std::vector<MixtureComponent>& components() const { return components_; }
  bool has_label(int label) const;

  // Exact first and second moments of the mixture.
  Vec mixture_mean() const;
  Mat mixture_cov() const;

 private:
  std::vector<MixtureComponent> components_;
  int d_ = 0;

  friend struct NoisedWorldView;
};

// Per-component precomputation at one noise level: the level-abar marginal
// of component i is N(sqrt(abar) mu_i, abar Sig_i + (1-abar) I).
struct NoisedWorldView {
  const MixtureWorld* world = nullptr;
  double abar = 1.0;
  double sqrt_abar = 1.0;
  struct Comp {
    Vec scaled_mean;       // sqrt(abar) mu_i
    Mat marginal_inv;      // (abar Sig_i + (1-abar) I)^-1
    double log_norm;       // log w_i - 0.5 logdet(marginal) - (d/2) log(2 pi)
    Mat cond_gain;         // sqrt(abar) Sig_i (abar Sig_i + (1-abar) I)^-1
  };
  std::vector<Comp> comps;

  NoisedWorldView(const MixtureWorld& w, double abar_level);

  ComponentPosterior posteriors(const Vec& z) const;
  Vec posterior_mean_z0(const Vec& z) const;

  // Allocation-free variant for the sampling hot path; out must hold
  // component_count() entries.
  void posteriors_into(const Vec& z, double* out) const;
};

std::vector<std::pair<Vec, int>> sample_prior(const MixtureWorld& world, RngStream& rng, int n);

// Bayes responsibilities under the level-abar marginal; abar in (0, 1].
ComponentPosterior component_posteriors(const MixtureWorld& world, const Vec& z, double abar);

// E[z_0 | z_t] under the level-abar joint.
Vec posterior_mean_z0(const MixtureWorld& world, const Vec& z_t, double abar);

// E[eps | z_t] = (z_t - sqrt(abar_t) E[z0|z_t]) / sqrt(1 - abar_t); t >= 1.
Vec exact_epsilon(const MixtureWorld& world, const Vec& z_t, int t, const NoiseSchedule& schedule);

// Fraction of samples whose argmax clean-data responsibility matches
// target_label; ties break toward the lowest component index.
double consistency(const MixtureWorld& world, const std::vector<Vec>& samples, int target_label);

// Argmax clean-data responsibility, ties toward the lowest component index.
int nearest_label(const MixtureWorld& world, const Vec& z);

}  // namespace mixlab
