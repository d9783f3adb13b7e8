#include "world.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace mixlab {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;
}

MixtureWorld::MixtureWorld(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty())
    throw std::invalid_argument("MixtureWorld: need at least one component");
  if (components_.size() > kMaxComponents)
    throw std::invalid_argument("MixtureWorld: at most " + std::to_string(kMaxComponents) +
                                " components supported");
  d_ = components_[0].mean.size();
  double total = 0.0;
  for (const auto& c : components_) {
    if (c.mean.size() != d_ || c.cov.dim() != d_)
      throw std::invalid_argument("MixtureWorld: components disagree on dimension");
    if (c.weight <= 0.0)
      throw std::invalid_argument("MixtureWorld: weights must be strictly positive");
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("MixtureWorld: weights sum to " + std::to_string(total) +
                                ", expected 1");
}

MixtureWorld MixtureWorld::four_corners() {
  std::vector<MixtureComponent> cs;
  int label = 0;
  for (double y : {-4.0, 4.0})
    for (double x : {-4.0, 4.0})
      cs.push_back({0.25, Vec{x, y}, SpdMatrix::identity(2), label++});
  return MixtureWorld(std::move(cs));
}

MixtureWorld MixtureWorld::standard_normal(int d) {
  return MixtureWorld({{1.0, Vec(d, 0.0), SpdMatrix::identity(d), 0}});
}

bool MixtureWorld::has_label(int label) const {
  for (const auto& c : components_)
    if (c.label == label) return true;
  return false;
}

Vec MixtureWorld::mixture_mean() const {
  Vec m(d_);
  for (const auto& c : components_) m += c.weight * c.mean;
  return m;
}

Mat MixtureWorld::mixture_cov() const {
  Vec m = mixture_mean();
  Mat cov(d_, d_);
  for (const auto& c : components_) {
    for (int r = 0; r < d_; ++r)
      for (int cc = 0; cc < d_; ++cc)
        cov(r, cc) += c.weight * (c.cov(r, cc) + (c.mean[r] - m[r]) * (c.mean[cc] - m[cc]));
  }
  return cov;
}

NoisedWorldView::NoisedWorldView(const MixtureWorld& w, double abar_level)
    : world(&w), abar(abar_level), sqrt_abar(std::sqrt(abar_level)) {
  if (!(abar_level > 0.0 && abar_level <= 1.0))
    throw std::invalid_argument("abar must be in (0, 1], got " + std::to_string(abar_level));
  int d = w.dim();
  comps.reserve(w.components().size());
  for (const auto& c : w.components()) {
    Comp v;
    v.scaled_mean = sqrt_abar * c.mean;
    Mat marginal = c.cov.mat().scaled(abar).plus_scaled_identity(1.0 - abar);
    Mat chol = cholesky(marginal);
    v.marginal_inv = invert_spd(marginal);
    v.log_norm = std::log(c.weight) - 0.5 * logdet_from_cholesky(chol) - 0.5 * d * kLog2Pi;
    v.cond_gain = c.cov.mat().scaled(sqrt_abar).matmul(v.marginal_inv);
    comps.push_back(std::move(v));
  }
}

void NoisedWorldView::posteriors_into(const Vec& z, double* out) const {
  size_t k = comps.size();
  double max_log = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < k; ++i) {
    Vec r = z - comps[i].scaled_mean;
    double quad = r.dot(comps[i].marginal_inv.matvec(r));
    double lg = comps[i].log_norm - 0.5 * quad;
    out[i] = lg;
    if (lg > max_log) max_log = lg;
  }
  if (!std::isfinite(max_log)) {
    // Every density underflowed (or the input was degenerate); fall back to
    // uniform responsibilities rather than dividing by zero.
    std::fprintf(stderr, "[mixlab] warning: all component densities underflowed at z=%s; "
                         "using uniform responsibilities\n", to_string(z).c_str());
    for (size_t i = 0; i < k; ++i) out[i] = 1.0 / static_cast<double>(k);
    return;
  }
  double total = 0.0;
  for (size_t i = 0; i < k; ++i) {
    double e = std::exp(out[i] - max_log);
    out[i] = e;
    total += e;
  }
  for (size_t i = 0; i < k; ++i) out[i] /= total;
}

ComponentPosterior NoisedWorldView::posteriors(const Vec& z) const {
  ComponentPosterior post;
  post.responsibilities.resize(comps.size());
  posteriors_into(z, post.responsibilities.data());
  return post;
}

Vec NoisedWorldView::posterior_mean_z0(const Vec& z) const {
  double resp[kMaxComponents];
  posteriors_into(z, resp);
  Vec out(world->dim());
  for (size_t i = 0; i < comps.size(); ++i) {
    const auto& c = world->components()[i];
    Vec cond = c.mean + comps[i].cond_gain.matvec(z - comps[i].scaled_mean);
    out += resp[i] * cond;
  }
  return out;
}

std::vector<std::pair<Vec, int>> sample_prior(const MixtureWorld& world, RngStream& rng, int n) {
  if (n < 1) throw std::invalid_argument("sample_prior: n must be >= 1");
  // Component square roots once per call.
  std::vector<Mat> roots;
  roots.reserve(world.components().size());
  for (const auto& c : world.components()) roots.push_back(spd_sqrt(c.cov).mat());
  std::vector<std::pair<Vec, int>> out;
  out.reserve(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    double u = rng.next_uniform();
    size_t pick = 0;
    double acc = 0.0;
    for (size_t i = 0; i < world.components().size(); ++i) {
      acc += world.components()[i].weight;
      if (u < acc) {
        pick = i;
        break;
      }
      pick = i;
    }
    Vec eps = gaussian_draw(rng, world.dim());
    const auto& c = world.components()[pick];
    out.emplace_back(c.mean + roots[pick].matvec(eps), c.label);
  }
  return out;
}

ComponentPosterior component_posteriors(const MixtureWorld& world, const Vec& z, double abar) {
  return NoisedWorldView(world, abar).posteriors(z);
}

Vec posterior_mean_z0(const MixtureWorld& world, const Vec& z_t, double abar) {
  return NoisedWorldView(world, abar).posterior_mean_z0(z_t);
}

Vec exact_epsilon(const MixtureWorld& world, const Vec& z_t, int t, const NoiseSchedule& schedule) {
  if (t < 1 || t > schedule.T)
    throw std::invalid_argument("exact_epsilon: t must be in [1, T]");
  double abar = schedule.at(t);
  NoisedWorldView view(world, abar);
  Vec z0 = view.posterior_mean_z0(z_t);
  return (1.0 / std::sqrt(1.0 - abar)) * (z_t - view.sqrt_abar * z0);
}

int nearest_label(const MixtureWorld& world, const Vec& z) {
  ComponentPosterior post = component_posteriors(world, z, 1.0);
  size_t best = 0;
  for (size_t i = 1; i < post.responsibilities.size(); ++i)
    if (post.responsibilities[i] > post.responsibilities[best]) best = i;
  return world.components()[best].label;
}

double consistency(const MixtureWorld& world, const std::vector<Vec>& samples, int target_label) {
  if (samples.empty()) throw std::invalid_argument("consistency: need at least one sample");
  if (!world.has_label(target_label))
    throw std::invalid_argument("consistency: unknown label " + std::to_string(target_label));
  NoisedWorldView view(world, 1.0);
  int hits = 0;
  for (const Vec& z : samples) {
    ComponentPosterior post = view.posteriors(z);
    size_t best = 0;
    for (size_t i = 1; i < post.responsibilities.size(); ++i)
      if (post.responsibilities[i] > post.responsibilities[best]) best = i;
    if (world.components()[best].label == target_label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace mixlab
