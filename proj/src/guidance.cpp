#include "guidance.hpp"

#include <cmath>

#include "diffusion.hpp"
#include "errors.hpp"

namespace mixlab {

EmbeddingMap::EmbeddingMap(int embed_dim, int dim, uint64_t seed) : seed_(seed) {
  if (dim < 1 || embed_dim < dim || embed_dim > kMaxDim)
    throw std::invalid_argument("EmbeddingMap: need 1 <= d <= e <= " + std::to_string(kMaxDim));
  RngStream rng = stream_for(seed, StreamPurpose::kEmbedding, 0);
  m_ = Mat(embed_dim, dim);
  for (int c = 0; c < dim; ++c) {
    // Draw a column, orthogonalize against the previous ones, normalize.
    // Redraw on (measure-zero) degeneracy.
    for (;;) {
      Vec col = gaussian_draw(rng, embed_dim);
      for (int prev = 0; prev < c; ++prev) {
        double proj = 0.0;
        for (int r = 0; r < embed_dim; ++r) proj += col[r] * m_(r, prev);
        for (int r = 0; r < embed_dim; ++r) col[r] -= proj * m_(r, prev);
      }
      double n = col.norm();
      if (n > 1e-8) {
        for (int r = 0; r < embed_dim; ++r) m_(r, c) = col[r] / n;
        break;
      }
    }
  }
}

Vec EmbeddingMap::class_embedding(const MixtureWorld& world, int label) const {
  for (const auto& c : world.components()) {
    if (c.label != label) continue;
    Vec u = embed(c.mean);
    double n = u.norm();
    if (n == 0.0)
      throw DegenerateInputError("class_embedding: component mean embeds to zero");
    return (1.0 / n) * u;
  }
  throw std::invalid_argument("class_embedding: unknown label " + std::to_string(label));
}

GuidancePrompt GuidancePrompt::class_target(int label, double strength) {
  GuidancePrompt p;
  p.kind = Kind::kClassTarget;
  p.target_label = label;
  p.strength = strength;
  return p;
}

GuidancePrompt GuidancePrompt::embedding_target(const Vec& target, double strength) {
  double n = target.norm();
  if (n == 0.0) throw DegenerateInputError("embedding_target: zero target vector");
  GuidancePrompt p;
  p.kind = Kind::kEmbeddingTarget;
  p.target_embedding = (1.0 / n) * target;
  p.strength = strength;
  return p;
}

void GuidanceSchedule::validate() const {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("GuidanceSchedule: p must be in [0, 1], got " + std::to_string(p));
  if (k < 1) throw std::invalid_argument("GuidanceSchedule: k must be >= 1");
  if (m < 0) throw std::invalid_argument("GuidanceSchedule: m must be >= 0");
  if (backward_lr <= 0.0) throw std::invalid_argument("GuidanceSchedule: backward_lr must be > 0");
  if (mode == Mode::kSwitch && !prompt2)
    throw std::invalid_argument("GuidanceSchedule: switch mode needs a second prompt");
  if (prompt.strength < 0.0)
    throw std::invalid_argument("GuidanceSchedule: prompt strength must be >= 0");
}

std::string to_string(GuidanceSchedule::Mode m) {
  switch (m) {
    case GuidanceSchedule::Mode::kAlways: return "always";
    case GuidanceSchedule::Mode::kOnThenOff: return "on-then-off";
    case GuidanceSchedule::Mode::kOffThenOn: return "off-then-on";
    case GuidanceSchedule::Mode::kSwitch: return "switch";
    case GuidanceSchedule::Mode::kNone: return "none";
  }
  return "?";
}

GuidanceSchedule::Mode schedule_mode_from_string(const std::string& s) {
  if (s == "always") return GuidanceSchedule::Mode::kAlways;
  if (s == "on-then-off") return GuidanceSchedule::Mode::kOnThenOff;
  if (s == "off-then-on") return GuidanceSchedule::Mode::kOffThenOn;
  if (s == "switch") return GuidanceSchedule::Mode::kSwitch;
  if (s == "none") return GuidanceSchedule::Mode::kNone;
  throw std::invalid_argument("unknown schedule mode '" + s +
                              "' (expected always|on-then-off|off-then-on|switch|none)");
}

const GuidancePrompt* schedule_query(const GuidanceSchedule& schedule, int t, int T) {
  if (t < 1 || t > T) throw std::invalid_argument("schedule_query: t outside [1, T]");
  double q = static_cast<double>(T - t) / T;
  switch (schedule.mode) {
    case GuidanceSchedule::Mode::kAlways:
      return &schedule.prompt;
    case GuidanceSchedule::Mode::kOnThenOff:
      return q < schedule.p ? &schedule.prompt : nullptr;
    case GuidanceSchedule::Mode::kOffThenOn:
      return q >= schedule.p ? &schedule.prompt : nullptr;
    case GuidanceSchedule::Mode::kSwitch:
      return q < schedule.p ? &schedule.prompt : &*schedule.prompt2;
    case GuidanceSchedule::Mode::kNone:
      return nullptr;
  }
  return nullptr;
}

GuidanceContext::GuidanceContext(const MixtureWorld& world, const EmbeddingMap& map)
    : world_(&world), map_(&map), clean_view_(world, 1.0) {
  if (map.dim() != world.dim())
    throw std::invalid_argument("GuidanceContext: embedding map dimension mismatch");
}

LossEval GuidanceContext::loss(const GuidancePrompt& prompt, const Vec& z0hat) const {
  if (!z0hat.all_finite())
    throw DegenerateInputError("guidance_loss: non-finite z0hat");
  LossEval out;
  if (prompt.kind == GuidancePrompt::Kind::kEmbeddingTarget) {
    Vec u = map_->embed(z0hat);
    double n = u.norm();
    if (n == 0.0)
      throw DegenerateInputError("guidance_loss: embedding of z0hat is zero (cosine undefined)");
    double uc = u.dot(prompt.target_embedding);
    out.value = -uc / n;
    // d(-cos)/du = -c/|u| + (u.c) u/|u|^3, pulled back through the map.
    Vec grad_u = (-1.0 / n) * prompt.target_embedding + (uc / (n * n * n)) * u;
    out.grad = map_->pullback(grad_u);
    return out;
  }
  // class target: -log responsibility at abar = 1
  double resp[kMaxComponents];
  clean_view_.posteriors_into(z0hat, resp);
  int idx = -1;
  for (size_t i = 0; i < world_->components().size(); ++i)
    if (world_->components()[i].label == prompt.target_label) {
      idx = static_cast<int>(i);
      break;
    }
  if (idx < 0)
    throw std::invalid_argument("guidance_loss: unknown target label " +
                                std::to_string(prompt.target_label));
  double r = resp[idx];
  out.value = -std::log(std::max(r, 1e-300));
  // grad = Sig_tgt^-1 (z - mu_tgt) - sum_i r_i Sig_i^-1 (z - mu_i)
  out.grad = Vec(world_->dim());
  for (size_t i = 0; i < clean_view_.comps.size(); ++i) {
    Vec g = clean_view_.comps[i].marginal_inv.matvec(z0hat - clean_view_.comps[i].scaled_mean);
    double w = (static_cast<int>(i) == idx ? 1.0 : 0.0) - resp[i];
    out.grad += w * g;
  }
  return out;
}

LossFn GuidanceContext::loss_fn(const GuidancePrompt& prompt) const {
  return [this, prompt](const Vec& z) { return loss(prompt, z); };
}

LossEval guidance_loss(const GuidancePrompt& prompt, const EmbeddingMap& map,
                       const MixtureWorld& world, const Vec& z0hat) {
  return GuidanceContext(world, map).loss(prompt, z0hat);
}

Vec forward_guidance(const Vec& eps_hat, const Vec& z_t, int t, const LossFn& loss,
                     double strength, const NoiseSchedule& schedule) {
  check_step(t, schedule, 1);
  if (strength == 0.0) return eps_hat;
  double abar = schedule.at(t);
  Vec z0hat = predict_z0(z_t, eps_hat, t, schedule);
  LossEval e = loss(z0hat);
  bool zero_grad = true;
  for (int i = 0; i < e.grad.size(); ++i)
    if (e.grad[i] != 0.0) zero_grad = false;
  if (zero_grad) return eps_hat;
  double coeff = strength * std::sqrt(1.0 - abar) / std::sqrt(abar);
  return eps_hat + coeff * e.grad;
}

Vec forward_guidance(const Vec& eps_hat, const Vec& z_t, int t, const GuidancePrompt& prompt,
                     const EmbeddingMap& map, const MixtureWorld& world,
                     const NoiseSchedule& schedule) {
  GuidanceContext ctx(world, map);
  return forward_guidance(eps_hat, z_t, t, ctx.loss_fn(prompt), prompt.strength, schedule);
}

Vec backward_guidance(const Vec& z0hat, const LossFn& loss, int m, double lr) {
  if (m < 0) throw std::invalid_argument("backward_guidance: m must be >= 0");
  if (lr <= 0.0) throw std::invalid_argument("backward_guidance: lr must be > 0");
  Vec delta(z0hat.size());
  for (int step = 0; step < m; ++step) {
    LossEval e = loss(z0hat + delta);
    if (!std::isfinite(e.value) || !e.grad.all_finite())
      throw DivergedError("backward_guidance: non-finite loss", step);
    delta -= lr * e.grad;
  }
  return delta;
}

Vec backward_guidance(const Vec& z0hat, const GuidancePrompt& prompt, const EmbeddingMap& map,
                      const MixtureWorld& world, int m, double lr) {
  GuidanceContext ctx(world, map);
  return backward_guidance(z0hat, ctx.loss_fn(prompt), m, lr);
}

Vec apply_backward_to_eps(const Vec& eps_tilde, const Vec& delta, int t,
                          const NoiseSchedule& schedule) {
  check_step(t, schedule, 1);
  bool zero = true;
  for (int i = 0; i < delta.size(); ++i)
    if (delta[i] != 0.0) zero = false;
  if (zero) return eps_tilde;
  double abar = schedule.at(t);
  return eps_tilde - std::sqrt(abar / (1.0 - abar)) * delta;
}

}  // namespace mixlab
