#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "audelta/rng.hpp"
#include "audelta/tensor.hpp"

namespace audelta {
namespace nn {

// ---------------------------------------------------------------------------
// Primitives. Each forward has an exact reverse-mode companion; the caches
// hold exactly what the backward pass needs, nothing more. There is no
// graph engine: the model composition is fixed and hand-chained.
// ---------------------------------------------------------------------------

// y = x W + b, x:[B x I], W:[I x O], b:[O]
Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b);

struct LinearGrads {
  Tensor dx, dw, db;
};
LinearGrads linear_backward(const Tensor& x, const Tensor& w, const Tensor& dy);

// Exact GELU: y = x * Phi(x), with Phi the standard normal CDF (erf form).
Tensor gelu(const Tensor& x);
Tensor gelu_backward(const Tensor& x, const Tensor& dy);

struct LayerNormCache {
  Tensor xhat;         // standardized rows
  std::vector<double> inv_std;  // per row, 1/sqrt(var + eps)
};

// Per-row standardization (biased variance) followed by the gamma/beta affine.
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps,
                  LayerNormCache* cache);

struct LayerNormGrads {
  Tensor dx, dgamma, dbeta;
};
LayerNormGrads layer_norm_backward(const LayerNormCache& cache, const Tensor& gamma,
                                   const Tensor& dy);

struct DropoutMask {
  std::vector<std::uint8_t> keep;
  double p = 0.0;
  bool train = false;
};

// Inverted dropout: survivors are scaled by 1/(1-p) at train time so that
// eval mode is the identity.
Tensor dropout(const Tensor& x, double p, Rng& rng, bool train, DropoutMask* mask);
Tensor dropout_backward(const DropoutMask& mask, const Tensor& dy);

// Elementwise sigmoid with logits clamped to [-30, 30] before exponentiation.
Tensor sigmoid_clamped(const Tensor& logits);
// d sigmoid/d logit evaluated on the clamped function (zero outside the clamp).
Tensor sigmoid_clamped_backward(const Tensor& logits, const Tensor& p, const Tensor& dp);

// Binary cross entropy, mean over rows (batch), sum over columns (classes).
// p must come from sigmoid_clamped; y entries must be exactly 0 or 1.
double bce(const Tensor& p, const Tensor& y);
Tensor bce_backward(const Tensor& p, const Tensor& y, double dloss);

// ---------------------------------------------------------------------------
// Parameters and Adam
// ---------------------------------------------------------------------------

struct ParamEntry {
  Tensor value;
  Tensor grad;
  Tensor adam_m;
  Tensor adam_v;
};

// Named trainable parameters plus their Adam state. Iteration order is the
// sorted name order, so updates do not depend on registration order.
class ParamStore {
 public:
  Tensor& create(const std::string& name, Tensor init);
  Tensor& value(const std::string& name);
  const Tensor& value(const std::string& name) const;
  Tensor& grad(const std::string& name);
  bool contains(const std::string& name) const { return entries_.count(name) != 0; }

  void zero_grads();
  std::vector<std::string> names() const;
  std::size_t total_size() const;

  std::map<std::string, ParamEntry>& entries() { return entries_; }
  const std::map<std::string, ParamEntry>& entries() const { return entries_; }

  std::uint64_t step_count() const { return step_count_; }
  void set_step_count(std::uint64_t t) { step_count_ = t; }

 private:
  std::map<std::string, ParamEntry> entries_;
  std::uint64_t step_count_ = 0;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One bias-corrected Adam update over every parameter, in place. The step
// count is shared across parameters and incremented exactly once.
void adam_step(ParamStore& store, const AdamConfig& cfg);

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

// Central-difference check of the analytic gradients already stored in
// `store` against `loss_fn` (which must be deterministic and must not touch
// the gradients). For stores larger than `max_coords` a seeded random subset
// of coordinates is probed. Returns the max relative error with denominator
// max(|analytic|, |numeric|, 1e-8).
double finite_diff_check(ParamStore& store, const std::function<double()>& loss_fn,
                         double h = 1e-5, std::size_t max_coords = 200,
                         std::uint64_t seed = 0);

}  // namespace nn
}  // namespace audelta
