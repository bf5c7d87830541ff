#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "audelta/rng.hpp"
#include "audelta/scene.hpp"

namespace audelta {
namespace synth {

enum class DiffKind { IncBg, DecBg, AddEvent, RemoveEvent, IncEvent, DecEvent };

const std::string& diff_kind_name(DiffKind kind);
DiffKind diff_kind_from_name(const std::string& name);
bool is_background_kind(DiffKind kind);

// One of the six pairwise constructions. magnitude_db is a gain delta for
// the background kinds, an SNR for add/remove, and an attenuation for
// inc/dec event.
struct DifferenceOp {
  DiffKind kind;
  ClassId class_id;
  double magnitude_db = 0.0;
};

// Magnitude ranges per kind (uniform draws).
inline constexpr double kBgGainMinDb = 3.0, kBgGainMaxDb = 9.0;
inline constexpr double kEventSnrMinDb = -3.0, kEventSnrMaxDb = 9.0;
inline constexpr double kEventLevelMinDb = 4.0, kEventLevelMaxDb = 10.0;

void validate_op(const SceneSpec& scene, const DifferenceOp& op);

// Context shared by the op constructions for one pair.
struct PairContext {
  SceneSpec scene;
  int sample_rate_hz = 0;
  std::size_t clip_samples = 0;
  double base_rms_alpha = 0.0;  // RMS of the original background crops
  double base_rms_beta = 0.0;
  bool eval_split = false;      // keeps source seeds disjoint between splits
  double event_min_frac = 0.4;  // event length as a fraction of the clip
  double event_max_frac = 0.8;
  double fixed_event_s = 0.0;   // > 0 pins the event length (tests)
};

// A scaled layer destined for one side of the pair.
struct MixLayer {
  std::vector<double> samples;
  double scale = 1.0;
  std::size_t onset = 0;
  double rms_db() const;
};

struct DiffPlan {
  DifferenceOp op;
  std::optional<MixLayer> alpha_layer;
  std::optional<MixLayer> beta_layer;
};

// Decides sources, gains and onsets without touching the audio; the plan
// carries the exact layers that apply_difference would mix in.
DiffPlan plan_difference(const PairContext& ctx, const DifferenceOp& op, Rng& rng);

// Applies one difference op in place. Samples are hard-clipped to [-1, 1]
// after mixing. The swapped kinds (b), (d), (f) are implemented literally as
// the base kind with alpha and beta exchanged.
void apply_difference(const PairContext& ctx, const DifferenceOp& op, std::vector<double>& alpha,
                      std::vector<double>& beta, Rng& rng);

void mix_plan(const DiffPlan& plan, std::vector<double>& alpha, std::vector<double>& beta);

// Imperative-sentence description; one clause per op joined by " and ".
std::string describe(const std::vector<DifferenceOp>& ops);

// Uniform class choice (background and events equally likely), then a kind
// admissible for that class; one or two ops with distinct classes.
std::vector<DifferenceOp> sample_ops(const SceneSpec& scene, Rng& rng);

// Multi-hot labels over the scene classes for both sides.
std::pair<std::vector<int>, std::vector<int>> labels_from_ops(const SceneSpec& scene,
                                                              const std::vector<DifferenceOp>& ops);

}  // namespace synth
}  // namespace audelta
