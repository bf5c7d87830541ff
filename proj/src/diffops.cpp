#include "audelta/diffops.hpp"

#include <algorithm>
#include <cmath>

#include "audelta/dsp.hpp"
#include "audelta/io.hpp"
#include "audelta/synth.hpp"

namespace audelta {
namespace synth {

namespace {

const std::array<std::string, 6> kKindNames = {"inc_bg",       "dec_bg",    "add_event",
                                               "remove_event", "inc_event", "dec_event"};

// Source seeds drawn inside an example keep dev/eval parity-disjoint.
std::uint64_t draw_source_seed(Rng& rng, bool eval_split) {
  return (rng.next_u64() << 1) | (eval_split ? 1ULL : 0ULL);
}

double scale_for_level(double base_rms, const std::vector<double>& layer, double below_db) {
  double layer_rms = dsp::rms(layer);
  if (layer_rms == 0.0) return 0.0;
  return base_rms / (layer_rms * std::pow(10.0, below_db / 20.0));
}

std::size_t draw_onset(Rng& rng, std::size_t clip_samples, std::size_t layer_len) {
  return rng.uniform_index(clip_samples - layer_len + 1);
}

double draw_event_duration(const PairContext& ctx, Rng& rng) {
  if (ctx.fixed_event_s > 0.0) return ctx.fixed_event_s;
  double clip_s = double(ctx.clip_samples) / ctx.sample_rate_hz;
  return clip_s * rng.uniform(ctx.event_min_frac, ctx.event_max_frac);
}

std::vector<double> render_event(const PairContext& ctx, ClassId class_id, double duration_s,
                                 Rng& rng) {
  SourceClip clip =
      synthesize_source(class_id, duration_s, ctx.sample_rate_hz, draw_source_seed(rng, ctx.eval_split));
  if (clip.samples.size() > ctx.clip_samples)
    throw std::invalid_argument("difference op: event of " + std::to_string(clip.samples.size()) +
                                " samples is longer than the clip");
  return std::move(clip.samples);
}

// (a) Increase volume of background: add a freshly cropped background
// window, gained magnitude_db below the base background RMS, to beta only.
DiffPlan plan_inc_bg(const PairContext& ctx, const DifferenceOp& op, Rng& rng, bool swapped) {
  double clip_s = double(ctx.clip_samples) / ctx.sample_rate_hz;
  SourceClip source = synthesize_source(ctx.scene.background_class, 3.0 * clip_s,
                                        ctx.sample_rate_hz, draw_source_seed(rng, ctx.eval_split));
  std::size_t range = source.samples.size() - ctx.clip_samples + 1;
  std::size_t off = rng.uniform_index(range);
  std::vector<double> window(source.samples.begin() + off,
                             source.samples.begin() + off + ctx.clip_samples);
  double base_rms = swapped ? ctx.base_rms_alpha : ctx.base_rms_beta;
  MixLayer layer{std::move(window), 0.0, 0};
  layer.scale = scale_for_level(base_rms, layer.samples, op.magnitude_db);
  DiffPlan plan{op, std::nullopt, std::nullopt};
  (swapped ? plan.alpha_layer : plan.beta_layer) = std::move(layer);
  return plan;
}

// (c) Add sound of audio event: one event rendering at magnitude_db SNR
// against the base background, added to beta only.
DiffPlan plan_add_event(const PairContext& ctx, const DifferenceOp& op, Rng& rng, bool swapped) {
  std::vector<double> event = render_event(ctx, op.class_id, draw_event_duration(ctx, rng), rng);
  std::size_t onset = draw_onset(rng, ctx.clip_samples, event.size());
  double base_rms = swapped ? ctx.base_rms_alpha : ctx.base_rms_beta;
  MixLayer layer{std::move(event), 0.0, onset};
  layer.scale = scale_for_level(base_rms, layer.samples, op.magnitude_db);
  DiffPlan plan{op, std::nullopt, std::nullopt};
  (swapped ? plan.alpha_layer : plan.beta_layer) = std::move(layer);
  return plan;
}

// (e) Increase volume of audio event: two same-class renderings, levelled to
// a common RMS, one attenuated by magnitude_db; the louder goes to beta, the
// quieter to alpha, at the same onset.
DiffPlan plan_inc_event(const PairContext& ctx, const DifferenceOp& op, Rng& rng, bool swapped) {
  double duration = draw_event_duration(ctx, rng);
  std::vector<double> loud = render_event(ctx, op.class_id, duration, rng);
  std::vector<double> quiet = render_event(ctx, op.class_id, duration, rng);
  std::size_t max_len = std::max(loud.size(), quiet.size());
  std::size_t onset = draw_onset(rng, ctx.clip_samples, max_len);
  double rms_loud = dsp::rms(loud);
  double rms_quiet = dsp::rms(quiet);
  // Level-match the second rendering, then attenuate it, so the pair's
  // level difference is exactly magnitude_db.
  double match = rms_quiet > 0.0 ? rms_loud / rms_quiet : 0.0;
  double atten = std::pow(10.0, -op.magnitude_db / 20.0);
  MixLayer louder{std::move(loud), 1.0, onset};
  MixLayer quieter{std::move(quiet), match * atten, onset};
  DiffPlan plan{op, std::nullopt, std::nullopt};
  (swapped ? plan.beta_layer : plan.alpha_layer) = std::move(quieter);
  (swapped ? plan.alpha_layer : plan.beta_layer) = std::move(louder);
  return plan;
}

}  // namespace

const std::string& diff_kind_name(DiffKind kind) { return kKindNames[static_cast<int>(kind)]; }

DiffKind diff_kind_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == name) return static_cast<DiffKind>(i);
  throw std::invalid_argument("unknown difference kind: '" + name + "'");
}

bool is_background_kind(DiffKind kind) {
  return kind == DiffKind::IncBg || kind == DiffKind::DecBg;
}

void validate_op(const SceneSpec& scene, const DifferenceOp& op) {
  if (is_background_kind(op.kind)) {
    check_arg(op.class_id == scene.background_class,
              "difference op " + diff_kind_name(op.kind) + " must target the scene background, got " +
                  class_name(op.class_id));
  } else {
    check_arg(scene.is_event(op.class_id),
              "difference op " + diff_kind_name(op.kind) + " targets " + class_name(op.class_id) +
                  ", which is not an event class of the " + scene_name_string(scene.name) +
                  " scene");
  }
}

double MixLayer::rms_db() const {
  double r = dsp::rms(samples) * std::fabs(scale);
  check_arg(r > 0.0, "rms_db of a silent layer");
  return 20.0 * std::log10(r);
}

DiffPlan plan_difference(const PairContext& ctx, const DifferenceOp& op, Rng& rng) {
  validate_op(ctx.scene, op);
  switch (op.kind) {
    case DiffKind::IncBg: return plan_inc_bg(ctx, op, rng, false);
    case DiffKind::DecBg: return plan_inc_bg(ctx, op, rng, true);
    case DiffKind::AddEvent: return plan_add_event(ctx, op, rng, false);
    case DiffKind::RemoveEvent: return plan_add_event(ctx, op, rng, true);
    case DiffKind::IncEvent: return plan_inc_event(ctx, op, rng, false);
    case DiffKind::DecEvent: return plan_inc_event(ctx, op, rng, true);
  }
  throw std::invalid_argument("unknown difference kind");
}

void mix_plan(const DiffPlan& plan, std::vector<double>& alpha, std::vector<double>& beta) {
  auto mix_side = [](const std::optional<MixLayer>& layer, std::vector<double>& side) {
    if (!layer) return;
    dsp::add_scaled(side, layer->samples, layer->scale, layer->onset);
    for (double& v : side) v = std::clamp(v, -1.0, 1.0);
  };
  mix_side(plan.alpha_layer, alpha);
  mix_side(plan.beta_layer, beta);
}

void apply_difference(const PairContext& ctx, const DifferenceOp& op, std::vector<double>& alpha,
                      std::vector<double>& beta, Rng& rng) {
  check_arg(alpha.size() == beta.size(), "apply_difference: sides differ in length");
  check_arg(alpha.size() == ctx.clip_samples, "apply_difference: clip length mismatch");
  DiffPlan plan = plan_difference(ctx, op, rng);
  mix_plan(plan, alpha, beta);
}

std::string describe(const std::vector<DifferenceOp>& ops) {
  check_arg(!ops.empty() && ops.size() <= 2,
            "describe: expected one or two difference ops, got " + std::to_string(ops.size()));
  std::string out;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (i) out += " and ";
    const std::string& phrase = class_phrase(ops[i].class_id);
    switch (ops[i].kind) {
      case DiffKind::IncBg: out += "increase the sound of " + phrase; break;
      case DiffKind::DecBg: out += "decrease the sound of " + phrase; break;
      case DiffKind::AddEvent: out += "add " + phrase; break;
      case DiffKind::RemoveEvent: out += "remove " + phrase; break;
      case DiffKind::IncEvent: out += "make " + phrase + " louder"; break;
      case DiffKind::DecEvent: out += "make " + phrase + " lower"; break;
    }
  }
  return out;
}

std::vector<DifferenceOp> sample_ops(const SceneSpec& scene, Rng& rng) {
  std::size_t count = rng.uniform() < 0.5 ? 2 : 1;
  std::vector<ClassId> pool = scene.label_classes();
  std::vector<DifferenceOp> ops;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t pick = rng.uniform_index(pool.size());
    ClassId cls = pool[pick];
    pool.erase(pool.begin() + pick);
    DifferenceOp op;
    op.class_id = cls;
    if (cls == scene.background_class) {
      op.kind = rng.uniform() < 0.5 ? DiffKind::IncBg : DiffKind::DecBg;
      op.magnitude_db = rng.uniform(kBgGainMinDb, kBgGainMaxDb);
    } else {
      switch (rng.uniform_index(4)) {
        case 0: op.kind = DiffKind::AddEvent; break;
        case 1: op.kind = DiffKind::RemoveEvent; break;
        case 2: op.kind = DiffKind::IncEvent; break;
        default: op.kind = DiffKind::DecEvent; break;
      }
      bool level_kind = op.kind == DiffKind::IncEvent || op.kind == DiffKind::DecEvent;
      op.magnitude_db = level_kind ? rng.uniform(kEventLevelMinDb, kEventLevelMaxDb)
                                   : rng.uniform(kEventSnrMinDb, kEventSnrMaxDb);
    }
    ops.push_back(op);
  }
  return ops;
}

std::pair<std::vector<int>, std::vector<int>> labels_from_ops(
    const SceneSpec& scene, const std::vector<DifferenceOp>& ops) {
  std::vector<int> a(scene.n_classes(), 0), b(scene.n_classes(), 0);
  a[0] = b[0] = 1;  // background is always present
  for (const DifferenceOp& op : ops) {
    int idx = scene.label_index(op.class_id);
    check_arg(idx >= 0, "labels_from_ops: class not in scene");
    switch (op.kind) {
      case DiffKind::AddEvent: b[idx] = 1; break;
      case DiffKind::RemoveEvent: a[idx] = 1; break;
      case DiffKind::IncEvent:
      case DiffKind::DecEvent:
        a[idx] = 1;
        b[idx] = 1;
        break;
      case DiffKind::IncBg:
      case DiffKind::DecBg: break;  // background level changes do not alter presence
    }
  }
  return {a, b};
}

}  // namespace synth
}  // namespace audelta
