#pragma once

#include <cstdint>
#include <vector>

#include "audelta/rng.hpp"
#include "audelta/scene.hpp"

namespace audelta {
namespace synth {

// One rendered source clip. Regeneration from (class_id, source_seed) at the
// same rate and duration is bit-identical.
struct SourceClip {
  ClassId class_id;
  std::vector<double> samples;  // in [-1, 1], peak-normalized to 0.9
  int sample_rate_hz = 0;
  std::uint64_t source_seed = 0;
};

// Deterministic, class-distinctive waveform. The signatures are procedural
// stand-ins for recorded audio: amplitude-modulated pink noise for rain,
// band-passed noise with rise-fall passes for car_passing_by, band-limited
// bursts for dog, upward 2-6 kHz sweeps for chirping_birds, low-passed
// long-decay bursts for thunder, periodic damped impulses for footsteps, a
// harmonic stack on a 440 Hz fundamental for car_horn, and inharmonic
// decaying partials for church_bells.
SourceClip synthesize_source(ClassId class_id, double duration_s, int sample_rate_hz,
                             std::uint64_t seed);

// Two windows of duration_s cut from the same clip at independently random
// offsets (alpha first, then beta).
std::pair<std::vector<double>, std::vector<double>> crop_background(const SourceClip& clip,
                                                                    double duration_s, Rng& rng);

void peak_normalize(std::vector<double>& samples, double peak);

}  // namespace synth
}  // namespace audelta
