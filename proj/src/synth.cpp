#include "audelta/synth.hpp"

#include <algorithm>
#include <cmath>

#include "audelta/io.hpp"

namespace audelta {
namespace synth {

namespace {

constexpr double kTwoPi = 6.2831853071795864769252867665590;

// Paul Kellet's three-pole pink noise filter.
class PinkNoise {
 public:
  double next(double white) {
    b0_ = 0.99765 * b0_ + white * 0.0990460;
    b1_ = 0.96300 * b1_ + white * 0.2965164;
    b2_ = 0.57000 * b2_ + white * 1.0526913;
    return b0_ + b1_ + b2_ + white * 0.1848;
  }

 private:
  double b0_ = 0.0, b1_ = 0.0, b2_ = 0.0;
};

class OnePoleLowPass {
 public:
  OnePoleLowPass(double cutoff_hz, int sr) : a_(1.0 - std::exp(-kTwoPi * cutoff_hz / sr)) {}
  double next(double x) {
    y_ += a_ * (x - y_);
    return y_;
  }

 private:
  double a_;
  double y_ = 0.0;
};

// RBJ constant-skirt band-pass biquad.
class BandPass {
 public:
  BandPass(double center_hz, double q, int sr) {
    double w = kTwoPi * center_hz / sr;
    double alpha = std::sin(w) / (2.0 * q);
    double a0 = 1.0 + alpha;
    b0_ = alpha / a0;
    b2_ = -alpha / a0;
    a1_ = -2.0 * std::cos(w) / a0;
    a2_ = (1.0 - alpha) / a0;
  }
  double next(double x) {
    double y = b0_ * x + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double b0_, b2_, a1_, a2_;
  double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
};

double white(Rng& rng) { return 2.0 * rng.uniform() - 1.0; }

std::vector<double> render_rain(std::size_t n, int sr, Rng& rng) {
  PinkNoise pink;
  double band_fc = rng.uniform(800.0, std::min(3000.0, 0.4 * sr));
  double band_gain = rng.uniform(0.4, 1.4);
  BandPass band(band_fc, 1.2, sr);
  OnePoleLowPass lp(rng.uniform(0.55, 0.85) * 0.5 * sr, sr);
  double am_rate1 = rng.uniform(0.1, 0.5), am_rate2 = rng.uniform(0.5, 1.1);
  double am_phase1 = rng.uniform(0.0, kTwoPi), am_phase2 = rng.uniform(0.0, kTwoPi);
  double am_depth = rng.uniform(0.15, 0.4);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = double(i) / sr;
    double p = pink.next(white(rng));
    double sig = lp.next(p + band_gain * band.next(p));
    double env = 1.0 + am_depth * (0.6 * std::sin(kTwoPi * am_rate1 * t + am_phase1) +
                                   0.4 * std::sin(kTwoPi * am_rate2 * t + am_phase2));
    out[i] = sig * env;
  }
  return out;
}

std::vector<double> render_car_passing(std::size_t n, int sr, Rng& rng) {
  BandPass band(rng.uniform(150.0, 450.0), rng.uniform(0.7, 1.2), sr);
  double period = rng.uniform(5.0, 9.0);
  double phase0 = rng.uniform(0.0, 1.0);
  double width = rng.uniform(0.45, 0.7);
  double floor_level = rng.uniform(0.18, 0.3);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = double(i) / sr;
    double phase = std::fmod(t / period + phase0, 1.0);
    double env = floor_level;
    if (phase < width) {
      double bump = 0.5 - 0.5 * std::cos(kTwoPi * phase / width);
      env += (1.0 - floor_level) * bump;
    }
    out[i] = env * band.next(white(rng));
  }
  return out;
}

std::vector<double> render_dog(std::size_t n, int sr, Rng& rng) {
  std::vector<double> out(n, 0.0);
  double t = std::min(rng.uniform(0.05, 0.4), 0.2 * n / sr);
  bool first = true;
  while (true) {
    double len = rng.uniform(0.12, 0.3);
    std::size_t start = std::size_t(t * sr);
    std::size_t count = std::size_t(len * sr);
    if (start + count > n) {
      if (!first || start >= n) break;
      count = n - start;  // truncate so short clips still carry one burst
    }
    first = false;
    BandPass band(rng.uniform(380.0, 850.0), 2.0, sr);
    double amp = rng.uniform(0.7, 1.0);
    double tau = len / 4.0;
    for (std::size_t i = 0; i < count; ++i) {
      double tt = double(i) / sr;
      double attack = std::min(1.0, tt / 0.008);
      double env = attack * std::exp(-tt / tau);
      out[start + i] += amp * env * band.next(white(rng));
    }
    t += len + rng.uniform(0.25, 0.9);
  }
  return out;
}

std::vector<double> render_birds(std::size_t n, int sr, Rng& rng) {
  std::vector<double> out(n, 0.0);
  double hi_cap = 0.45 * sr;  // chirps stay below Nyquist at low rates too
  double t = std::min(rng.uniform(0.05, 0.3), 0.2 * n / sr);
  bool first = true;
  while (true) {
    int chirps = rng.uniform() < 0.4 ? 2 : 1;
    for (int c = 0; c < chirps; ++c) {
      double len = rng.uniform(0.08, 0.22);
      std::size_t start = std::size_t(t * sr);
      std::size_t count = std::size_t(len * sr);
      if (start + count > n) {
        if (!first || start >= n) return out;
        count = n - start;
      }
      first = false;
      double f0 = rng.uniform(std::min(2000.0, 0.5 * hi_cap), std::min(3200.0, 0.7 * hi_cap));
      double f1 = std::min(rng.uniform(f0 + 600.0, f0 + 2800.0), hi_cap);
      double amp = rng.uniform(0.5, 1.0);
      double phase = rng.uniform(0.0, kTwoPi);
      for (std::size_t i = 0; i < count; ++i) {
        double frac = double(i) / double(count);
        double f = f0 + (f1 - f0) * frac;
        phase += kTwoPi * f / sr;
        double env = 0.5 - 0.5 * std::cos(kTwoPi * frac);
        out[start + i] += amp * env * std::sin(phase);
      }
      t += len + 0.06;
    }
    t += rng.uniform(0.08, 0.45);
  }
}

std::vector<double> render_thunder(std::size_t n, int sr, Rng& rng) {
  std::vector<double> out(n, 0.0);
  double dur = double(n) / sr;
  int bursts = rng.uniform() < 0.5 ? 2 : 1;
  for (int b = 0; b < bursts; ++b) {
    double t0 = b == 0 ? rng.uniform(0.03, 0.15) * dur : rng.uniform(0.45, 0.7) * dur;
    double amp = b == 0 ? 1.0 : rng.uniform(0.35, 0.6);
    double cutoff = rng.uniform(60.0, 110.0);
    OnePoleLowPass lp1(cutoff, sr), lp2(cutoff, sr), lp3(cutoff, sr);
    double attack = rng.uniform(0.02, 0.05);
    double tau = std::min(0.35 * dur, rng.uniform(0.5, 1.5));
    std::size_t start = std::size_t(t0 * sr);
    for (std::size_t i = start; i < n; ++i) {
      double tt = double(i - start) / sr;
      double env = std::min(1.0, tt / attack) * std::exp(-tt / tau);
      if (env < 1e-4 && tt > attack) break;
      double x = lp3.next(lp2.next(lp1.next(white(rng))));
      out[i] += amp * env * x;
    }
  }
  return out;
}

std::vector<double> render_footsteps(std::size_t n, int sr, Rng& rng) {
  std::vector<double> out(n, 0.0);
  double period = rng.uniform(0.35, 0.65);
  double thump_hz = rng.uniform(80.0, 150.0);
  double t = rng.uniform(0.05, 0.3);
  while (true) {
    std::size_t start = std::size_t(t * sr);
    if (start >= n) break;
    double amp = rng.uniform(0.75, 1.0);
    double tau = rng.uniform(0.03, 0.07);
    double phase = rng.uniform(0.0, kTwoPi);
    std::size_t count = std::min<std::size_t>(n - start, std::size_t(6.0 * tau * sr));
    for (std::size_t i = 0; i < count; ++i) {
      double tt = double(i) / sr;
      out[start + i] += amp * std::exp(-tt / tau) * std::sin(kTwoPi * thump_hz * tt + phase);
    }
    BandPass click(std::min(1800.0, 0.4 * sr), 1.5, sr);
    std::size_t click_len = std::min<std::size_t>(n - start, std::size_t(0.01 * sr));
    for (std::size_t i = 0; i < click_len; ++i) {
      double tt = double(i) / sr;
      out[start + i] += 0.18 * amp * std::exp(-tt / 0.003) * click.next(white(rng));
    }
    t += period * rng.uniform(0.92, 1.08);
  }
  return out;
}

std::vector<double> render_car_horn(std::size_t n, int sr, Rng& rng) {
  std::vector<double> out(n, 0.0);
  constexpr double kFundamental = 440.0;
  const double partial_amp[5] = {1.0, 0.5, 0.33, 0.18, 0.08};
  double t = std::min(rng.uniform(0.05, 0.3), 0.2 * n / sr);
  bool first = true;
  while (true) {
    double len = rng.uniform(0.4, 1.2);
    std::size_t start = std::size_t(t * sr);
    std::size_t count = std::size_t(len * sr);
    if (start + count > n) {
      if (!first || start >= n) break;
      count = n - start;
      len = double(count) / sr;
    }
    first = false;
    double amp = rng.uniform(0.8, 1.0);
    double phases[5];
    for (double& p : phases) p = rng.uniform(0.0, kTwoPi);
    double ramp = 0.015;
    for (std::size_t i = 0; i < count; ++i) {
      double tt = double(i) / sr;
      double env = std::min({1.0, tt / ramp, (len - tt) / ramp});
      double s = 0.0;
      for (int k = 0; k < 5; ++k) {
        double f = kFundamental * (k + 1);
        if (f >= 0.48 * sr) break;
        s += partial_amp[k] * std::sin(kTwoPi * f * tt + phases[k]);
      }
      out[start + i] += amp * env * s;
    }
    t += len + rng.uniform(0.25, 0.8);
  }
  return out;
}

std::vector<double> render_church_bells(std::size_t n, int sr, Rng& rng) {
  std::vector<double> out(n, 0.0);
  double dur = double(n) / sr;
  const double ratios[6] = {0.56, 0.92, 1.19, 1.71, 2.0, 2.74};
  const double amps[6] = {0.9, 1.0, 0.65, 0.5, 0.35, 0.22};
  double f0 = rng.uniform(380.0, std::min(700.0, 0.15 * sr));
  double tau0 = std::min(0.5 * dur, rng.uniform(0.8, 2.0));
  double t = rng.uniform(0.02, 0.3);
  while (true) {
    std::size_t start = std::size_t(t * sr);
    if (start >= n) break;
    double strike_amp = rng.uniform(0.8, 1.0);
    double phases[6];
    for (double& p : phases) p = rng.uniform(0.0, kTwoPi);
    std::size_t count = std::min<std::size_t>(n - start, std::size_t(5.0 * tau0 * sr));
    for (std::size_t i = 0; i < count; ++i) {
      double tt = double(i) / sr;
      double s = 0.0;
      for (int k = 0; k < 6; ++k) {
        double f = f0 * ratios[k];
        if (f >= 0.45 * sr) continue;
        double tau = tau0 / std::pow(ratios[k], 0.9);
        s += amps[k] * std::exp(-tt / tau) * std::sin(kTwoPi * f * tt + phases[k]);
      }
      out[start + i] += strike_amp * s;
    }
    t += rng.uniform(1.2, 3.5);
  }
  return out;
}

}  // namespace

void peak_normalize(std::vector<double>& samples, double peak) {
  double mx = 0.0;
  for (double v : samples) mx = std::max(mx, std::fabs(v));
  if (mx <= 0.0) return;
  double s = peak / mx;
  for (double& v : samples) v *= s;
}

SourceClip synthesize_source(ClassId class_id, double duration_s, int sample_rate_hz,
                             std::uint64_t seed) {
  check_arg(duration_s > 0.0, "synthesize_source: duration must be positive");
  check_arg(sample_rate_hz > 0, "synthesize_source: sample rate must be positive");
  std::size_t n = std::size_t(duration_s * sample_rate_hz + 0.5);
  check_arg(n > 0, "synthesize_source: zero-length clip");
  Rng rng(derive_seed(seed, "source." + class_name(class_id)));
  std::vector<double> samples;
  switch (class_id) {
    case ClassId::Rain: samples = render_rain(n, sample_rate_hz, rng); break;
    case ClassId::CarPassingBy: samples = render_car_passing(n, sample_rate_hz, rng); break;
    case ClassId::Dog: samples = render_dog(n, sample_rate_hz, rng); break;
    case ClassId::ChirpingBirds: samples = render_birds(n, sample_rate_hz, rng); break;
    case ClassId::Thunder: samples = render_thunder(n, sample_rate_hz, rng); break;
    case ClassId::Footsteps: samples = render_footsteps(n, sample_rate_hz, rng); break;
    case ClassId::CarHorn: samples = render_car_horn(n, sample_rate_hz, rng); break;
    case ClassId::ChurchBells: samples = render_church_bells(n, sample_rate_hz, rng); break;
  }
  peak_normalize(samples, 0.9);
  return SourceClip{class_id, std::move(samples), sample_rate_hz, seed};
}

std::pair<std::vector<double>, std::vector<double>> crop_background(const SourceClip& clip,
                                                                    double duration_s, Rng& rng) {
  std::size_t want = std::size_t(duration_s * clip.sample_rate_hz + 0.5);
  check_arg(clip.samples.size() >= want,
            "crop_background: clip of " + std::to_string(clip.samples.size()) +
                " samples is shorter than the requested window");
  std::size_t range = clip.samples.size() - want + 1;
  std::size_t off_a = rng.uniform_index(range);
  std::size_t off_b = rng.uniform_index(range);
  auto cut = [&](std::size_t off) {
    return std::vector<double>(clip.samples.begin() + off, clip.samples.begin() + off + want);
  };
  return {cut(off_a), cut(off_b)};
}

}  // namespace synth
}  // namespace audelta
