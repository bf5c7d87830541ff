#include "audelta/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "audelta/io.hpp"

namespace audelta {
namespace dsp {

namespace {

constexpr double kTwoPi = 6.2831853071795864769252867665590;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 complex FFT with a precomputed plan; one plan is built
// per stft_power call and shared across frames.
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    check_arg(is_power_of_two(int(n)), "fft size must be a power of two");
    levels_ = 0;
    while ((std::size_t(1) << levels_) < n_) ++levels_;
    rev_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0;
      for (unsigned b = 0; b < levels_; ++b) r |= ((i >> b) & 1) << (levels_ - 1 - b);
      rev_[i] = r;
    }
    cos_.resize(n_ / 2);
    sin_.resize(n_ / 2);
    for (std::size_t i = 0; i < n_ / 2; ++i) {
      cos_[i] = std::cos(kTwoPi * double(i) / double(n_));
      sin_[i] = std::sin(kTwoPi * double(i) / double(n_));
    }
  }

  // In-place forward transform of (re, im).
  void forward(std::vector<double>& re, std::vector<double>& im) const {
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t j = rev_[i];
      if (j > i) {
        std::swap(re[i], re[j]);
        std::swap(im[i], im[j]);
      }
    }
    for (std::size_t size = 2; size <= n_; size <<= 1) {
      std::size_t half = size / 2;
      std::size_t step = n_ / size;
      for (std::size_t start = 0; start < n_; start += size) {
        for (std::size_t k = 0; k < half; ++k) {
          std::size_t even = start + k;
          std::size_t odd = even + half;
          double wr = cos_[k * step];
          double wi = -sin_[k * step];
          double tr = re[odd] * wr - im[odd] * wi;
          double ti = re[odd] * wi + im[odd] * wr;
          re[odd] = re[even] - tr;
          im[odd] = im[even] - ti;
          re[even] += tr;
          im[even] += ti;
        }
      }
    }
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  unsigned levels_;
  std::vector<std::size_t> rev_;
  std::vector<double> cos_, sin_;
};

}  // namespace

Spectrogram stft_power(const std::vector<double>& waveform, int sample_rate_hz, int fft_size,
                       int hop_length, int win_length) {
  if (win_length == 0) win_length = fft_size;
  check_arg(is_power_of_two(fft_size), "stft_power: fft_size must be a power of two");
  check_arg(hop_length > 0 && hop_length <= fft_size, "stft_power: need 0 < hop <= fft_size");
  check_arg(win_length > 0 && win_length <= fft_size, "stft_power: need 0 < win <= fft_size");
  check_arg(sample_rate_hz > 0, "stft_power: sample rate must be positive");
  if (waveform.size() < std::size_t(win_length))
    throw std::invalid_argument("stft_power: waveform shorter than one analysis window");

  const std::size_t n = fft_size;
  const std::size_t n_bins = n / 2 + 1;
  const std::size_t n_frames = (waveform.size() - win_length) / hop_length + 1;

  std::vector<double> window(win_length);
  for (int i = 0; i < win_length; ++i)
    window[i] = 0.5 - 0.5 * std::cos(kTwoPi * double(i) / double(win_length));

  Fft fft(n);
  Spectrogram out;
  out.frames = Tensor({n_frames, n_bins});
  out.hop_s = double(hop_length) / sample_rate_hz;
  out.win_s = double(win_length) / sample_rate_hz;
  out.sample_rate_hz = sample_rate_hz;

  std::vector<double> re(n), im(n);
  // Two real frames per complex transform.
  for (std::size_t f = 0; f < n_frames; f += 2) {
    bool pair = f + 1 < n_frames;
    std::fill(re.begin(), re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    const double* x0 = waveform.data() + f * hop_length;
    for (int i = 0; i < win_length; ++i) re[i] = x0[i] * window[i];
    if (pair) {
      const double* x1 = waveform.data() + (f + 1) * hop_length;
      for (int i = 0; i < win_length; ++i) im[i] = x1[i] * window[i];
    }
    fft.forward(re, im);
    double* row0 = out.frames.data.data() + f * n_bins;
    double* row1 = pair ? out.frames.data.data() + (f + 1) * n_bins : nullptr;
    for (std::size_t k = 0; k < n_bins; ++k) {
      std::size_t kc = (n - k) & (n - 1);  // N-k mod N
      double ar = 0.5 * (re[k] + re[kc]);
      double ai = 0.5 * (im[k] - im[kc]);
      row0[k] = ar * ar + ai * ai;
      if (row1) {
        double br = 0.5 * (im[k] + im[kc]);
        double bi = 0.5 * (re[kc] - re[k]);
        row1[k] = br * br + bi * bi;
      }
    }
  }
  return out;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Tensor mel_filterbank(int n_mels, int fft_size, int sample_rate_hz, double f_min, double f_max) {
  check_arg(n_mels >= 2, "mel_filterbank: need at least 2 mel bands");
  check_arg(is_power_of_two(fft_size), "mel_filterbank: fft_size must be a power of two");
  check_arg(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate_hz / 2.0 + 1e-9,
            "mel_filterbank: need 0 <= f_min < f_max <= Nyquist");
  const std::size_t n_bins = std::size_t(fft_size) / 2 + 1;
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i)
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * double(i) / double(n_mels + 1));

  Tensor fb({std::size_t(n_mels), n_bins});
  const double bin_hz = double(sample_rate_hz) / double(fft_size);
  for (int m = 0; m < n_mels; ++m) {
    double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    bool any = false;
    for (std::size_t k = 0; k < n_bins; ++k) {
      double f = k * bin_hz;
      double w = 0.0;
      if (f > lo && f < hi)
        w = f <= center ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
      if (w > 0.0) any = true;
      fb.at(m, k) = w;
    }
    if (!any)
      throw std::invalid_argument(
          "mel_filterbank: filter " + std::to_string(m) +
          " captures no FFT bin; fewer mel bands or a larger fft_size is required");
  }
  return fb;
}

LogMelPatch log_mel(const Spectrogram& spec, const Tensor& fb, double floor) {
  check_arg(fb.shape.size() == 2 && fb.cols() == spec.n_bins(),
            "log_mel: filterbank has " + std::to_string(fb.cols()) + " bins, spectrogram has " +
                std::to_string(spec.n_bins()));
  check_arg(floor > 0.0, "log_mel: floor must be positive");
  const std::size_t n_mels = fb.rows();
  const std::size_t n_bins = fb.cols();
  const std::size_t n_frames = spec.n_frames();

  // Triangular rows are narrow; a span representation avoids the dense product.
  struct Span {
    std::size_t begin, end;
  };
  std::vector<Span> spans(n_mels);
  for (std::size_t m = 0; m < n_mels; ++m) {
    std::size_t b = 0, e = n_bins;
    while (b < n_bins && fb.at(m, b) == 0.0) ++b;
    while (e > b && fb.at(m, e - 1) == 0.0) --e;
    spans[m] = {b, e};
  }

  LogMelPatch out;
  out.values = Tensor({n_frames, n_mels});
  out.hop_s = spec.hop_s;
  out.win_s = spec.win_s;
  out.sample_rate_hz = spec.sample_rate_hz;
  for (std::size_t f = 0; f < n_frames; ++f) {
    const double* p = spec.frames.data.data() + f * n_bins;
    double* row = out.values.data.data() + f * n_mels;
    for (std::size_t m = 0; m < n_mels; ++m) {
      double acc = 0.0;
      const double* w = fb.data.data() + m * n_bins;
      for (std::size_t k = spans[m].begin; k < spans[m].end; ++k) acc += w[k] * p[k];
      row[m] = std::log(std::max(acc, floor));
    }
  }
  return out;
}

LogMelPatch waveform_to_log_mel(const std::vector<double>& waveform, int sample_rate_hz,
                                const DspConfig& cfg) {
  Spectrogram spec =
      stft_power(waveform, sample_rate_hz, cfg.fft_size, cfg.hop_length, cfg.win_length);
  Tensor fb = mel_filterbank(cfg.n_mels, cfg.fft_size, sample_rate_hz, cfg.f_min,
                             cfg.effective_f_max(sample_rate_hz));
  return log_mel(spec, fb);
}

std::vector<double> pool_stats(const LogMelPatch& patch) {
  const std::size_t n_frames = patch.n_frames();
  const std::size_t n_mels = patch.n_mels();
  check_arg(n_frames >= 1, "pool_stats: empty patch");
  std::vector<double> out(2 * n_mels);
  for (std::size_t m = 0; m < n_mels; ++m) {
    double mx = patch.values.at(0, m);
    double sum = 0.0;
    for (std::size_t f = 0; f < n_frames; ++f) {
      double v = patch.values.at(f, m);
      mx = std::max(mx, v);
      sum += v;
    }
    out[m] = mx;
    out[n_mels + m] = sum / double(n_frames);
  }
  return out;
}

double rms(const std::vector<double>& waveform) {
  if (waveform.empty()) return 0.0;
  double acc = 0.0;
  for (double v : waveform) acc += v * v;
  return std::sqrt(acc / double(waveform.size()));
}

double rms_db(const std::vector<double>& waveform) {
  double r = rms(waveform);
  check_arg(r > 0.0, "rms_db: silent signal has no finite level");
  return 20.0 * std::log10(r);
}

double snr_scale(const std::vector<double>& base, const std::vector<double>& layer,
                 double snr_db) {
  double base_rms = rms(base);
  check_arg(base_rms > 0.0, "snr_scale: base signal is silent");
  double layer_rms = rms(layer);
  if (layer_rms == 0.0) return 0.0;
  return base_rms / (layer_rms * std::pow(10.0, snr_db / 20.0));
}

void add_scaled(std::vector<double>& dst, const std::vector<double>& layer, double scale,
                std::size_t onset) {
  check_arg(onset + layer.size() <= dst.size(), "add_scaled: layer does not fit");
  for (std::size_t i = 0; i < layer.size(); ++i) dst[onset + i] += scale * layer[i];
}

std::vector<double> mix_at_snr(const std::vector<double>& base, const std::vector<double>& layer,
                               double snr_db) {
  check_arg(layer.size() <= base.size(), "mix_at_snr: layer longer than base");
  std::vector<double> out = base;
  double s = snr_scale(base, layer, snr_db);
  if (s != 0.0) add_scaled(out, layer, s);
  return out;
}

void save_patch_cache(const std::filesystem::path& path, const LogMelPatch& patch) {
  std::string bytes;
  bytes.reserve(16 + patch.values.numel() * 8);
  put_u64le(bytes, patch.n_frames());
  put_u64le(bytes, patch.n_mels());
  for (double v : patch.values.data) put_f64le(bytes, v);
  atomic_write_file(path, bytes);
}

LogMelPatch load_patch_cache(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  ByteReader r(bytes);
  std::size_t n_frames = r.u64le();
  std::size_t n_mels = r.u64le();
  LogMelPatch patch;
  patch.values = Tensor({n_frames, n_mels});
  for (double& v : patch.values.data) v = r.f64le();
  return patch;
}

}  // namespace dsp
}  // namespace audelta
