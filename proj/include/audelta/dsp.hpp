#pragma once

#include <filesystem>
#include <vector>

#include "audelta/tensor.hpp"

namespace audelta {
namespace dsp {

// Power spectrogram: [n_frames x n_bins], n_bins = fft_size/2 + 1.
struct Spectrogram {
  Tensor frames;
  double hop_s = 0.0;
  double win_s = 0.0;
  int sample_rate_hz = 0;
  std::size_t n_frames() const { return frames.rows(); }
  std::size_t n_bins() const { return frames.cols(); }
};

struct LogMelPatch {
  Tensor values;  // [n_frames x n_mels]
  double hop_s = 0.0;
  double win_s = 0.0;
  int sample_rate_hz = 0;
  std::size_t n_frames() const { return values.rows(); }
  std::size_t n_mels() const { return values.cols(); }
};

// Front-end defaults: 25 ms / 10 ms at 16 kHz, 64 mel bands.
struct DspConfig {
  int fft_size = 512;
  int win_length = 400;
  int hop_length = 160;
  int n_mels = 64;
  double f_min = 60.0;
  double f_max = 0.0;  // 0 means Nyquist

  double effective_f_max(int sample_rate_hz) const {
    return f_max > 0.0 ? f_max : sample_rate_hz / 2.0;
  }
};

// Hann-windowed, non-centered framing (no padding); power = |DFT|^2.
// win_length = 0 means win_length = fft_size. fft_size must be a power of
// two; frames shorter than win_length are never emitted.
Spectrogram stft_power(const std::vector<double>& waveform, int sample_rate_hz, int fft_size,
                       int hop_length, int win_length = 0);

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters (peak 1) on the HTK mel scale; rows are nonnegative
// and each row has at least one positive entry, otherwise the bank is
// infeasible for the requested resolution and an error is raised.
Tensor mel_filterbank(int n_mels, int fft_size, int sample_rate_hz, double f_min, double f_max);

// values = ln(max(spec x fb^T, floor))
LogMelPatch log_mel(const Spectrogram& spec, const Tensor& fb, double floor = 1e-10);

LogMelPatch waveform_to_log_mel(const std::vector<double>& waveform, int sample_rate_hz,
                                const DspConfig& cfg);

// Per-mel-bin temporal statistics: first n_mels entries are the max over
// frames, the next n_mels the mean.
std::vector<double> pool_stats(const LogMelPatch& patch);

double rms(const std::vector<double>& waveform);
double rms_db(const std::vector<double>& waveform);

// Scale factor s such that rms_db(base) - rms_db(s * layer) = snr_db.
double snr_scale(const std::vector<double>& base, const std::vector<double>& layer,
                 double snr_db);

// dst[i + onset] += scale * layer[i]; the layer must fit.
void add_scaled(std::vector<double>& dst, const std::vector<double>& layer, double scale,
                std::size_t onset = 0);

// Layer rescaled to the requested SNR against base, then added (onset 0).
// A silent layer leaves base unchanged; a silent base is an error.
std::vector<double> mix_at_snr(const std::vector<double>& base, const std::vector<double>& layer,
                               double snr_db);

// Optional on-disk cache: 16-byte header (n_frames u64 LE, n_mels u64 LE)
// followed by row-major f64 little-endian values.
void save_patch_cache(const std::filesystem::path& path, const LogMelPatch& patch);
LogMelPatch load_patch_cache(const std::filesystem::path& path);

}  // namespace dsp
}  // namespace audelta
