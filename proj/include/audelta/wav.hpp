#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace audelta {

struct WavData {
  std::vector<double> samples;  // mono, in [-1, 1]
  int sample_rate_hz = 0;
};

// RIFF/WAVE, mono, 16-bit signed PCM little-endian. Floats are clamped to
// [-1, 1] and quantized by round-half-away-from-zero at scale 32767.
void write_wav(const std::filesystem::path& path, const std::vector<double>& samples,
               int sample_rate_hz);
std::string encode_wav(const std::vector<double>& samples, int sample_rate_hz);

WavData read_wav(const std::filesystem::path& path);

std::int16_t float_to_pcm16(double x);

}  // namespace audelta
