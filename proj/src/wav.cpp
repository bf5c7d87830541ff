#include "audelta/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "audelta/io.hpp"

namespace audelta {

std::int16_t float_to_pcm16(double x) {
  double clamped = std::clamp(x, -1.0, 1.0) * 32767.0;
  double rounded = clamped >= 0.0 ? std::floor(clamped + 0.5) : std::ceil(clamped - 0.5);
  return static_cast<std::int16_t>(rounded);
}

std::string encode_wav(const std::vector<double>& samples, int sample_rate_hz) {
  check_arg(sample_rate_hz > 0, "encode_wav: sample rate must be positive");
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out.append("RIFF");
  put_u32le(out, 36 + data_bytes);
  out.append("WAVE");
  out.append("fmt ");
  put_u32le(out, 16);
  out.push_back(1);  // PCM
  out.push_back(0);
  out.push_back(1);  // mono
  out.push_back(0);
  put_u32le(out, static_cast<std::uint32_t>(sample_rate_hz));
  put_u32le(out, static_cast<std::uint32_t>(sample_rate_hz * 2));  // byte rate
  out.push_back(2);  // block align
  out.push_back(0);
  out.push_back(16);  // bits per sample
  out.push_back(0);
  out.append("data");
  put_u32le(out, data_bytes);
  for (double s : samples) {
    std::int16_t v = float_to_pcm16(s);
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const std::vector<double>& samples,
               int sample_rate_hz) {
  atomic_write_file(path, encode_wav(samples, sample_rate_hz));
}

WavData read_wav(const std::filesystem::path& path) {
  std::string bytes = read_file(path);
  check(bytes.size() >= 44 && bytes.compare(0, 4, "RIFF") == 0 && bytes.compare(8, 4, "WAVE") == 0,
        "not a RIFF/WAVE file: " + path.string());
  ByteReader r(bytes);
  r.bytes(12);
  WavData wav;
  int bits = 0, channels = 0, format = 0;
  bool got_fmt = false;
  while (r.remaining() >= 8) {
    std::string id = r.bytes(4);
    std::uint32_t size = r.u32le();
    if (id == "fmt ") {
      check(size >= 16, "wav: malformed fmt chunk");
      std::string chunk = r.bytes(size);
      format = std::uint8_t(chunk[0]) | (std::uint8_t(chunk[1]) << 8);
      channels = std::uint8_t(chunk[2]) | (std::uint8_t(chunk[3]) << 8);
      wav.sample_rate_hz = std::uint8_t(chunk[4]) | (std::uint8_t(chunk[5]) << 8) |
                           (std::uint8_t(chunk[6]) << 16) | (std::uint8_t(chunk[7]) << 24);
      bits = std::uint8_t(chunk[14]) | (std::uint8_t(chunk[15]) << 8);
      got_fmt = true;
    } else if (id == "data") {
      check(got_fmt, "wav: data chunk before fmt");
      check(format == 1 && channels == 1 && bits == 16,
            "unsupported wav encoding (need mono 16-bit PCM): " + path.string());
      std::size_t n = std::min<std::size_t>(size, r.remaining()) / 2;
      wav.samples.resize(n);
      std::string data = r.bytes(n * 2);
      for (std::size_t i = 0; i < n; ++i) {
        std::int16_t v = static_cast<std::int16_t>(std::uint8_t(data[2 * i]) |
                                                   (std::uint8_t(data[2 * i + 1]) << 8));
        wav.samples[i] = static_cast<double>(v) / 32767.0;
      }
      return wav;
    } else {
      r.bytes(std::min<std::size_t>(size + (size & 1), r.remaining()));
    }
  }
  throw std::runtime_error("wav: no data chunk in " + path.string());
}

}  // namespace audelta
