#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace audelta {

// Error raised when a required input artifact (manifest, checkpoint,
// audio file) is absent. The CLI maps it to its own exit code.
class MissingArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Error raised for invalid configuration (bad keys, bad values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

inline void check_arg(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// --- little-endian encode/decode -------------------------------------------

inline void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64le(std::string& out, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  __builtin_memcpy(&bits, &v, 8);
  put_u64le(out, bits);
}

class ByteReader {
 public:
  explicit ByteReader(const std::string& data) : data_(data) {}

  bool eof() const { return pos_ >= data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

  std::uint32_t u32le() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::uint8_t(data_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64le() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(data_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }

  double f64le() {
    std::uint64_t bits = u64le();
    double v;
    __builtin_memcpy(&v, &bits, 8);
    return v;
  }

  std::string bytes(std::size_t n) {
    require(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void require(std::size_t n) const {
    if (pos_ + n > data_.size()) throw std::runtime_error("truncated binary payload");
  }
  const std::string& data_;
  std::size_t pos_ = 0;
};

// --- files ------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory, then renames. Re-running a
// successful step overwrites its outputs with identical content.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

// Fixed-width decimal formatting for CSV artifacts (byte-identical reruns).
std::string format_fixed(double v, int digits);

}  // namespace audelta
