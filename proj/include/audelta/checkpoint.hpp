#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "audelta/nn.hpp"
#include "audelta/tensor.hpp"

namespace audelta {

// Checkpoint container. On disk: magic "ADIF", format version u32, then
// repeated records until EOF. One record is
//   name length u32 | name UTF-8 | ndim u32 | dims u64 each | data f64 each
// everything little-endian. Trainable parameters are stored under their bare
// names, Adam state under "adam.m.<name>" / "adam.v.<name>" / "adam.step",
// frozen tensors under "frozen.*", scalar metadata under "meta.*", and the
// encoder vocabulary as an ordered run of empty records "vocab.<token>"
// (ndim 1, dims [0]), preserving file order.
class Checkpoint {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  void add(std::string name, Tensor t) { records_.emplace_back(std::move(name), std::move(t)); }
  void add_scalar(std::string name, double v) {
    add(std::move(name), Tensor({1}, {v}));
  }

  const Tensor* find(const std::string& name) const;
  double scalar(const std::string& name) const;
  std::optional<double> scalar_opt(const std::string& name) const;

  const std::vector<std::pair<std::string, Tensor>>& records() const { return records_; }

  // Parameter + Adam state round trip.
  void add_param_store(const nn::ParamStore& store);
  void restore_param_store(nn::ParamStore& store) const;

  // Vocabulary round trip ("vocab.<token>" records, file order).
  void add_vocab(const std::vector<std::string>& tokens);
  std::vector<std::string> vocab_tokens() const;

  std::string serialize() const;
  static Checkpoint deserialize(const std::string& bytes);

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, Tensor>> records_;
};

}  // namespace audelta
