#include "audelta/checkpoint.hpp"

#include <cstring>

#include "audelta/io.hpp"

namespace audelta {

namespace {
constexpr char kMagic[4] = {'A', 'D', 'I', 'F'};
constexpr const char* kVocabPrefix = "vocab.";
}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : records_)
    if (n == name) return &t;
  return nullptr;
}

double Checkpoint::scalar(const std::string& name) const {
  const Tensor* t = find(name);
  check(t != nullptr && t->numel() == 1, "checkpoint: missing scalar record " + name);
  return t->data[0];
}

std::optional<double> Checkpoint::scalar_opt(const std::string& name) const {
  const Tensor* t = find(name);
  if (!t || t->numel() != 1) return std::nullopt;
  return t->data[0];
}

void Checkpoint::add_param_store(const nn::ParamStore& store) {
  for (const auto& [name, e] : store.entries()) add(name, e.value);
  for (const auto& [name, e] : store.entries()) add("adam.m." + name, e.adam_m);
  for (const auto& [name, e] : store.entries()) add("adam.v." + name, e.adam_v);
  add_scalar("adam.step", static_cast<double>(store.step_count()));
}

void Checkpoint::restore_param_store(nn::ParamStore& store) const {
  for (auto& [name, e] : store.entries()) {
    const Tensor* value = find(name);
    check(value != nullptr, "checkpoint: missing parameter " + name);
    check(value->shape == e.value.shape, "checkpoint: shape mismatch for " + name);
    e.value = *value;
    if (const Tensor* m = find("adam.m." + name)) e.adam_m = *m;
    if (const Tensor* v = find("adam.v." + name)) e.adam_v = *v;
  }
  if (auto step = scalar_opt("adam.step")) store.set_step_count(std::uint64_t(*step));
}

void Checkpoint::add_vocab(const std::vector<std::string>& tokens) {
  for (const std::string& tok : tokens) add(kVocabPrefix + tok, Tensor({0}));
}

std::vector<std::string> Checkpoint::vocab_tokens() const {
  std::vector<std::string> out;
  for (const auto& [name, t] : records_)
    if (name.rfind(kVocabPrefix, 0) == 0) out.push_back(name.substr(std::strlen(kVocabPrefix)));
  return out;
}

std::string Checkpoint::serialize() const {
  std::string out;
  out.append(kMagic, 4);
  put_u32le(out, kFormatVersion);
  for (const auto& [name, t] : records_) {
    put_u32le(out, static_cast<std::uint32_t>(name.size()));
    out.append(name);
    put_u32le(out, static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) put_u64le(out, d);
    for (double v : t.data) put_f64le(out, v);
  }
  return out;
}

Checkpoint Checkpoint::deserialize(const std::string& bytes) {
  check(bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 4) == 0,
        "checkpoint: bad magic bytes");
  ByteReader r(bytes);
  r.bytes(4);
  std::uint32_t version = r.u32le();
  check(version == kFormatVersion, "checkpoint: unsupported format version");
  Checkpoint ckpt;
  while (!r.eof()) {
    std::uint32_t name_len = r.u32le();
    std::string name = r.bytes(name_len);
    std::uint32_t ndim = r.u32le();
    std::vector<std::size_t> shape(ndim);
    for (std::uint32_t i = 0; i < ndim; ++i) shape[i] = static_cast<std::size_t>(r.u64le());
    std::size_t numel = ndim == 0 ? 1 : Tensor::numel_of(shape);
    Tensor t(shape);
    t.data.resize(numel);
    for (std::size_t i = 0; i < numel; ++i) t.data[i] = r.f64le();
    ckpt.add(std::move(name), std::move(t));
  }
  return ckpt;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  atomic_write_file(path, serialize());
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  return deserialize(read_file(path));
}

}  // namespace audelta
