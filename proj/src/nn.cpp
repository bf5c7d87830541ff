#include "audelta/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "audelta/io.hpp"

namespace audelta {

std::string shape_string(const Tensor& t) {
  std::ostringstream ss;
  ss << "[";
  for (std::size_t i = 0; i < t.shape.size(); ++i) ss << (i ? " x " : "") << t.shape[i];
  ss << "]";
  return ss.str();
}

namespace nn {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogitClamp = 30.0;

// C[M x N] += A[M x K] * B[K x N]; i-k-j order keeps the inner loop contiguous.
void matmul_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[M x N] += A^T[M x K] * B[K x N] where A is stored [K x M].
void matmul_at_b_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                     std::size_t n) {
  for (std::size_t p = 0; p < k; ++p) {
    const double* arow = a + p * m;
    const double* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// C[M x N] += A[M x K] * B^T[K x N] where B is stored [N x K].
void matmul_a_bt_acc(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
                     std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] += acc;
    }
  }
}

}  // namespace

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  check_arg(x.shape.size() == 2 && w.shape.size() == 2 && b.shape.size() == 1,
            "linear: expected x[BxI], w[IxO], b[O]");
  check_arg(x.shape[1] == w.shape[0], "linear: inner dimensions disagree, x " + shape_string(x) +
                                          " vs w " + shape_string(w));
  check_arg(b.shape[0] == w.shape[1], "linear: bias length does not match output width");
  std::size_t batch = x.shape[0], in = x.shape[1], out = w.shape[1];
  Tensor y({batch, out});
  for (std::size_t i = 0; i < batch; ++i)
    std::copy(b.data.begin(), b.data.end(), y.data.begin() + i * out);
  matmul_acc(x.data.data(), w.data.data(), y.data.data(), batch, in, out);
  return y;
}

LinearGrads linear_backward(const Tensor& x, const Tensor& w, const Tensor& dy) {
  check_arg(dy.shape.size() == 2 && dy.shape[0] == x.shape[0] && dy.shape[1] == w.shape[1],
            "linear_backward: dy shape mismatch");
  std::size_t batch = x.shape[0], in = x.shape[1], out = w.shape[1];
  LinearGrads g;
  g.dx = Tensor({batch, in});
  g.dw = Tensor({in, out});
  g.db = Tensor({out});
  matmul_a_bt_acc(dy.data.data(), w.data.data(), g.dx.data.data(), batch, out, in);
  matmul_at_b_acc(x.data.data(), dy.data.data(), g.dw.data.data(), in, batch, out);
  for (std::size_t i = 0; i < batch; ++i)
    for (std::size_t j = 0; j < out; ++j) g.db.data[j] += dy.data[i * out + j];
  return g;
}

Tensor gelu(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) {
    double phi = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
    v = v * phi;
  }
  return y;
}

Tensor gelu_backward(const Tensor& x, const Tensor& dy) {
  check_arg(x.same_shape(dy), "gelu_backward: shape mismatch");
  Tensor dx = x;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    double v = x.data[i];
    double cdf = 0.5 * (1.0 + std::erf(v * kInvSqrt2));
    double pdf = kInvSqrt2Pi * std::exp(-0.5 * v * v);
    dx.data[i] = dy.data[i] * (cdf + v * pdf);
  }
  return dx;
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps,
                  LayerNormCache* cache) {
  check_arg(x.shape.size() == 2, "layer_norm: expected 2-D input");
  std::size_t batch = x.shape[0], dim = x.shape[1];
  check_arg(gamma.numel() == dim && beta.numel() == dim, "layer_norm: affine size mismatch");
  check_arg(dim >= 1, "layer_norm: empty rows");
  Tensor y({batch, dim});
  Tensor xhat({batch, dim});
  std::vector<double> inv_std(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    const double* row = x.data.data() + i * dim;
    double mean = std::accumulate(row, row + dim, 0.0) / double(dim);
    double var = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double d = row[j] - mean;
      var += d * d;
    }
    var /= double(dim);  // biased
    double is = 1.0 / std::sqrt(var + eps);
    inv_std[i] = is;
    for (std::size_t j = 0; j < dim; ++j) {
      double xh = (row[j] - mean) * is;
      xhat.data[i * dim + j] = xh;
      y.data[i * dim + j] = gamma.data[j] * xh + beta.data[j];
    }
  }
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

LayerNormGrads layer_norm_backward(const LayerNormCache& cache, const Tensor& gamma,
                                   const Tensor& dy) {
  std::size_t batch = cache.xhat.shape[0], dim = cache.xhat.shape[1];
  check_arg(dy.shape == cache.xhat.shape, "layer_norm_backward: dy shape mismatch");
  LayerNormGrads g;
  g.dx = Tensor({batch, dim});
  g.dgamma = Tensor({dim});
  g.dbeta = Tensor({dim});
  for (std::size_t i = 0; i < batch; ++i) {
    const double* xh = cache.xhat.data.data() + i * dim;
    const double* dyr = dy.data.data() + i * dim;
    double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double dxh = dyr[j] * gamma.data[j];
      sum_dxhat += dxh;
      sum_dxhat_xhat += dxh * xh[j];
      g.dgamma.data[j] += dyr[j] * xh[j];
      g.dbeta.data[j] += dyr[j];
    }
    double inv_n = 1.0 / double(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      double dxh = dyr[j] * gamma.data[j];
      g.dx.data[i * dim + j] =
          cache.inv_std[i] * (dxh - inv_n * sum_dxhat - xh[j] * inv_n * sum_dxhat_xhat);
    }
  }
  return g;
}

Tensor dropout(const Tensor& x, double p, Rng& rng, bool train, DropoutMask* mask) {
  check_arg(p >= 0.0 && p < 1.0, "dropout: p must be in [0, 1)");
  if (mask) {
    mask->p = p;
    mask->train = train;
    mask->keep.assign(x.numel(), 1);
  }
  if (!train || p == 0.0) return x;
  Tensor y = x;
  double scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < y.data.size(); ++i) {
    bool keep = rng.uniform() >= p;
    if (mask) mask->keep[i] = keep ? 1 : 0;
    y.data[i] = keep ? y.data[i] * scale : 0.0;
  }
  return y;
}

Tensor dropout_backward(const DropoutMask& mask, const Tensor& dy) {
  if (!mask.train || mask.p == 0.0) return dy;
  check_arg(mask.keep.size() == dy.numel(), "dropout_backward: mask size mismatch");
  Tensor dx = dy;
  double scale = 1.0 / (1.0 - mask.p);
  for (std::size_t i = 0; i < dx.data.size(); ++i)
    dx.data[i] = mask.keep[i] ? dx.data[i] * scale : 0.0;
  return dx;
}

Tensor sigmoid_clamped(const Tensor& logits) {
  Tensor p = logits;
  for (double& v : p.data) {
    double z = std::clamp(v, -kLogitClamp, kLogitClamp);
    v = 1.0 / (1.0 + std::exp(-z));
  }
  return p;
}

Tensor sigmoid_clamped_backward(const Tensor& logits, const Tensor& p, const Tensor& dp) {
  check_arg(logits.same_shape(dp) && logits.same_shape(p),
            "sigmoid_clamped_backward: shape mismatch");
  Tensor dz = dp;
  for (std::size_t i = 0; i < dz.data.size(); ++i) {
    double z = logits.data[i];
    if (z <= -kLogitClamp || z >= kLogitClamp) {
      dz.data[i] = 0.0;  // clamp region: the implemented function is constant
    } else {
      dz.data[i] = dp.data[i] * p.data[i] * (1.0 - p.data[i]);
    }
  }
  return dz;
}

double bce(const Tensor& p, const Tensor& y) {
  check_arg(p.same_shape(y), "bce: shape mismatch");
  check_arg(p.shape.size() == 2, "bce: expected [B x C]");
  for (double t : y.data)
    check_arg(t == 0.0 || t == 1.0, "bce: labels must be exactly 0 or 1");
  std::size_t batch = p.shape[0];
  double total = 0.0;
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    double pi = p.data[i];
    total -= y.data[i] * std::log(pi) + (1.0 - y.data[i]) * std::log(1.0 - pi);
  }
  return total / double(batch);  // mean over batch, sum over classes
}

Tensor bce_backward(const Tensor& p, const Tensor& y, double dloss) {
  Tensor dp = p;
  double inv_b = dloss / double(p.shape[0]);
  for (std::size_t i = 0; i < p.data.size(); ++i) {
    double pi = p.data[i];
    dp.data[i] = inv_b * (-y.data[i] / pi + (1.0 - y.data[i]) / (1.0 - pi));
  }
  return dp;
}

Tensor& ParamStore::create(const std::string& name, Tensor init) {
  check_arg(!contains(name), "parameter already registered: " + name);
  ParamEntry e;
  e.grad = Tensor(init.shape);
  e.adam_m = Tensor(init.shape);
  e.adam_v = Tensor(init.shape);
  e.value = std::move(init);
  return entries_.emplace(name, std::move(e)).first->second.value;
}

Tensor& ParamStore::value(const std::string& name) {
  auto it = entries_.find(name);
  check_arg(it != entries_.end(), "unknown parameter: " + name);
  return it->second.value;
}

const Tensor& ParamStore::value(const std::string& name) const {
  auto it = entries_.find(name);
  check_arg(it != entries_.end(), "unknown parameter: " + name);
  return it->second.value;
}

Tensor& ParamStore::grad(const std::string& name) {
  auto it = entries_.find(name);
  check_arg(it != entries_.end(), "unknown parameter: " + name);
  return it->second.grad;
}

void ParamStore::zero_grads() {
  for (auto& [name, e] : entries_) e.grad.fill(0.0);
}

std::vector<std::string> ParamStore::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

std::size_t ParamStore::total_size() const {
  std::size_t n = 0;
  for (const auto& [name, e] : entries_) n += e.value.numel();
  return n;
}

void adam_step(ParamStore& store, const AdamConfig& cfg) {
  std::uint64_t t = store.step_count() + 1;
  double bc1 = 1.0 - std::pow(cfg.beta1, double(t));
  double bc2 = 1.0 - std::pow(cfg.beta2, double(t));
  for (auto& [name, e] : store.entries()) {
    check_arg(e.grad.same_shape(e.value), "adam_step: missing or misshapen gradient for " + name);
    for (std::size_t i = 0; i < e.value.numel(); ++i) {
      double g = e.grad.data[i];
      e.adam_m.data[i] = cfg.beta1 * e.adam_m.data[i] + (1.0 - cfg.beta1) * g;
      e.adam_v.data[i] = cfg.beta2 * e.adam_v.data[i] + (1.0 - cfg.beta2) * g * g;
      double mhat = e.adam_m.data[i] / bc1;
      double vhat = e.adam_v.data[i] / bc2;
      e.value.data[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
  store.set_step_count(t);
}

double finite_diff_check(ParamStore& store, const std::function<double()>& loss_fn, double h,
                         std::size_t max_coords, std::uint64_t seed) {
  struct Coord {
    std::string name;
    std::size_t idx;
  };
  std::vector<Coord> coords;
  for (const auto& [name, e] : store.entries())
    for (std::size_t i = 0; i < e.value.numel(); ++i) coords.push_back({name, i});

  if (coords.size() > max_coords) {
    Rng rng(derive_seed(seed, "finite-diff-subset"));
    for (std::size_t i = 0; i < max_coords; ++i) {
      std::size_t j = i + rng.uniform_index(coords.size() - i);
      std::swap(coords[i], coords[j]);
    }
    coords.resize(max_coords);
  }

  double max_rel = 0.0;
  for (const Coord& c : coords) {
    Tensor& v = store.value(c.name);
    double original = v.data[c.idx];
    v.data[c.idx] = original + h;
    double f_plus = loss_fn();
    v.data[c.idx] = original - h;
    double f_minus = loss_fn();
    v.data[c.idx] = original;
    double numeric = (f_plus - f_minus) / (2.0 * h);
    double analytic = store.grad(c.name).data[c.idx];
    double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
    max_rel = std::max(max_rel, std::fabs(analytic - numeric) / denom);
  }
  return max_rel;
}

}  // namespace nn
}  // namespace audelta
