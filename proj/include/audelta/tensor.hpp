#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "audelta/rng.hpp"

namespace audelta {

// Dense row-major tensor of 64-bit floats. Desk scale is small, so
// everything is double precision; the gradient checks depend on it.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)), data(numel_of(shape), 0.0) {}
  Tensor(std::vector<std::size_t> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {}

  static std::size_t numel_of(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
  }

  std::size_t numel() const { return data.size(); }
  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }

  double& at(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

  static Tensor full(std::vector<std::size_t> s, double v) {
    Tensor t(std::move(s));
    t.fill(v);
    return t;
  }

  static Tensor gaussian(std::vector<std::size_t> s, double stddev, Rng& rng) {
    Tensor t(std::move(s));
    for (double& x : t.data) x = stddev * rng.normal();
    return t;
  }
};

std::string shape_string(const Tensor& t);

}  // namespace audelta
