#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace dflux {

/// Runtime-sized vector with inline storage. Solution states and parameter
/// vectors are tiny (a handful of components) and are created in the inner
/// loops of the solver, so they never touch the heap.
template <std::size_t Capacity>
class FixedVec {
 public:
  static constexpr std::size_t kCapacity = Capacity;

  FixedVec() = default;

  explicit FixedVec(std::size_t n, double fill = 0.0) : size_(n) {
    if (n > Capacity) throw std::length_error("FixedVec: size exceeds capacity");
    std::fill_n(data_.begin(), n, fill);
  }

  FixedVec(std::initializer_list<double> values) : size_(values.size()) {
    if (values.size() > Capacity) throw std::length_error("FixedVec: size exceeds capacity");
    std::copy(values.begin(), values.end(), data_.begin());
  }

  explicit FixedVec(std::span<const double> values) : size_(values.size()) {
    if (values.size() > Capacity) throw std::length_error("FixedVec: size exceeds capacity");
    std::copy(values.begin(), values.end(), data_.begin());
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  double& operator[](std::size_t i) {
    assert(i < size_);
    return data_[i];
  }
  double operator[](std::size_t i) const {
    assert(i < size_);
    return data_[i];
  }

  double* begin() { return data_.data(); }
  double* end() { return data_.data() + size_; }
  const double* begin() const { return data_.data(); }
  const double* end() const { return data_.data() + size_; }

  std::span<double> span() { return {data_.data(), size_}; }
  std::span<const double> span() const { return {data_.data(), size_}; }

  FixedVec& operator+=(const FixedVec& other) {
    assert(other.size_ == size_);
    for (std::size_t i = 0; i < size_; ++i) data_[i] += other.data_[i];
    return *this;
  }
  FixedVec& operator-=(const FixedVec& other) {
    assert(other.size_ == size_);
    for (std::size_t i = 0; i < size_; ++i) data_[i] -= other.data_[i];
    return *this;
  }
  FixedVec& operator*=(double s) {
    for (std::size_t i = 0; i < size_; ++i) data_[i] *= s;
    return *this;
  }

  friend FixedVec operator+(FixedVec a, const FixedVec& b) { return a += b; }
  friend FixedVec operator-(FixedVec a, const FixedVec& b) { return a -= b; }
  friend FixedVec operator*(double s, FixedVec a) { return a *= s; }
  friend FixedVec operator*(FixedVec a, double s) { return a *= s; }

  friend bool operator==(const FixedVec& a, const FixedVec& b) {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }

 private:
  std::array<double, Capacity> data_{};
  std::size_t size_ = 0;
};

inline constexpr std::size_t kMaxComponents = 8;

/// Conserved state vector u at one point.
using StateVec = FixedVec<kMaxComponents>;
/// Flux-parameter vector theta at one cell.
using ThetaVec = FixedVec<kMaxComponents + 1>;

template <std::size_t C>
double max_abs(const FixedVec<C>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x < 0 ? -x : x);
  return m;
}

}  // namespace dflux
