#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mpath {

/// Dense 0-based node index.
using NodeId = int;

/// Unordered node pair, always stored with first < second.
struct NodePair {
  NodeId first = 0;
  NodeId second = 0;

  NodePair() = default;
  NodePair(NodeId a, NodeId b) : first(a < b ? a : b), second(a < b ? b : a) {}

  auto operator<=>(const NodePair&) const = default;
};

/// Key rate held as an exact integer count of base-resolution units.
///
/// All routing arithmetic is performed on these integers, so repeated
/// increments by the step never accumulate rounding error.
class Rate {
 public:
  constexpr Rate() = default;
  constexpr explicit Rate(std::int64_t units) : units_(units) {}

  constexpr std::int64_t units() const { return units_; }

  constexpr Rate operator-() const { return Rate(-units_); }
  constexpr Rate& operator+=(Rate o) { units_ += o.units_; return *this; }
  constexpr Rate& operator-=(Rate o) { units_ -= o.units_; return *this; }
  friend constexpr Rate operator+(Rate a, Rate b) { return a += b; }
  friend constexpr Rate operator-(Rate a, Rate b) { return a -= b; }
  friend constexpr Rate operator*(Rate a, std::int64_t k) { return Rate(a.units_ * k); }

  constexpr auto operator<=>(const Rate&) const = default;

 private:
  std::int64_t units_ = 0;
};

/// Conversion between external kbit/s values and internal Rate units.
struct RateScale {
  double bits_per_unit = 1.0;

  /// Throws std::invalid_argument when `kbps` is not an integer multiple of
  /// the resolution.
  Rate from_kbps(double kbps) const;
  double to_kbps(Rate r) const { return static_cast<double>(r.units()) * bits_per_unit / 1000.0; }
  double to_bps(Rate r) const { return static_cast<double>(r.units()) * bits_per_unit; }

  bool operator==(const RateScale&) const = default;
};

/// Symmetric N x N matrix indexed by node pairs.
template <typename T>
class PairMatrix {
 public:
  PairMatrix() = default;
  explicit PairMatrix(int n, T init = T{}) : n_(n), data_(static_cast<std::size_t>(n) * n, init) {}

  int size() const { return n_; }

  const T& operator()(NodeId i, NodeId j) const { return data_[index(i, j)]; }
  const T& at(NodePair p) const { return (*this)(p.first, p.second); }

  void set(NodeId i, NodeId j, T v) {
    data_[index(i, j)] = v;
    data_[index(j, i)] = v;
  }
  void set(NodePair p, T v) { set(p.first, p.second, v); }

  bool operator==(const PairMatrix&) const = default;

 private:
  std::size_t index(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<T> data_;
};

using TargetMatrix = PairMatrix<Rate>;
using EffectiveRateMatrix = PairMatrix<Rate>;

/// Malformed or schema-violating input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal string that round-trips `v`.
std::string format_number(double v);

}  // namespace mpath
