#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace pballs {

/// Norm exponent p in [1, inf]. Infinity is carried as an explicit branch
/// flag rather than a sentinel float, so the 1/inf = 0 convention is exact.
class NormOrder {
 public:
  explicit NormOrder(double p) : value_(p) {
    if (!std::isfinite(p) || p < 1.0) {
      throw std::invalid_argument("NormOrder: p must be finite and >= 1, got " +
                                  std::to_string(p));
    }
  }

  static NormOrder infinity() { return NormOrder(InfTag{}); }

  bool is_inf() const { return inf_; }

  /// Finite exponent value; invalid for the infinity branch.
  double value() const {
    if (inf_) throw std::logic_error("NormOrder: value() called on p = inf");
    return value_;
  }

  /// 1/p with the exact convention 1/inf = 0.
  double reciprocal() const { return inf_ ? 0.0 : 1.0 / value_; }

  std::string str() const { return inf_ ? "inf" : std::to_string(value_); }

  friend bool operator==(const NormOrder& a, const NormOrder& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.value_ == b.value_;
  }

 private:
  struct InfTag {};
  explicit NormOrder(InfTag) : value_(0.0), inf_(true) {}

  double value_;
  bool inf_ = false;
};

}  // namespace pballs
