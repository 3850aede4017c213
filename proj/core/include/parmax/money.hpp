#pragma once

#include <cstdint>
#include <string>

namespace parmax {

// Exact decimal money: a count of nano-dollars (1e-9 USD). Fine enough that
// every per-token rate in the pricing table is an integer, so per-request
// costs come out exact rather than accumulated in floating point.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_nanos(std::int64_t nanos) { return Money(nanos); }
  static constexpr Money from_usd_int(std::int64_t dollars) {
    return Money(dollars * 1'000'000'000);
  }
  static Money from_usd(double dollars);  // rounds half away from zero

  constexpr std::int64_t nanos() const { return nanos_; }
  constexpr double usd() const { return static_cast<double>(nanos_) * 1e-9; }
  double cents() const { return static_cast<double>(nanos_) * 1e-7; }

  constexpr Money operator+(Money o) const { return Money(nanos_ + o.nanos_); }
  constexpr Money operator-(Money o) const { return Money(nanos_ - o.nanos_); }
  constexpr Money operator*(std::int64_t k) const { return Money(nanos_ * k); }
  Money divided_by(std::int64_t k) const;  // rounds half away from zero
  constexpr auto operator<=>(const Money&) const = default;

  // "$12.34" / "$0.0039"; trims trailing zeros past two decimals.
  std::string display() const;

 private:
  explicit constexpr Money(std::int64_t nanos) : nanos_(nanos) {}
  std::int64_t nanos_ = 0;
};

}  // namespace parmax
