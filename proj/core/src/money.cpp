#include "parmax/money.hpp"

#include <cmath>
#include <cstdio>

#include "parmax/errors.hpp"

namespace parmax {

Money Money::from_usd(double dollars) {
  return Money(static_cast<std::int64_t>(std::llround(dollars * 1e9)));
}

Money Money::divided_by(std::int64_t k) const {
  if (k == 0) throw ValidationError("Money: division by zero");
  const std::int64_t q = nanos_ / k;
  const std::int64_t r = nanos_ % k;
  // Round half away from zero so $472.50-style midpoints keep their cents.
  if (std::llabs(r) * 2 >= std::llabs(k)) {
    return Money(q + ((nanos_ < 0) != (k < 0) ? -1 : 1));
  }
  return Money(q);
}

std::string Money::display() const {
  const bool neg = nanos_ < 0;
  const std::int64_t abs = neg ? -nanos_ : nanos_;
  const std::int64_t whole = abs / 1'000'000'000;
  std::int64_t frac = abs % 1'000'000'000;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s$%lld", neg ? "-" : "", static_cast<long long>(whole));
  std::string out(buf);
  // Always show cents; keep further digits only when they carry value.
  std::snprintf(buf, sizeof buf, "%09lld", static_cast<long long>(frac));
  std::string digits(buf);
  std::size_t keep = 2;
  for (std::size_t i = digits.size(); i > 2; --i) {
    if (digits[i - 1] != '0') {
      keep = i;
      break;
    }
  }
  out += "." + digits.substr(0, keep);
  return out;
}

}  // namespace parmax
