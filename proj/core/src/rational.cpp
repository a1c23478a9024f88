#include "fairdiv/rational.hpp"

#include <cstdlib>

namespace fairdiv {

std::string Rational::to_decimal(int significant) const {
  if (significant < 1) significant = 1;
  std::string out;
  std::int64_t n = num_;
  if (n < 0) {
    out.push_back('-');
    n = -n;
  }
  const std::int64_t q = n / den_;
  __int128 r = n % den_;
  const std::string integral = std::to_string(q);
  out += integral;
  if (r == 0) return out;

  // Significant digits already consumed by the integral part (unless it is 0).
  int remaining = significant;
  if (q > 0) remaining -= static_cast<int>(integral.size());
  out.push_back('.');
  bool counting = q > 0;
  while (remaining > 0 && r != 0) {
    r *= 10;
    const auto digit = static_cast<std::int64_t>(r / den_);
    r %= den_;
    out.push_back(static_cast<char>('0' + digit));
    if (digit != 0) counting = true;
    if (counting) --remaining;
  }
  // Trim trailing zeros in the fraction.
  while (out.back() == '0') out.pop_back();
  if (out.back() == '.') out.pop_back();
  return out;
}

}  // namespace fairdiv
