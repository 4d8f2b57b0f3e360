#include "fairpm/rational.hpp"

#include <cmath>

namespace fairpm {

Rational decimal_rational(double value) {
  constexpr std::int64_t kScale = 1'000'000'000;
  return Rational(static_cast<std::int64_t>(std::llround(value * static_cast<double>(kScale))), kScale);
}

std::int64_t floor_int(const Rational& r) {
  using boost::multiprecision::cpp_int;
  cpp_int num = numerator(r), den = denominator(r);
  cpp_int q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q.convert_to<std::int64_t>();
}

std::int64_t ceil_int(const Rational& r) { return -floor_int(-r); }

}  // namespace fairpm
