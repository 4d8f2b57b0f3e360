#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace fairpm {

// Exact arithmetic for rates, discrimination and accuracy.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Nearest rational with denominator 10^9, e.g. 0.05 -> 1/20.
Rational decimal_rational(double value);

// floor(r) and ceil(r) as integers.
std::int64_t floor_int(const Rational& r);
std::int64_t ceil_int(const Rational& r);

}  // namespace fairpm
