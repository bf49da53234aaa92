#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace imdyn {

/// Exact rational scalar. All affine-map quantities (points, slopes,
/// interval endpoints, derivative products) are carried in this type so
/// that comparisons need no tolerance. Smooth-branch evaluation and the
/// Ulam power iteration use plain double ("float mode").
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational abs(const Rational& r);

/// Parses "p/q", "-p/q", integer, or decimal ("0.65", "-1.25").
/// Decimals convert exactly to rationals.
std::optional<Rational> parse_rational(const std::string& text);

/// Serializes as "p/q" (or "p" for integers), matching the report formats.
std::string to_string(const Rational& r);

/// Integer power with negative exponents allowed (r != 0 for e < 0).
Rational pow_rational(const Rational& r, long e);

}  // namespace imdyn
