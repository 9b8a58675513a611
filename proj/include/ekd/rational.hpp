#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace ekd {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Formats as "p" or "p/q", always in lowest terms (cpp_rational normalizes).
std::string to_string(const Rational& r);

// Accepts "p", "p/q", optional leading '-'. Returns nullopt on anything else,
// including q == 0.
std::optional<Rational> parse_rational(const std::string& text);

double to_double(const Rational& r);

}  // namespace ekd
