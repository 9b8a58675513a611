#include "ekd/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace ekd {

std::string to_string(const Rational& r) {
  Integer num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  auto is_int = [](const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  try {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
      if (!is_int(text)) return std::nullopt;
      return Rational(Integer(text));
    }
    std::string p = text.substr(0, slash), q = text.substr(slash + 1);
    if (!is_int(p) || !is_int(q)) return std::nullopt;
    Integer den(q);
    if (den == 0) return std::nullopt;
    return Rational(Integer(p), den);
  } catch (...) {
    return std::nullopt;
  }
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace ekd
