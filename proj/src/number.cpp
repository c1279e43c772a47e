#include "boxsearch/number.hpp"

#include <cctype>

namespace boxsearch {

namespace {

BigInt pow10(long e) {
  BigInt r(1);
  for (long i = 0; i < e; ++i) r *= 10;
  return r;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) throw invalid_instance_error("empty integer in number '" + std::string(whole) + "'");
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw invalid_instance_error("bare sign in number '" + std::string(whole) + "'");
  BigInt r(0);
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw invalid_instance_error("bad digit in number '" + std::string(whole) + "'");
    r = r * 10 + (s[i] - '0');
  }
  return neg ? BigInt(-r) : r;
}

}  // namespace

Rat parse_decimal(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw invalid_instance_error("empty number");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt n = parse_integer(s.substr(0, slash), text);
    BigInt d = parse_integer(s.substr(slash + 1), text);
    if (d == 0) throw invalid_instance_error("zero denominator in '" + std::string(text) + "'");
    return Rat(n, d);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    BigInt ev = parse_integer(s.substr(e + 1), text);
    if (ev > 1000 || ev < -1000)
      throw invalid_instance_error("exponent out of range in '" + std::string(text) + "'");
    exponent = ev.convert_to<long>();
    s = s.substr(0, e);
  }

  std::string digits;
  long frac_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view frac = s.substr(dot + 1);
    if (frac.find_first_of("+-") != std::string_view::npos)
      throw invalid_instance_error("bad fraction part in '" + std::string(text) + "'");
    digits = std::string(s.substr(0, dot)) + std::string(frac);
    frac_digits = static_cast<long>(frac.size());
    if (dot == 0 || (dot == 1 && (s[0] == '+' || s[0] == '-'))) digits.insert(digits.size() - frac.size(), "0");
    if (frac.empty()) digits += "0", ++frac_digits;
  } else {
    digits = std::string(s);
  }

  BigInt mantissa = parse_integer(digits, text);
  long shift = exponent - frac_digits;
  if (shift >= 0) return Rat(mantissa * pow10(shift));
  return Rat(mantissa, pow10(-shift));
}

std::string rat_to_string(const Rat& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

}  // namespace boxsearch
