#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace boxsearch {

// Arbitrary-precision rational, the default arithmetic mode of the library.
// Every templated operation also instantiates with plain double for speed.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct invalid_instance_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct invalid_order_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct policy_violation_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Parses "123", "-0.99", "2.5e-3" or "99/100" into an exact rational.
Rat parse_decimal(std::string_view text);

// "N" when integral, "N/D" otherwise.
std::string rat_to_string(const Rat& value);

inline double to_double(const Rat& value) { return value.convert_to<double>(); }
inline double to_double(double value) { return value; }

template <typename T>
struct num_traits;

template <>
struct num_traits<Rat> {
  static constexpr bool exact = true;
  static Rat from_rat(const Rat& r) { return r; }
};

template <>
struct num_traits<double> {
  static constexpr bool exact = false;
  static double from_rat(const Rat& r) { return r.convert_to<double>(); }
};

template <typename T>
T from_rat(const Rat& r) {
  return num_traits<T>::from_rat(r);
}

template <typename T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

}  // namespace boxsearch
