#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sheafbar {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact parse of "p/q", integers and finite decimals ("-1.25"). Throws ParseError.
Rational parse_rational(std::string_view text);
// Canonical text: "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& r);

// Extended rational: a finite reduced rational or one of the two infinities.
class Endpoint {
 public:
  enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

  Endpoint() = default;
  Endpoint(Rational value) : kind_(Kind::Finite), value_(std::move(value)) {}  // NOLINT
  Endpoint(long long value) : kind_(Kind::Finite), value_(value) {}           // NOLINT
  Endpoint(int value) : kind_(Kind::Finite), value_(value) {}                 // NOLINT

  static Endpoint neg_inf() { return Endpoint(Kind::NegInf); }
  static Endpoint pos_inf() { return Endpoint(Kind::PosInf); }
  // Accepts rational syntax plus "inf", "+inf", "-inf".
  static Endpoint parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  bool is_neg_inf() const noexcept { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const noexcept { return kind_ == Kind::PosInf; }
  // Throws std::logic_error on an infinite endpoint.
  const Rational& value() const;

  // Translation; infinities are fixed points.
  Endpoint operator+(const Rational& c) const;
  Endpoint operator-(const Rational& c) const { return *this + Rational(-c); }

  std::strong_ordering operator<=>(const Endpoint& other) const;
  bool operator==(const Endpoint& other) const { return (*this <=> other) == 0; }

  std::string to_string() const;

 private:
  explicit Endpoint(Kind k) : kind_(k) {}
  Kind kind_ = Kind::Finite;
  Rational value_{0};
};

// Difference hi - lo of extended values with hi > lo; +inf when either side is infinite.
Endpoint extended_difference(const Endpoint& hi, const Endpoint& lo);

// Half-open interval [lo, hi) with lo < hi. Construction rejects empty intervals.
class Interval {
 public:
  Interval(Endpoint lo, Endpoint hi);
  // "[a,b)" literal; whitespace around tokens is ignored.
  static Interval parse(std::string_view text);

  const Endpoint& lo() const noexcept { return lo_; }
  const Endpoint& hi() const noexcept { return hi_; }
  Endpoint length() const { return extended_difference(hi_, lo_); }
  bool is_finite() const noexcept { return lo_.is_finite() && hi_.is_finite(); }
  Interval shifted(const Rational& c) const { return Interval(lo_ + c, hi_ + c); }
  // length() > c, evaluated exactly.
  bool longer_than(const Rational& c) const;

  auto operator<=>(const Interval& other) const = default;
  bool operator==(const Interval& other) const = default;

  std::string to_string() const;

 private:
  Endpoint lo_;
  Endpoint hi_;
};

enum class HomType : std::uint8_t { Zero, Deg0, Deg1 };
std::string_view to_string(HomType h);

// Product order: lo <= lo' and hi <= hi'.
bool leq(const Interval& i, const Interval& j);
// Hom between interval modules k_I and k_J.
HomType hom(const Interval& i, const Interval& j);
// Composite of the canonical generators I -> J -> K. Throws DomainError unless both legs are Deg0.
HomType compose_generator(const Interval& i, const Interval& j, const Interval& k);

std::ostream& operator<<(std::ostream& os, const Endpoint& e);
std::ostream& operator<<(std::ostream& os, const Interval& i);
std::ostream& operator<<(std::ostream& os, HomType h);

}  // namespace sheafbar
