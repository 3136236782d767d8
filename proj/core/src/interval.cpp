#include "sheafbar/interval.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

#include "sheafbar/errors.hpp"

namespace sheafbar {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("unknown token '" + std::string(whole) + "'");
  BigInt v{std::string(s)};
  return negative ? BigInt(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParseError("empty number");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(s.substr(0, slash), s);
    const std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) throw ParseError("unknown token '" + std::string(s) + "'");
    const BigInt den(std::string{den_text});
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return Rational(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    const std::string_view frac = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((int_part.empty() && frac.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw ParseError("unknown token '" + std::string(s) + "'");
    }
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const BigInt whole_units = int_part.empty() ? BigInt(0) : BigInt(std::string(int_part));
    const BigInt frac_units = frac.empty() ? BigInt(0) : BigInt(std::string(frac));
    Rational r(whole_units * scale + frac_units, scale);
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(s, s));
}

std::string to_string(const Rational& r) {
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

Endpoint Endpoint::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s == "inf" || s == "+inf" || s == "infinity" || s == "+infinity") return pos_inf();
  if (s == "-inf" || s == "-infinity") return neg_inf();
  return Endpoint(parse_rational(s));
}

const Rational& Endpoint::value() const {
  if (!is_finite()) throw std::logic_error("value() of an infinite endpoint");
  return value_;
}

Endpoint Endpoint::operator+(const Rational& c) const {
  if (!is_finite()) return *this;
  return Endpoint(Rational(value_ + c));
}

std::strong_ordering Endpoint::operator<=>(const Endpoint& other) const {
  if (kind_ != other.kind_) return static_cast<int>(kind_) <=> static_cast<int>(other.kind_);
  if (kind_ != Kind::Finite) return std::strong_ordering::equal;
  if (value_ < other.value_) return std::strong_ordering::less;
  if (other.value_ < value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Endpoint::to_string() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "inf";
    case Kind::Finite: break;
  }
  return sheafbar::to_string(value_);
}

Endpoint extended_difference(const Endpoint& hi, const Endpoint& lo) {
  if (!hi.is_finite() || !lo.is_finite()) return Endpoint::pos_inf();
  return Endpoint(Rational(hi.value() - lo.value()));
}

Interval::Interval(Endpoint lo, Endpoint hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (!(lo_ < hi_)) {
    throw DomainError("empty interval [" + lo_.to_string() + "," + hi_.to_string() + ")");
  }
}

Interval Interval::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.size() < 3 || s.front() != '[' || s.back() != ')') {
    throw ParseError("interval literal must look like [a,b): '" + std::string(s) + "'");
  }
  const std::string_view body = s.substr(1, s.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
    throw ParseError("interval literal needs exactly one comma: '" + std::string(s) + "'");
  }
  Endpoint lo = Endpoint::parse(body.substr(0, comma));
  Endpoint hi = Endpoint::parse(body.substr(comma + 1));
  if (!(lo < hi)) throw ParseError("empty interval '" + std::string(s) + "'");
  return Interval(std::move(lo), std::move(hi));
}

bool Interval::longer_than(const Rational& c) const {
  if (!is_finite()) return true;
  return hi_.value() - lo_.value() > c;
}

std::string Interval::to_string() const {
  return "[" + lo_.to_string() + "," + hi_.to_string() + ")";
}

std::string_view to_string(HomType h) {
  switch (h) {
    case HomType::Zero: return "Zero";
    case HomType::Deg0: return "Deg0";
    case HomType::Deg1: return "Deg1";
  }
  return "?";
}

bool leq(const Interval& i, const Interval& j) { return i.lo() <= j.lo() && i.hi() <= j.hi(); }

HomType hom(const Interval& i, const Interval& j) {
  const Endpoint& a = i.lo();
  const Endpoint& b = i.hi();
  const Endpoint& c = j.lo();
  const Endpoint& d = j.hi();
  if (a <= c && c < b && b <= d) return HomType::Deg0;
  if (c < a && a <= d && d < b) return HomType::Deg1;
  return HomType::Zero;
}

HomType compose_generator(const Interval& i, const Interval& j, const Interval& k) {
  if (hom(i, j) != HomType::Deg0 || hom(j, k) != HomType::Deg0) {
    throw DomainError("compose_generator needs two nonzero degree-0 legs, got " + i.to_string() +
                      "->" + j.to_string() + "->" + k.to_string());
  }
  return hom(i, k);
}

std::ostream& operator<<(std::ostream& os, const Endpoint& e) { return os << e.to_string(); }
std::ostream& operator<<(std::ostream& os, const Interval& i) { return os << i.to_string(); }
std::ostream& operator<<(std::ostream& os, HomType h) { return os << to_string(h); }

}  // namespace sheafbar
