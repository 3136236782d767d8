#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <vector>

#include "sheafbar/interval.hpp"

namespace sheafbar {

// Interval module k_I placed in cohomological degree `degree`.
struct Bar {
  int degree = 0;
  Interval interval;

  auto operator<=>(const Bar& other) const = default;
  bool operator==(const Bar& other) const = default;
};

// Finite multiset of bars, kept sorted by (degree, lo, hi).
// Multiplicity is expanded: equal bars occupy consecutive indices.
class Barcode {
 public:
  Barcode() = default;
  Barcode(std::initializer_list<Bar> bars);
  explicit Barcode(std::vector<Bar> bars);

  std::size_t size() const noexcept { return bars_.size(); }
  bool empty() const noexcept { return bars_.empty(); }
  const Bar& operator[](std::size_t i) const { return bars_[i]; }
  const Bar& at(std::size_t i) const { return bars_.at(i); }
  const std::vector<Bar>& bars() const noexcept { return bars_; }
  auto begin() const noexcept { return bars_.begin(); }
  auto end() const noexcept { return bars_.end(); }

  // Distinct degrees, ascending.
  std::vector<int> degrees() const;
  bool is_degree_pure() const;
  // Bars of one degree, in canonical order.
  Barcode restrict_degree(int degree) const;
  // Canonical indices of the bars of one degree.
  std::vector<std::size_t> indices_of_degree(int degree) const;
  // Bars selected by index; the result re-sorts, so callers relying on the
  // mapping must pass ascending indices (which preserves order).
  Barcode subset(const std::vector<std::size_t>& ascending_indices) const;
  // Distinct bars with their multiplicities.
  std::map<Bar, std::size_t> multiplicities() const;

  bool operator==(const Barcode& other) const = default;

 private:
  std::vector<Bar> bars_;
};

Barcode shift(const Barcode& b, const Rational& c);
// Maximum bar length; 0 for the empty barcode; +inf if any bar is infinite.
Endpoint gamma_to_zero(const Barcode& b);
Barcode direct_sum(const Barcode& a, const Barcode& b);

std::ostream& operator<<(std::ostream& os, const Bar& bar);
std::ostream& operator<<(std::ostream& os, const Barcode& b);

}  // namespace sheafbar
