#include "sheafbar/barcode.hpp"

#include <algorithm>
#include <ostream>

namespace sheafbar {

Barcode::Barcode(std::initializer_list<Bar> bars) : Barcode(std::vector<Bar>(bars)) {}

Barcode::Barcode(std::vector<Bar> bars) : bars_(std::move(bars)) {
  std::sort(bars_.begin(), bars_.end());
}

std::vector<int> Barcode::degrees() const {
  std::vector<int> out;
  for (const Bar& b : bars_) {
    if (out.empty() || out.back() != b.degree) out.push_back(b.degree);
  }
  return out;
}

bool Barcode::is_degree_pure() const { return degrees().size() <= 1; }

Barcode Barcode::restrict_degree(int degree) const {
  std::vector<Bar> out;
  for (const Bar& b : bars_) {
    if (b.degree == degree) out.push_back(b);
  }
  return Barcode(std::move(out));
}

std::vector<std::size_t> Barcode::indices_of_degree(int degree) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bars_.size(); ++i) {
    if (bars_[i].degree == degree) out.push_back(i);
  }
  return out;
}

Barcode Barcode::subset(const std::vector<std::size_t>& ascending_indices) const {
  std::vector<Bar> out;
  out.reserve(ascending_indices.size());
  for (std::size_t i : ascending_indices) out.push_back(bars_.at(i));
  return Barcode(std::move(out));
}

std::map<Bar, std::size_t> Barcode::multiplicities() const {
  std::map<Bar, std::size_t> out;
  for (const Bar& b : bars_) ++out[b];
  return out;
}

Barcode shift(const Barcode& b, const Rational& c) {
  std::vector<Bar> out;
  out.reserve(b.size());
  for (const Bar& bar : b) out.push_back(Bar{bar.degree, bar.interval.shifted(c)});
  return Barcode(std::move(out));
}

Endpoint gamma_to_zero(const Barcode& b) {
  Endpoint best(0);
  for (const Bar& bar : b) best = std::max(best, bar.interval.length());
  return best;
}

Barcode direct_sum(const Barcode& a, const Barcode& b) {
  std::vector<Bar> out(a.bars());
  out.insert(out.end(), b.begin(), b.end());
  return Barcode(std::move(out));
}

std::ostream& operator<<(std::ostream& os, const Bar& bar) {
  return os << "(" << bar.degree << "," << bar.interval << ")";
}

std::ostream& operator<<(std::ostream& os, const Barcode& b) {
  os << "{";
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << b[i];
  return os << "}";
}

}  // namespace sheafbar
