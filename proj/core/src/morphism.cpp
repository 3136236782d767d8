#include "sheafbar/morphism.hpp"

#include <ostream>
#include <stdexcept>

#include "gf_linalg.hpp"
#include "sheafbar/errors.hpp"

namespace sheafbar {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Field::Field(Scalar p) : p_(p) {
  if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
  if (p > (Scalar{1} << 31)) throw DomainError("field characteristic must be below 2^31");
}

Scalar Field::reduce(long long v) const {
  const long long m = static_cast<long long>(p_);
  long long r = v % m;
  if (r < 0) r += m;
  return static_cast<Scalar>(r);
}

Scalar Field::inv(Scalar a) const {
  if (a % p_ == 0) throw DomainError("division by zero in GF(" + std::to_string(p_) + ")");
  // Fermat: a^(p-2).
  std::uint64_t result = 1;
  std::uint64_t base = a % p_;
  std::uint64_t e = p_ - 2;
  while (e > 0) {
    if (e & 1U) result = result * base % p_;
    base = base * base % p_;
    e >>= 1U;
  }
  return static_cast<Scalar>(result);
}

Morphism::Morphism(Barcode source, Barcode target, Field field)
    : source_(std::move(source)), target_(std::move(target)), field_(field) {}

Scalar Morphism::at(std::size_t target, std::size_t source) const {
  const auto it = entries_.find({target, source});
  return it == entries_.end() ? 0 : it->second;
}

bool Morphism::allowed(std::size_t target, std::size_t source) const {
  const Bar& s = source_.at(source);
  const Bar& t = target_.at(target);
  return s.degree == t.degree && hom(s.interval, t.interval) == HomType::Deg0;
}

void Morphism::set(std::size_t target, std::size_t source, Scalar value) {
  if (target >= target_.size() || source >= source_.size()) {
    throw std::out_of_range("morphism entry (" + std::to_string(target) + "," +
                            std::to_string(source) + ") outside " +
                            std::to_string(target_.size()) + "x" + std::to_string(source_.size()));
  }
  value %= field_.p();
  if (value == 0) {
    entries_.erase({target, source});
    return;
  }
  if (!allowed(target, source)) {
    throw DomainError("entry (" + std::to_string(target) + "," + std::to_string(source) +
                      ") joins " + source_[source].interval.to_string() + " to " +
                      target_[target].interval.to_string() + " where the generator vanishes");
  }
  entries_[{target, source}] = value;
}

MakeMorphismResult make_morphism(const Barcode& source, const Barcode& target,
                                 const std::vector<MatrixEntry>& entries, Field field) {
  std::map<Morphism::Key, Scalar> summed;
  for (const MatrixEntry& e : entries) {
    if (e.target >= target.size() || e.source >= source.size()) {
      throw std::out_of_range("morphism entry (" + std::to_string(e.target) + "," +
                              std::to_string(e.source) + ") outside " +
                              std::to_string(target.size()) + "x" + std::to_string(source.size()));
    }
    Scalar& slot = summed[{e.target, e.source}];
    slot = field.add(slot, field.reduce(e.value));
  }
  MakeMorphismResult result{Morphism(source, target, field), {}};
  for (const auto& [key, value] : summed) {
    if (value == 0) continue;
    if (result.morphism.allowed(key.first, key.second)) {
      result.morphism.set(key.first, key.second, value);
    } else {
      result.zeroed.push_back(key);
    }
  }
  return result;
}

Morphism identity(const Barcode& b, Field field) {
  Morphism m(b, b, field);
  for (std::size_t i = 0; i < b.size(); ++i) m.set(i, i, 1);
  return m;
}

Morphism zero_morphism(const Barcode& source, const Barcode& target, Field field) {
  return Morphism(source, target, field);
}

Morphism compose(const Morphism& f, const Morphism& g) {
  if (!(f.target() == g.source())) throw DomainError("compose: middle barcodes differ");
  if (!(f.field() == g.field())) throw DomainError("compose: morphisms over different fields");
  const Field& field = f.field();
  // Index g's entries by middle bar.
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> g_by_middle(g.source().size());
  for (const auto& [key, value] : g.entries()) g_by_middle[key.second].push_back({key.first, value});
  std::map<Morphism::Key, Scalar> acc;
  for (const auto& [key, fv] : f.entries()) {
    const std::size_t middle = key.first;
    const std::size_t src = key.second;
    for (const auto& [tgt, gv] : g_by_middle[middle]) {
      Scalar& slot = acc[{tgt, src}];
      slot = field.add(slot, field.mul(fv, gv));
    }
  }
  Morphism out(f.source(), g.target(), field);
  for (const auto& [key, value] : acc) {
    // The outer generator may vanish even when both legs are nonzero.
    if (value != 0 && out.allowed(key.first, key.second)) out.set(key.first, key.second, value);
  }
  return out;
}

Morphism operator+(const Morphism& f, const Morphism& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()) || !(f.field() == g.field())) {
    throw DomainError("sum of morphisms with different source, target or field");
  }
  Morphism out = f;
  for (const auto& [key, value] : g.entries()) {
    out.set(key.first, key.second, f.field().add(out.at(key.first, key.second), value));
  }
  return out;
}

Morphism scaled(const Morphism& f, Scalar s) {
  Morphism out(f.source(), f.target(), f.field());
  for (const auto& [key, value] : f.entries()) out.set(key.first, key.second, f.field().mul(value, s));
  return out;
}

Morphism shift(const Morphism& f, const Rational& c) {
  Morphism out(shift(f.source(), c), shift(f.target(), c), f.field());
  for (const auto& [key, value] : f.entries()) out.set(key.first, key.second, value);
  return out;
}

Morphism tau(const Barcode& b, const Rational& c, Field field) {
  if (c < 0) throw DomainError("tau needs a nonnegative shift, got " + to_string(c));
  Morphism m(b, shift(b, c), field);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].interval.longer_than(c)) m.set(i, i, 1);
  }
  return m;
}

bool equals_tau(const Morphism& f, const Rational& c) {
  if (c < 0) throw DomainError("equals_tau needs a nonnegative shift");
  if (!(f.target() == shift(f.source(), c))) {
    throw DomainError("equals_tau: target is not the " + to_string(c) + "-shift of the source");
  }
  return f.entries() == tau(f.source(), c, f.field()).entries();
}

bool is_invertible(const Morphism& f) {
  if (f.source().size() != f.target().size()) return false;
  return detail::rank(detail::to_dense(f), f.field()) == f.source().size();
}

Morphism inverse(const Morphism& f) {
  if (!(f.source() == f.target())) throw DomainError("inverse needs an endomorphism");
  const auto inv = detail::inverse(detail::to_dense(f), f.field());
  if (!inv) throw DomainError("morphism is not invertible");
  Morphism out(f.target(), f.source(), f.field());
  for (std::size_t i = 0; i < inv->rows; ++i) {
    for (std::size_t j = 0; j < inv->cols; ++j) {
      // Entries at vanishing generators represent zero; drop them.
      if ((*inv)(i, j) != 0 && out.allowed(i, j)) out.set(i, j, (*inv)(i, j));
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Morphism& f) {
  os << "Morphism(" << f.source().size() << "->" << f.target().size() << ", GF(" << f.field().p()
     << "))[";
  bool first = true;
  for (const auto& [key, value] : f.entries()) {
    os << (first ? "" : " ") << "(" << key.first << "," << key.second << ")=" << value;
    first = false;
  }
  return os << "]";
}

}  // namespace sheafbar
