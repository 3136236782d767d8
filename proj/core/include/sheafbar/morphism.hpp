#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "sheafbar/barcode.hpp"

namespace sheafbar {

using Scalar = std::uint32_t;

// Prime field GF(p). Residues are kept in [0, p).
class Field {
 public:
  explicit Field(Scalar p = 2);
  Scalar p() const noexcept { return p_; }
  Scalar reduce(long long v) const;
  Scalar add(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} + b) % p_); }
  Scalar sub(Scalar a, Scalar b) const { return add(a, p_ - b); }
  Scalar neg(Scalar a) const { return a == 0 ? 0 : p_ - a; }
  Scalar mul(Scalar a, Scalar b) const { return static_cast<Scalar>((std::uint64_t{a} * b) % p_); }
  // Throws DomainError on zero.
  Scalar inv(Scalar a) const;
  bool operator==(const Field& other) const = default;

 private:
  Scalar p_;
};

bool is_prime(std::uint64_t n);

struct MatrixEntry {
  std::size_t target;
  std::size_t source;
  long long value;
};

// Morphism between barcodes as a sparse (target, source) matrix over GF(p).
// Invariant: a nonzero entry joins bars of equal degree with hom = Deg0.
class Morphism {
 public:
  using Key = std::pair<std::size_t, std::size_t>;  // (target index, source index)

  Morphism(Barcode source, Barcode target, Field field = Field());

  const Barcode& source() const noexcept { return source_; }
  const Barcode& target() const noexcept { return target_; }
  const Field& field() const noexcept { return field_; }
  const std::map<Key, Scalar>& entries() const noexcept { return entries_; }
  Scalar at(std::size_t target, std::size_t source) const;
  bool is_zero() const noexcept { return entries_.empty(); }

  // Whether (target, source) may carry a nonzero entry.
  bool allowed(std::size_t target, std::size_t source) const;
  // Sets a residue; throws DomainError on a forbidden nonzero entry, std::out_of_range on bad indices.
  void set(std::size_t target, std::size_t source, Scalar value);

  bool operator==(const Morphism& other) const = default;

 private:
  Barcode source_;
  Barcode target_;
  Field field_;
  std::map<Key, Scalar> entries_;
};

struct MakeMorphismResult {
  Morphism morphism;
  // Entries dropped because the Hom rule forces the generator to vanish.
  std::vector<Morphism::Key> zeroed;
};

// Duplicate keys accumulate. Throws std::out_of_range on an index outside the barcodes.
MakeMorphismResult make_morphism(const Barcode& source, const Barcode& target,
                                 const std::vector<MatrixEntry>& entries, Field field = Field());

Morphism identity(const Barcode& b, Field field = Field());
Morphism zero_morphism(const Barcode& source, const Barcode& target, Field field = Field());

// g ∘ f for f: A -> B, g: B -> C. Throws DomainError when f.target != g.source or fields differ.
Morphism compose(const Morphism& f, const Morphism& g);
Morphism operator+(const Morphism& f, const Morphism& g);
Morphism scaled(const Morphism& f, Scalar s);

// The same matrix between translated barcodes.
Morphism shift(const Morphism& f, const Rational& c);

// τ_{0,c}(B): B -> shift(B, c). Throws DomainError for c < 0.
Morphism tau(const Barcode& b, const Rational& c, Field field = Field());

// f == tau(f.source, c). Throws DomainError unless f.target == shift(f.source, c).
bool equals_tau(const Morphism& f, const Rational& c);

// Square and of full rank over the field.
bool is_invertible(const Morphism& f);
// Inverse of an automorphism (same source and target). Throws DomainError if singular.
Morphism inverse(const Morphism& f);

std::ostream& operator<<(std::ostream& os, const Morphism& f);

}  // namespace sheafbar
