#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sheafbar/barcode.hpp"
#include "sheafbar/morphism.hpp"

namespace sheafbar {

// u: F -> shift(G, a) and v: G -> shift(F, b) with
// shift(v, a) ∘ u = tau(F, a+b) and shift(u, b) ∘ v = tau(G, a+b).
struct InterleavingCertificate {
  Rational a;
  Rational b;
  Morphism u;
  Morphism v;
};

// Re-checks both tau equations and the endpoints of u and v.
bool verify_certificate(const Barcode& f, const Barcode& g, const InterleavingCertificate& cert);

struct InterleavingOptions {
  Field field{2};
  // Cap on field assignments enumerated by one exhaustive decision.
  std::uint64_t budget = std::uint64_t{1} << 20;
};

enum class SearchStatus { Certificate, Infeasible, Unknown };
std::string_view to_string(SearchStatus s);

struct InterleavingResult {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<InterleavingCertificate> certificate;
  std::uint64_t assignments = 0;  // enumerated by the exhaustive search
  std::string reason;             // why Infeasible or Unknown
};

// Decides whether an (a, b)-interleaving exists. A matched-bars construction is
// tried first; otherwise the bilinear system over GF(p) is searched exhaustively
// on each connected block, enumerating one side and solving the other linearly.
// Graded inputs are decided degree by degree. Throws DomainError for a < 0 or b < 0.
InterleavingResult check_interleaving(const Barcode& f, const Barcode& g, const Rational& a,
                                      const Rational& b, const InterleavingOptions& options = {});

enum class Exactness { Exact, Bracket };
std::string_view to_string(Exactness e);

struct DistanceReport {
  Endpoint value;  // the certified upper value
  Exactness exactness = Exactness::Exact;
  Endpoint lower;
  Endpoint upper;
  // Present when a single shift pair certifies `value` in every degree.
  std::optional<InterleavingCertificate> certificate;
  struct DegreePart {
    int degree;
    Endpoint value;
    Exactness exactness;
    Endpoint lower;
    std::optional<InterleavingCertificate> certificate;
  };
  std::vector<DegreePart> per_degree;
};

// Infimum of a+b over (a, b)-interleavings, computed per degree and combined by
// the maximum. Candidate values are 0, the nonnegative endpoint differences and
// their pairwise sums. Exact when every smaller candidate was refuted.
DistanceReport gamma(const Barcode& f, const Barcode& g, const InterleavingOptions& options = {});
// Same with a = b.
DistanceReport gamma_symmetric(const Barcode& f, const Barcode& g,
                               const InterleavingOptions& options = {});

// Bars matched when both endpoints move by at most delta; unmatched bars must
// have length <= 2 delta. Converted to diagonal u, v with a = b = delta and verified.
std::optional<InterleavingCertificate> matching_witness(const Barcode& f, const Barcode& g,
                                                        const Rational& delta,
                                                        Field field = Field());

// Some g: target(f) -> shift(source(f), eps) with g ∘ f = tau(source(f), eps), found by
// solving the linear system over the field.
std::optional<Morphism> solve_reverse_map(const Morphism& f, const Rational& eps);

}  // namespace sheafbar
