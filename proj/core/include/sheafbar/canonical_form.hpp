#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sheafbar/errors.hpp"
#include "sheafbar/morphism.hpp"

namespace sheafbar {

struct CanonicalFormResult {
  Morphism phi;                    // automorphism of the target barcode
  std::vector<std::size_t> sigma;  // source bar index -> target bar index, injective
  Morphism diagonalized;           // phi ∘ u: entry 1 exactly at (sigma[i], i)
};

// The hypotheses hold but no target automorphism reaches diagonal form:
// a residual entry sits on a row that no smaller row can clear.
class NotDiagonalizable : public DomainError {
 public:
  using DomainError::DomainError;
};

// Failure inside a multi-stage computation, tagged with the stage index.
class StageError : public DomainError {
 public:
  StageError(std::size_t stage, const std::string& what)
      : DomainError("stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
  std::size_t stage() const noexcept { return stage_; }

 private:
  std::size_t stage_;
};

// Diagonalizes u: G -> G' by a change of basis on G', given v: G' -> shift(G, eps)
// with v ∘ u = tau(G, eps). G and G' must share a single degree and every bar of
// G must be longer than eps; violations raise DomainError naming the culprit.
CanonicalFormResult canonical_form(const Morphism& u, const Morphism& v, const Rational& eps);

// Sub-matrix on the given (ascending) source and target indices.
Morphism submorphism(const Morphism& m, const std::vector<std::size_t>& source_indices,
                     const std::vector<std::size_t>& target_indices);

struct DiagonalizedSystem {
  std::vector<Morphism> f_hat;  // phi_{n+1} ∘ f_n ∘ phi_n^{-1}
  std::vector<Morphism> phi;    // phi[n] automorphism of stage n; phi[0] = id
  // sigma[n][i]: image in stage n+1 of bar i of stage n when the bar is long
  // (length > 2 eps_n), nullopt otherwise.
  std::vector<std::vector<std::optional<std::size_t>>> sigma;
};

// Stage-by-stage canonical form over a tower F_0 -> F_1 -> ... with reverse
// maps g_n: F_{n+1} -> shift(F_n, eps_n) satisfying g_n ∘ f_n = tau(F_n, eps_n).
// Graded stages are handled degree by degree. Errors are StageError.
DiagonalizedSystem diagonalize_system(const std::vector<Barcode>& stages,
                                      const std::vector<Morphism>& maps,
                                      const std::vector<Morphism>& reverse_maps,
                                      const std::vector<Rational>& slacks);

}  // namespace sheafbar
