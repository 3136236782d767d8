#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "sheafbar/barcode.hpp"
#include "sheafbar/interleaving.hpp"
#include "sheafbar/morphism.hpp"

namespace sheafbar {

// Tower F_0 -> F_1 -> ... -> F_N with slacks eps_n and optional reverse maps
// g_n: F_{n+1} -> shift(F_n, eps_n) satisfying g_n ∘ f_n = tau(F_n, eps_n).
struct InductiveSystem {
  std::vector<Barcode> stages;
  std::vector<Morphism> maps;
  std::vector<Rational> slacks;
  std::vector<std::optional<Morphism>> reverse_maps;  // empty or one per map

  // Throws DomainError when sizes, endpoints or the tau equations disagree.
  void validate() const;
};

struct HocolimOptions {
  // Replace chain endpoints by their limits when the chain is eventually
  // constant or eventually geometric (three equal consecutive ratios).
  bool exact = false;
};

struct HocolimResult {
  Barcode barcode;
  // Bound on gamma(barcode, true hocolim) from the cone tail; +inf when the
  // cone values give no decaying tail model.
  Endpoint error_bound;
  bool exact = false;  // every chain endpoint was resolved to its limit
  // cone_gammas[k] = gamma(0, C(f_k)).
  std::vector<Endpoint> cone_gammas;
  // Stage index where each output bar's chain starts.
  std::vector<std::size_t> chain_start;
};

// Follows sigma chains of the diagonalized tower (bars longer than twice the
// slack) and reports their endpoints at the last stage, or their limits in
// exact mode. Missing reverse maps are solved for; failure raises StageError.
HocolimResult hocolim(const InductiveSystem& system, const HocolimOptions& options = {});

// Reverse maps completed by solve_reverse_map, or StageError for a stage
// without one.
std::vector<Morphism> reverse_maps_or_solve(const InductiveSystem& system);

struct DefectReport {
  Endpoint lhs;  // gamma(0, C(F_n -> F_N)) through the diagonalized maps
  Endpoint rhs;  // 2 * sum_{k=n}^{N-1} gamma(0, C(f_k))
  bool holds = false;
};

DefectReport defect_check(const InductiveSystem& system, std::size_t n);

struct CompletionOptions {
  InterleavingOptions interleaving;
  HocolimOptions hocolim{true};
};

struct CompletionResult {
  Barcode barcode;
  std::vector<std::size_t> kept;  // indices of the input used after subsampling
  std::vector<InterleavingCertificate> certificates;  // between consecutive kept stages
  InductiveSystem shifted;        // stage k moved left by 2^{1-k}
  HocolimResult limit;
  Endpoint final_gamma;           // gamma(barcode, last input)
};

// Subsamples so that kept stage k is within 2^{-k} of every later stage,
// certifies consecutive pairs, shifts stage k left by sum_{j>=k} 2^{-j} and
// takes the hocolim. Throws DomainError when the sequence is not Cauchy enough,
// a certificate search fails, or the final distance exceeds tol.
CompletionResult complete_cauchy(const std::vector<Barcode>& sequence, const Rational& tol,
                                 const CompletionOptions& options = {});

// Directory with F0.bc, F1.bc, ..., f0.mor, ..., optional g0.mor, ... and an
// optional slacks.txt (one rational per line; zero when absent).
InductiveSystem load_system(const std::filesystem::path& dir, Field field = Field());

}  // namespace sheafbar
