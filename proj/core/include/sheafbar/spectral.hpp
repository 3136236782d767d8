#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <utility>
#include <vector>

#include "sheafbar/barcode.hpp"

namespace sheafbar {

// Which side the essential bars are infinite on.
//   LeftInfinite: essential bars are [-inf, b); the required ones sit in
//   degrees -1 and dim - 1.
//   Sublevel: essential bars are [a, +inf); the required ones sit in degrees
//   0 and dim.
enum class EssentialConvention { LeftInfinite, Sublevel };

struct SpectralReport {
  std::vector<std::pair<int, Rational>> invariants;  // (degree, finite endpoint) of every essential bar
  Rational c_minus;
  Rational c_plus;
  Rational gamma;  // c_plus - c_minus
};

// Throws DomainError when a required essential bar is missing or repeated, or
// when an essential bar has no finite endpoint.
SpectralReport spectral_invariants(const Barcode& b, EssentialConvention convention, int dim);

// x -> -x on endpoints: [a, b) becomes [-b, -a) in the same degree. Converts
// between the two conventions at the level of endpoints.
Barcode reverse_orientation(const Barcode& b);

enum class PLDomain { Interval, Circle };

// Piecewise-linear function given by its values at strictly increasing
// breakpoints; on the circle the last breakpoint is joined to the first.
struct PLFunction {
  PLDomain domain = PLDomain::Interval;
  std::vector<Rational> breakpoints;
  std::vector<Rational> values;

  // Throws DomainError on fewer than two samples, unsorted breakpoints or a
  // size mismatch.
  void validate() const;
  Rational min() const;
  Rational max() const;
};

// Lower-star persistence of the sublevel filtration. Degree-0 bars come from
// the elder rule on the merge tree; the oldest component gives [min, +inf).
// On the circle the loop closes at the maximum, giving (1, [max, +inf)).
Barcode sublevel_barcode(const PLFunction& f);

// "domain: circle|interval" header, then "<breakpoint> <value>" lines.
PLFunction parse_pl_function(std::string_view text);
PLFunction read_pl_function(const std::filesystem::path& path);

std::string_view to_string(EssentialConvention c);
std::string_view to_string(PLDomain d);

}  // namespace sheafbar
