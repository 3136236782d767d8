#pragma once

#include "sheafbar/barcode.hpp"
#include "sheafbar/morphism.hpp"

namespace sheafbar {

// At most one nonzero entry per row and per column.
bool is_diagonal(const Morphism& m);

// Cone of a morphism in diagonal form, read off pair by pair.
// A matched pair [a,b) -> [c,d) in degree d gives (d, [b,d)) when b < d and
// (d+1, [a,c)) when a < c; an unmatched source bar moves to degree d+1 and
// an unmatched target bar stays. Throws DomainError on non-diagonal input.
Barcode cone_diagonal(const Morphism& m);

// Cone of an arbitrary morphism: kernel bars in degree d+1, cokernel bars in
// degree d, computed from stalk ranks on the common refinement of all endpoints.
Barcode cone(const Morphism& m);

// gamma_to_zero(cone(m)).
Endpoint cone_gamma(const Morphism& m);

}  // namespace sheafbar
