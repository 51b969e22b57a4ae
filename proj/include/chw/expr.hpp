#pragma once

#include "chw/forms.hpp"

namespace chw {

// Grammar: sums/differences of products of factors; a factor is an integer literal,
// the literal i, the formal u, a variable name, d(var) (also dvar when no variable has
// that name), or a parenthesized expression, optionally raised to a non-negative integer
// power. Division is allowed by nonzero constants, so rationals are written 3/2.
// The wedge sign is accepted as a product, so printed forms parse back.
Form parse_form(const std::string& s, const RingPtr& ring);
RingElement parse_poly(const std::string& s, const RingPtr& ring);

}  // namespace chw
