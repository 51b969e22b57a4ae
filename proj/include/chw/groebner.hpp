#pragma once

#include "chw/ring.hpp"

#include <vector>

namespace chw {

struct EmptyIdeal : Error {
    EmptyIdeal() : Error("empty generator list") {}
};
struct ZeroJacobianIdeal : Error {
    ZeroJacobianIdeal() : Error("f is constant, its Jacobian ideal is zero") {}
};

// Reduced, monic; sorted by ascending leading monomial.
struct GroebnerBasis {
    RingPtr ring;
    std::vector<RingElement> gens;

    bool is_unit_ideal() const { return gens.size() == 1 && gens[0].is_constant(); }
    std::vector<Mono> leading_monomials() const;
};

GroebnerBasis buchberger(const std::vector<RingElement>& gens);
RingElement ideal_nf(const RingElement& p, const GroebnerBasis& G);
// Full multivariate division by an arbitrary list (no basis property assumed).
RingElement reduce_by(const RingElement& p, const std::vector<RingElement>& divisors);

std::vector<RingElement> jacobian(const RingElement& f);

struct MilnorResult {
    bool infinite = false;
    bool capped = false;
    long mu = 0;
    long cap = 10000;
    GroebnerBasis gb;
    std::vector<Mono> standard;
    std::string note;
};

MilnorResult milnor_number(const RingElement& f, long cap = 10000);

}  // namespace chw
