#pragma once

#include "chw/matrix.hpp"
#include "chw/membership.hpp"

#include <optional>

namespace chw {

struct NonLinearCurvature : Error {
    using Error::Error;
};

struct CurvedAlgebra {
    RingPtr ring;
    RingElement h;  // Gamma-degree 2
};

// P = im(e) inside the graded free module with basis degrees `degrees`; delta is the odd twist.
struct CurvedModule {
    std::vector<long> degrees;
    FMat e;
    FMat delta;

    int size() const { return int(degrees.size()); }
    int parity(int i) const { return chw::parity(degrees[i]); }
    const RingPtr& ring() const { return e.ring(); }
};

CurvedModule free_module(const RingPtr& r, std::vector<long> degrees, const FMat& delta);

struct ModuleCheck {
    bool ok = true;
    std::vector<std::string> failures;
    FMat delta_sq;
    // c with delta^2 = c*e, when such c exists and tr(e) is a nonzero constant
    std::optional<RingElement> realized;
};

ModuleCheck check_module(const CurvedModule& M, const CurvedAlgebra& alg);

// Levi-Civita connection of the presentation plus an endomorphism-valued 1-form mu.
struct Connection {
    CurvedModule module;
    FMat mu;
};

Connection levi_civita(const CurvedModule& M);
Connection with_mu(const CurvedModule& M, const FMat& mu);
std::vector<std::string> check_connection(const Connection& C);

// nabla applied to columns of v (each column an element of P (x) Omega)
FMat apply_connection(const Connection& C, const FMat& v);

// parity of a homogeneous map between modules with the given basis degrees
std::optional<int> map_parity(const FMat& X, const std::vector<long>& tgt, const std::vector<long>& src);

// [nabla, X] = nabla_tgt X - (-1)^{|X|} X nabla_src, for X: src -> tgt
FMat covariant_derivative(const Connection& tgt, const Connection& src, const FMat& X, int parity);
FMat covariant_derivative(const Connection& C, const FMat& X);

FMat nabla_squared(const Connection& C);
FMat curvature_R(const Connection& C);

Form supertrace(const FMat& X, const std::vector<long>& degrees);

Form chern_weil(const Connection& C);

// In quotient rings, d of normal-formed coefficients is a derivation only modulo the
// relation submodule, so identities there are decided modulo that submodule.
struct IdentityCheck {
    bool ok = true;
    bool modulo_relation = false;  // residue nonzero but inside the relation submodule
    std::string detail;
};

// zero, or (quotient ring) inside the relation submodule
IdentityCheck zero_check(const std::vector<Form>& residues, const RingPtr& ring, const std::string& what,
                         int membership_bound = -1);

IdentityCheck cycle_check(const Form& ch, const RingElement& h, int membership_bound = -1);
IdentityCheck cycle_check(const Connection& C, const RingElement& h);
// [u nabla + delta, R] = dh e
IdentityCheck commutator_check(const Connection& C, const RingElement& h, int membership_bound = -1);

// c_1, c_2, ... via Newton's identities from str(K^j), K = nabla^2; requires delta = 0.
std::vector<Form> chern_classes(const Connection& C);

}  // namespace chw
