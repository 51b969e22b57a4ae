#pragma once

#include "chw/forms.hpp"
#include "chw/groebner.hpp"

#include <map>
#include <optional>

namespace chw {

struct NotTopForm : Error {
    NotTopForm() : Error("form is not a pure top-degree form") {}
};

struct MembershipCertificate {
    enum class Verdict { Member, NotMemberUpToBound };
    Verdict verdict = Verdict::NotMemberUpToBound;
    // (generator index, multiplier); present only for Member
    std::vector<std::pair<int, RingElement>> combination;
    int bound = 0;
    // target reduced modulo the span of the bounded columns (zero iff Member)
    Form remainder;

    bool member() const { return verdict == Verdict::Member; }
};

// Degree-bounded linear algebra over the columns m*g (g a generator, m a standard
// monomial of degree <= bound). Built once, then used for any number of targets.
class MembershipSolver {
public:
    MembershipSolver(const RingPtr& ring, std::vector<Form> gens, int bound);

    MembershipCertificate solve(const Form& target) const;
    // Reduced remainder only; remainders of two targets are comparable keywise.
    Form reduce(const Form& target) const;
    int bound() const { return bound_; }
    size_t rank() const { return pivots_.size(); }

private:
    struct KeyGreater {
        bool operator()(const FKey& a, const FKey& b) const { return fkey_less(b, a); }
    };
    using Vec = std::map<FKey, Scalar, KeyGreater>;
    struct Row {
        Vec v;
        std::map<int, Scalar> combo;
    };

    void reduce_full(Vec& v, std::map<int, Scalar>* combo) const;

    RingPtr ring_;
    std::vector<Form> gens_;
    int bound_;
    std::vector<std::pair<int, Mono>> cols_;
    std::map<FKey, Row, KeyGreater> pivots_;
};

MembershipCertificate module_membership(const Form& target, const std::vector<Form>& gens, int degree_bound);
int default_degree_bound(const Form& target);

// Generators of the relation submodule f*Omega^k + df ^ Omega^{k-1} for the ring's relation f.
std::vector<Form> relation_generators(const RingPtr& ring, int form_degree);

// The submodule f*Omega + df ^ Omega of the free exterior algebra over A = k[x]/(f), f the
// ring's relation. For smooth f a vector field X with i_X(df) = 1 in A exists; then w lies
// in the submodule iff w = df ^ i_X(w), an exactly checkable witness.
class RelationSubmodule {
public:
    // membership_bound < 0: default degree bound per form
    explicit RelationSubmodule(const RingPtr& ring, int field_bound = 2, int membership_bound = -1);

    bool has_field() const { return !field_.empty(); }
    const Form& df() const { return df_; }
    const std::vector<RingElement>& field() const { return field_; }
    // eta with w = df ^ eta exactly, when found
    std::optional<Form> witness(const Form& w) const;
    // exact when a field exists; otherwise degree-bounded search per form degree
    bool contains(const Form& w) const;

private:
    RingPtr ring_;
    Form df_;
    std::vector<RingElement> field_;
    int membership_bound_ = -1;
};

// interior product with the vector field sum X_i d/dx_i
Form contract(const Form& w, const std::vector<RingElement>& X);

RingElement milnor_representative(const Form& w, const RingElement& f);

// All monomials in n variables of total degree <= d, ascending grlex.
std::vector<Mono> monomials_up_to(int n, int d);

}  // namespace chw
