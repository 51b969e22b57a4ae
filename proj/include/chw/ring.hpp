#pragma once

#include "chw/scalar.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace chw {

struct IncompatibleRings : Error {
    IncompatibleRings() : Error("elements belong to different rings") {}
};
struct InvalidInput : Error {
    using Error::Error;
};

constexpr int kMaxVars = 8;

// Exponent vector packed one byte per variable; variable 0 occupies the top byte,
// so integer comparison of equal-degree monomials is lex with x0 > x1 > ...
struct Mono {
    std::uint64_t e = 0;

    static int shift(int i) { return 56 - 8 * i; }
    static Mono var(int i, int power = 1) { return Mono{std::uint64_t(power) << shift(i)}; }
    int exp(int i) const { return int((e >> shift(i)) & 0xFF); }
    int deg() const {
        std::uint64_t s = (e & 0x00FF00FF00FF00FFull) + ((e >> 8) & 0x00FF00FF00FF00FFull);
        s = (s & 0x0000FFFF0000FFFFull) + ((s >> 16) & 0x0000FFFF0000FFFFull);
        return int((s & 0xFFFFFFFFull) + (s >> 32));
    }
    bool is_one() const { return e == 0; }
    bool divides(Mono o) const {
        for (int i = 0; i < kMaxVars; ++i)
            if (exp(i) > o.exp(i)) return false;
        return true;
    }
    Mono operator*(Mono o) const { return Mono{e + o.e}; }
    Mono operator/(Mono o) const { return Mono{e - o.e}; }
    Mono lcm(Mono o) const {
        Mono r;
        for (int i = 0; i < kMaxVars; ++i) r.e |= std::uint64_t(std::max(exp(i), o.exp(i))) << shift(i);
        return r;
    }
    bool coprime(Mono o) const {
        for (int i = 0; i < kMaxVars; ++i)
            if (exp(i) && o.exp(i)) return false;
        return true;
    }
    friend bool operator==(Mono a, Mono b) { return a.e == b.e; }
    friend bool operator!=(Mono a, Mono b) { return a.e != b.e; }
};

// graded-lex: total degree first, then lex
inline bool grlex_less(Mono a, Mono b) {
    int da = a.deg(), db = b.deg();
    return da != db ? da < db : a.e < b.e;
}
struct GrlexGreater {
    bool operator()(Mono a, Mono b) const { return grlex_less(b, a); }
};

struct Term {
    Mono m;
    Scalar c;
};

enum class Grading { Z, Z2 };

struct Variable {
    std::string name;
    long degree = 0;
};

class GradedRing;
using RingPtr = std::shared_ptr<const GradedRing>;

class GradedRing {
public:
    static RingPtr make(Grading g, std::vector<Variable> vars);
    // Same variables, quotient by one relation (given by its terms over the free ring).
    static RingPtr quotient(const RingPtr& free_ring, std::vector<Term> relation);

    Grading grading() const { return grading_; }
    int nvars() const { return int(vars_.size()); }
    const std::vector<Variable>& vars() const { return vars_; }
    const std::string& var_name(int i) const { return vars_[i].name; }
    long var_degree(int i) const { return vars_[i].degree; }
    int var_index(const std::string& name) const;
    bool has_relation() const { return !relation_.empty(); }
    const std::vector<Term>& relation() const { return relation_; }
    // The relation-free ring on the same variables.
    RingPtr free_ring() const { return free_ ? free_ : self_.lock(); }

    long mono_degree(Mono m) const;
    long reduce_degree(long d) const { return grading_ == Grading::Z2 ? ((d % 2) + 2) % 2 : d; }
    bool same_degree(long a, long b) const { return reduce_degree(a) == reduce_degree(b); }

    // Sorts, merges, drops zeros and divides by the relation.
    std::vector<Term> normal_form(std::vector<Term> raw) const;
    bool is_standard(Mono m) const { return relation_.empty() || !relation_.front().m.divides(m); }

    std::string mono_str(Mono m) const;
    std::string describe() const;

private:
    Grading grading_ = Grading::Z;
    std::vector<Variable> vars_;
    std::vector<Term> relation_;  // monic, descending
    RingPtr free_;
    std::weak_ptr<const GradedRing> self_;
};

// Element of a graded ring, kept in normal form; terms in descending grlex order.
// A default-constructed element is the ring-less zero and combines with anything.
class RingElement {
public:
    RingElement() = default;
    RingElement(RingPtr r, const Scalar& c);
    static RingElement var(const RingPtr& r, int i, int power = 1);
    static RingElement monomial(const RingPtr& r, Mono m, const Scalar& c = 1);
    static RingElement from_terms(const RingPtr& r, std::vector<Term> raw);

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
    Scalar constant_term() const;
    const Term& lead() const { return t_.front(); }
    int total_degree() const { return t_.empty() ? -1 : t_.front().m.deg(); }

    // Common Gamma-degree of all terms, nullopt when inhomogeneous; zero reports 0.
    std::optional<long> gamma_degree() const;
    bool homogeneous_of(long d) const;

    RingElement operator-() const;
    RingElement& operator+=(const RingElement& o);
    RingElement& operator-=(const RingElement& o);
    RingElement& operator*=(const Scalar& s);
    friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
    friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
    friend RingElement operator*(const RingElement& a, const RingElement& b);
    friend RingElement operator*(RingElement a, const Scalar& s) { return a *= s; }
    friend RingElement operator*(const Scalar& s, RingElement a) { return a *= s; }
    friend bool operator==(const RingElement& a, const RingElement& b);
    RingElement pow(int n) const;
    RingElement partial(int i) const;
    RingElement monic() const;

    std::string str() const;

private:
    RingPtr ring_;
    std::vector<Term> t_;
    friend RingElement ring_normal_form(const std::vector<Term>&, const RingPtr&);
};

RingPtr common_ring(const RingPtr& a, const RingPtr& b);

RingElement ring_normal_form(const std::vector<Term>& raw, const RingPtr& r);
RingElement ring_mul(const RingElement& p, const RingElement& q);

}  // namespace chw
