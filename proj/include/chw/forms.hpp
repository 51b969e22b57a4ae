#pragma once

#include "chw/ring.hpp"

#include <bit>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace chw {

// u^u * m * dx_mask
struct FKey {
    std::uint32_t u = 0;
    std::uint32_t mask = 0;
    Mono m;
    friend bool operator==(const FKey& a, const FKey& b) { return a.u == b.u && a.mask == b.mask && a.m == b.m; }
};

// subsets compared as sorted index lists
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
    std::uint32_t x = a ^ b;
    if (!x) return false;
    std::uint32_t low = x & (~x + 1);
    return (a & low) != 0;
}

// u ascending, form degree ascending, wedge monomial, then ring monomial descending
inline bool fkey_less(const FKey& a, const FKey& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.mask != b.mask) {
        int pa = std::popcount(a.mask), pb = std::popcount(b.mask);
        if (pa != pb) return pa < pb;
        return mask_lex_less(a.mask, b.mask);
    }
    return grlex_less(b.m, a.m);
}

struct FKeyHash {
    size_t operator()(const FKey& k) const {
        std::uint64_t h = k.m.e * 0x9E3779B97F4A7C15ull;
        h ^= (std::uint64_t(k.mask) << 32 | k.u) * 0xC2B2AE3D27D4EB4Full;
        return size_t(h ^ (h >> 29));
    }
};

// (-1)^{number of pairs i in a, j in b with i > j}: sign of dx_a ^ dx_b vs dx_{a|b}
inline int wedge_sign(std::uint32_t a, std::uint32_t b) {
    int n = 0;
    while (b) {
        int j = std::countr_zero(b);
        n += std::popcount(j >= 31 ? 0u : (a >> (j + 1)));
        b &= b - 1;
    }
    return (n & 1) ? -1 : 1;
}

// Element of Omega[u] over a graded ring: differential forms on the free exterior algebra
// in dx_1..dx_n with normal-formed coefficients, times powers of u (|u| = 2).
// DiffForm and USeries are the same representation; a DiffForm has only u^0 terms.
class Form {
public:
    struct T {
        FKey k;
        Scalar c;
    };

    Form() = default;
    Form(const RingElement& a);
    static Form scalar(const RingPtr& r, const Scalar& c) { return Form(RingElement(r, c)); }
    static Form dx(const RingPtr& r, int i);
    static Form upow(const RingPtr& r, int k);
    static Form from_terms(const RingPtr& r, std::vector<T> raw);

    const RingPtr& ring() const { return ring_; }
    const std::vector<T>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }

    Form operator-() const;
    Form& operator+=(const Form& o);
    Form& operator-=(const Form& o);
    Form& operator*=(const Scalar& s);
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const Form& a, const Form& b);
    friend Form operator*(Form a, const Scalar& s) { return a *= s; }
    friend Form operator*(const Scalar& s, Form a) { return a *= s; }
    friend bool operator==(const Form& a, const Form& b);

    // coefficient of u^J (a DiffForm)
    Form coeff_u(int J) const;
    int max_u() const;
    // homogeneous component of form degree k (all u powers)
    Form form_part(int k) const;
    Form shift_u(int k) const;
    bool is_diff_form() const;  // no u terms
    // ring coefficient of u^0 dx_mask
    RingElement coeff(std::uint32_t mask, int J = 0) const;

    std::optional<long> gamma_degree() const;

    std::string str() const;

private:
    RingPtr ring_;
    std::vector<T> t_;  // sorted by fkey_less, nonzero
};

using DiffForm = Form;
using USeries = Form;

Form wedge(const Form& a, const Form& b);
Form de_rham_d(const Form& w);
Form useries_add(const Form& p, const Form& q);
Form useries_mul(const Form& p, const Form& q);
// u*d(p) + dh ^ p
Form hn_differential(const Form& p, const RingElement& h);
// u -> -u
Form tau(const Form& p);
Form dh_of(const RingElement& h);

// Sum of products accumulated before a single normal-form pass.
class FormAcc {
public:
    void add(const Form& a);
    void add_product(const Form& a, const Form& b, const Scalar& scale = 1);
    Form finish(const RingPtr& r);
    bool empty() const { return acc_.empty(); }

private:
    std::unordered_map<FKey, Scalar, FKeyHash> acc_;
    RingPtr ring_;
};

}  // namespace chw
