#pragma once

#include "chw/expr.hpp"
#include "chw/hochschild.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <random>

namespace chw {
inline std::ostream& operator<<(std::ostream& os, const Form& w) { return os << w.str(); }
inline std::ostream& operator<<(std::ostream& os, const RingElement& p) { return os << p.str(); }
inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }
}  // namespace chw

namespace test {

using namespace chw;

inline RingPtr ring_of(std::vector<std::string> names, Grading g = Grading::Z2) {
    std::vector<Variable> v;
    for (auto& n : names) v.push_back({n, 0});
    return GradedRing::make(g, v);
}

inline RingPtr quotient_of(const RingPtr& free, const std::string& rel) {
    return GradedRing::quotient(free, parse_poly(rel, free).terms());
}

inline Form F(const std::string& s, const RingPtr& r) { return parse_form(s, r); }
inline RingElement P(const std::string& s, const RingPtr& r) { return parse_poly(s, r); }

inline FMat mat(const RingPtr& r, const std::vector<std::vector<std::string>>& rows) {
    FMat m(r, int(rows.size()), int(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(int(i), int(j)) = parse_form(rows[i][j], r);
    return m;
}

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    int operator()(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

    Scalar scalar() {
        long a = (*this)(-4, 4), b = (*this)(1, 3);
        Scalar s = Scalar::frac(a, b);
        if ((*this)(0, 3) == 0) s += Scalar::i() * Scalar((*this)(-2, 2));
        return s;
    }
    RingElement poly(const RingPtr& r, int maxdeg, int terms) {
        std::vector<Term> t;
        for (int k = 0; k < terms; ++k) {
            Mono m;
            int d = (*this)(0, maxdeg);
            for (int s = 0; s < d; ++s) m = m * Mono::var((*this)(0, r->nvars() - 1));
            t.push_back({m, scalar()});
        }
        return RingElement::from_terms(r, t);
    }
    // homogeneous form of form degree k
    Form form(const RingPtr& r, int k, int maxdeg, int terms) {
        Form out = Form::scalar(r, 0);
        int n = r->nvars();
        for (int t = 0; t < terms; ++t) {
            if (k > n) break;
            std::uint32_t mask = 0;
            while (std::popcount(mask) < k) mask |= 1u << (*this)(0, n - 1);
            Form w = Form(poly(r, maxdeg, 1));
            for (int i = 0; i < n; ++i)
                if (mask >> i & 1) w = w * Form::dx(r, i);
            out += w;
        }
        return out;
    }
    FMat matrix(const RingPtr& r, int rows, int cols, int maxdeg, double density = 0.6) {
        FMat m(r, rows, cols);
        std::bernoulli_distribution on(density);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (on(g)) m(i, j) = Form(poly(r, maxdeg, 2));
        return m;
    }
};

// Random finite curved category over r: 1-2 objects, sizes 1-3, mixed parities,
// idempotents conjugated by unipotents, random connection forms.
inline CategoryData random_category(Rng& rng, const RingPtr& r, RingElement h) {
    CategoryData cat;
    cat.algebra = {r, std::move(h)};
    int nobj = rng(1, 2);
    for (int k = 0; k < nobj; ++k) {
        int sz = rng(1, 3);
        std::vector<long> deg;
        for (int i = 0; i < sz; ++i) deg.push_back(rng(0, 1));
        FMat N(r, sz, sz);
        for (int i = 0; i < sz; ++i)
            for (int j = i + 1; j < sz; ++j)
                if (deg[i] == deg[j]) N(i, j) = Form(rng.poly(r, 1, 2));
        FMat I = FMat::identity(r, sz), g = I + N, gi = I - N + N * N;
        FMat D = I;
        if (sz > 1 && rng(0, 1)) D(sz - 1, sz - 1) = Form();
        FMat e = g * D * gi;
        CurvedModule M{deg, e, FMat(r, sz, sz)};
        FMat mu(r, sz, sz);
        for (int i = 0; i < sz; ++i)
            for (int j = 0; j < sz; ++j)
                if (deg[i] == deg[j] && rng(0, 1))
                    mu(i, j) = Form(rng.poly(r, 1, 1)) * Form::dx(r, rng(0, r->nvars() - 1));
        cat.objects.push_back(with_mu(M, e * mu * e));
    }
    return cat;
}

// cyclic chain of length n through random objects, slots e_t * X * e_s
inline ChainSum random_chain(Rng& rng, const CategoryData& cat, int n) {
    const RingPtr& r = cat.ring();
    int nobj = int(cat.objects.size());
    std::vector<int> X;
    for (int i = 0; i <= n; ++i) X.push_back(rng(0, nobj - 1));
    std::vector<std::tuple<int, int, FMat>> slots;
    for (int i = 0; i <= n; ++i) {
        int t = X[i], s = X[(i + 1) % (n + 1)];
        FMat m(r, cat.size(t), cat.size(s));
        for (int a = 0; a < m.rows(); ++a)
            for (int b = 0; b < m.cols(); ++b)
                if (rng(0, 2)) m(a, b) = Form(rng.poly(r, 2, 2));
        slots.push_back({t, s, cat.object(t).e * m * cat.object(s).e});
    }
    return make_chain(cat, 1, slots);
}

// Incremental row echelon form over Q(i), keyed vectors; an oracle independent of the
// library's membership solver.
template <class Key>
class Span {
public:
    using Vec = std::map<Key, Scalar>;
    // returns true when v was independent of the span so far
    bool add(Vec v) {
        reduce(v);
        if (v.empty()) return false;
        Key k = v.begin()->first;
        Scalar inv = v.begin()->second.inv();
        for (auto& [kk, c] : v) c *= inv;
        rows_.emplace(k, std::move(v));
        return true;
    }
    bool contains(Vec v) const {
        reduce(v);
        return v.empty();
    }
    size_t rank() const { return rows_.size(); }

private:
    void reduce(Vec& v) const {
        for (auto it = v.begin(); it != v.end();) {
            auto p = rows_.find(it->first);
            if (p == rows_.end()) {
                ++it;
                continue;
            }
            Scalar c = it->second;
            Key k = it->first;
            for (auto& [kk, x] : p->second) {
                Scalar& slot = v[kk];
                slot -= c * x;
            }
            for (auto jt = v.begin(); jt != v.end();) jt = jt->second.is_zero() ? v.erase(jt) : std::next(jt);
            it = v.upper_bound(k);
        }
    }
    std::map<Key, Vec> rows_;
};

inline std::map<std::uint64_t, Scalar> coeff_vec(const RingElement& p) {
    std::map<std::uint64_t, Scalar> v;
    for (auto& t : p.terms()) v[t.m.e] = t.c;
    return v;
}

inline std::vector<Mono> monos_upto(int n, int d) {
    std::vector<Mono> out{Mono{}};
    for (int k = 0; k < d; ++k) {
        std::vector<Mono> next;
        for (Mono m : out)
            for (int i = 0; i < n; ++i) next.push_back(m * Mono::var(i));
        for (Mono m : next)
            if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    return out;
}

}  // namespace test
