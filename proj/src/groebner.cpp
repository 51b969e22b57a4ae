#include "chw/groebner.hpp"

#include <algorithm>
#include <map>

namespace chw {

namespace {

void require_free(const RingPtr& r) {
    if (r && r->has_relation()) throw InvalidInput("Groebner bases are only computed over relation-free rings");
}

struct Pair {
    size_t i, j;
    Mono lcm;
};

}  // namespace

std::vector<Mono> GroebnerBasis::leading_monomials() const {
    std::vector<Mono> out;
    for (auto& g : gens) out.push_back(g.lead().m);
    return out;
}

RingElement reduce_by(const RingElement& p, const std::vector<RingElement>& divisors) {
    if (p.is_zero()) return p;
    std::map<Mono, Scalar, GrlexGreater> work;
    for (auto& t : p.terms()) work.emplace(t.m, t.c);
    std::vector<Term> rem;
    while (!work.empty()) {
        auto it = work.begin();
        const RingElement* g = nullptr;
        for (auto& d : divisors)
            if (!d.is_zero() && d.lead().m.divides(it->first)) {
                g = &d;
                break;
            }
        if (!g) {
            rem.push_back({it->first, it->second});
            work.erase(it);
            continue;
        }
        Mono q = it->first / g->lead().m;
        Scalar c = it->second / g->lead().c;
        work.erase(it);
        auto& gt = g->terms();
        for (size_t k = 1; k < gt.size(); ++k) {
            Mono m = q * gt[k].m;
            Scalar v = c * gt[k].c;
            auto [pos, fresh] = work.emplace(m, -v);
            if (!fresh) {
                pos->second -= v;
                if (pos->second.is_zero()) work.erase(pos);
            }
        }
    }
    return RingElement::from_terms(p.ring(), std::move(rem));
}

GroebnerBasis buchberger(const std::vector<RingElement>& gens) {
    if (gens.empty()) throw EmptyIdeal();
    RingPtr ring;
    for (auto& g : gens) ring = common_ring(ring, g.ring());
    require_free(ring);

    std::vector<RingElement> G;
    for (auto& g : gens)
        if (!g.is_zero()) G.push_back(g.monic());
    std::vector<Pair> pairs;
    auto add_pairs = [&](size_t j) {
        for (size_t i = 0; i < j; ++i) pairs.push_back({i, j, G[i].lead().m.lcm(G[j].lead().m)});
    };
    for (size_t j = 1; j < G.size(); ++j) add_pairs(j);

    while (!pairs.empty()) {
        auto best = std::min_element(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.lcm != b.lcm) return grlex_less(a.lcm, b.lcm);
            return a.j != b.j ? a.j < b.j : a.i < b.i;
        });
        Pair p = *best;
        pairs.erase(best);
        const RingElement &f = G[p.i], &g = G[p.j];
        if (f.lead().m.coprime(g.lead().m)) continue;
        RingElement s = RingElement::monomial(ring, p.lcm / f.lead().m) * f -
                        RingElement::monomial(ring, p.lcm / g.lead().m) * g;
        RingElement r = reduce_by(s, G);
        if (r.is_zero()) continue;
        G.push_back(r.monic());
        add_pairs(G.size() - 1);
    }

    // minimal basis, then interreduce tails
    std::vector<RingElement> M;
    for (size_t i = 0; i < G.size(); ++i) {
        bool redundant = false;
        for (size_t j = 0; j < G.size() && !redundant; ++j) {
            if (i == j) continue;
            Mono a = G[j].lead().m, b = G[i].lead().m;
            if (a.divides(b) && (a != b || j < i)) redundant = true;
        }
        if (!redundant) M.push_back(G[i]);
    }
    std::sort(M.begin(), M.end(), [](const RingElement& a, const RingElement& b) {
        return grlex_less(a.lead().m, b.lead().m);
    });
    for (size_t i = 0; i < M.size(); ++i) {
        std::vector<RingElement> others;
        for (size_t j = 0; j < M.size(); ++j)
            if (j != i) others.push_back(M[j]);
        RingElement lead = RingElement::monomial(ring, M[i].lead().m);
        M[i] = (lead + reduce_by(M[i] - lead, others)).monic();
    }
    return {ring, M};
}

RingElement ideal_nf(const RingElement& p, const GroebnerBasis& G) {
    common_ring(p.ring(), G.ring);
    return reduce_by(p, G.gens);
}

std::vector<RingElement> jacobian(const RingElement& f) {
    std::vector<RingElement> J;
    if (!f.ring()) return J;
    for (int i = 0; i < f.ring()->nvars(); ++i) J.push_back(f.partial(i));
    return J;
}

MilnorResult milnor_number(const RingElement& f, long cap) {
    if (f.is_constant()) throw ZeroJacobianIdeal();
    require_free(f.ring());
    MilnorResult res;
    res.cap = cap;
    res.gb = buchberger(jacobian(f));
    if (res.gb.is_unit_ideal()) {
        res.mu = 0;
        res.note = "Jacobian ideal is the unit ideal (smooth)";
        return res;
    }
    int n = f.ring()->nvars();
    auto lts = res.gb.leading_monomials();
    std::vector<int> bound(n, -1);
    for (Mono m : lts)
        for (int i = 0; i < n; ++i)
            if (m.exp(i) > 0 && Mono::var(i, m.exp(i)) == m) bound[i] = bound[i] < 0 ? m.exp(i) : std::min(bound[i], m.exp(i));
    for (int i = 0; i < n; ++i)
        if (bound[i] < 0) {
            res.infinite = true;
            res.note = "no pure power of " + f.ring()->var_name(i) +
                       " among leading terms; standard monomials are unbounded (singularity not isolated)";
            return res;
        }
    std::vector<int> e(n, 0);
    while (true) {
        Mono m;
        for (int i = 0; i < n; ++i) m = m * Mono::var(i, e[i]);
        bool standard = std::none_of(lts.begin(), lts.end(), [&](Mono l) { return l.divides(m); });
        if (standard) {
            if (long(res.standard.size()) >= cap) {
                res.infinite = true;
                res.capped = true;
                res.note = "standard monomial count exceeds cap " + std::to_string(cap);
                res.standard.clear();
                return res;
            }
            res.standard.push_back(m);
        }
        int k = 0;
        while (k < n && ++e[k] >= bound[k]) e[k++] = 0;
        if (k == n) break;
    }
    std::sort(res.standard.begin(), res.standard.end(), grlex_less);
    res.mu = long(res.standard.size());
    return res;
}

}  // namespace chw
