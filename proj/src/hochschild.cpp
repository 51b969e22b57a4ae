#include "chw/hochschild.hpp"

#include <algorithm>

namespace chw {

namespace {

int par(const Hom& a) { return parity(a.degree); }
int par_sum(const std::vector<Hom>& a, int from, int to) {
    int s = 0;
    for (int i = from; i < to; ++i) s += par(a[i]);
    return s & 1;
}

std::string key_of(const Chain& c) {
    std::string k = std::to_string(c.u) + ";";
    for (auto& h : c.a)
        k += std::to_string(h.tgt) + "<" + std::to_string(h.src) + ":" + std::to_string(h.degree) + ":" + h.m.str() + "|";
    return k;
}

Chain with(const Chain& c, Scalar coeff, std::vector<Hom> a) { return Chain{std::move(coeff), c.u, std::move(a)}; }

}  // namespace

Hom identity_hom(const CategoryData& cat, int obj) { return Hom{obj, obj, cat.object(obj).e, 0}; }

Hom compose(const Hom& a, const Hom& b) {
    if (a.src != b.tgt) throw IncomposableChain("cannot compose morphisms: source " + std::to_string(a.src) +
                                                " vs target " + std::to_string(b.tgt));
    return Hom{a.tgt, b.src, a.m * b.m, a.degree + b.degree};
}

std::vector<Hom> homogeneous_parts(const CategoryData& cat, int tgt, int src, const FMat& m) {
    const auto& T = cat.object(tgt);
    const auto& S = cat.object(src);
    if (m.rows() != T.size() || m.cols() != S.size())
        throw IncomposableChain("morphism " + std::to_string(src) + " -> " + std::to_string(tgt) + " must be " +
                                std::to_string(T.size()) + "x" + std::to_string(S.size()));
    const RingPtr& r = cat.ring();
    std::map<long, FMat> parts;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            for (auto& t : m(i, j).terms()) {
                if (t.k.mask || t.k.u) throw InvalidInput("morphism entries must be ring elements");
                long d = r->reduce_degree(r->mono_degree(t.k.m) - T.degrees[i] + S.degrees[j]);
                auto it = parts.try_emplace(d, r, m.rows(), m.cols()).first;
                it->second(i, j) += Form::from_terms(r, {t});
            }
    std::vector<Hom> out;
    for (auto& [d, x] : parts) out.push_back(Hom{tgt, src, x, d});
    return out;
}

ChainSum::ChainSum(std::vector<Chain> terms) : terms_(std::move(terms)) { canonicalize(); }

void ChainSum::canonicalize() {
    std::map<std::string, Chain> merged;
    for (auto& c : terms_) {
        if (c.coeff.is_zero()) continue;
        if (std::any_of(c.a.begin(), c.a.end(), [](const Hom& h) { return h.m.is_zero(); })) continue;
        auto [it, fresh] = merged.try_emplace(key_of(c), c);
        if (!fresh) it->second.coeff += c.coeff;
    }
    terms_.clear();
    for (auto& [k, c] : merged)
        if (!c.coeff.is_zero()) terms_.push_back(std::move(c));
}

ChainSum& ChainSum::operator+=(const ChainSum& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
}

ChainSum ChainSum::operator*(const Scalar& s) const {
    std::vector<Chain> t = terms_;
    for (auto& c : t) c.coeff *= s;
    return ChainSum(std::move(t));
}

ChainSum ChainSum::shift_u(int k) const {
    std::vector<Chain> t = terms_;
    for (auto& c : t) c.u += k;
    return ChainSum(std::move(t));
}

void check_composable(const CategoryData& cat, const Chain& c) {
    int n = int(c.a.size());
    if (n == 0) throw IncomposableChain("chain has no head");
    for (int i = 0; i < n; ++i) {
        const Hom& h = c.a[i];
        if (h.tgt < 0 || h.src < 0 || h.tgt >= int(cat.objects.size()) || h.src >= int(cat.objects.size()))
            throw IncomposableChain("slot " + std::to_string(i) + " refers to an unknown object");
        if (h.m.rows() != cat.size(h.tgt) || h.m.cols() != cat.size(h.src))
            throw IncomposableChain("slot " + std::to_string(i) + " has the wrong shape");
        if (h.src != c.a[(i + 1) % n].tgt)
            throw IncomposableChain("slot " + std::to_string(i) + " source does not match the next target");
    }
}

ChainSum make_chain(const CategoryData& cat, const Scalar& coeff,
                    const std::vector<std::tuple<int, int, FMat>>& slots, int u) {
    std::vector<Chain> acc{Chain{coeff, u, {}}};
    for (auto& [t, s, m] : slots) {
        auto parts = homogeneous_parts(cat, t, s, m);
        std::vector<Chain> next;
        for (auto& c : acc)
            for (auto& p : parts) {
                Chain d = c;
                d.a.push_back(p);
                next.push_back(std::move(d));
            }
        acc = std::move(next);
    }
    for (auto& c : acc) check_composable(cat, c);
    return ChainSum(std::move(acc));
}

ChainSum b2(const ChainSum& c) {
    std::vector<Chain> out;
    for (auto& ch : c.terms()) {
        const auto& a = ch.a;
        int n = ch.length();
        if (n < 1) continue;
        {
            std::vector<Hom> b{compose(a[0], a[1])};
            b.insert(b.end(), a.begin() + 2, a.end());
            out.push_back(with(ch, par(a[0]) ? -ch.coeff : ch.coeff, std::move(b)));
        }
        for (int j = 1; j <= n - 1; ++j) {
            int e = (par_sum(a, 0, j + 1) + j) & 1;
            std::vector<Hom> b(a.begin(), a.begin() + j);
            b.push_back(compose(a[j], a[j + 1]));
            b.insert(b.end(), a.begin() + j + 2, a.end());
            out.push_back(with(ch, e ? -ch.coeff : ch.coeff, std::move(b)));
        }
        {
            int e = ((par(a[n]) + 1) & 1) * ((par_sum(a, 0, n) + n - 1) & 1);
            std::vector<Hom> b{compose(a[n], a[0])};
            b.insert(b.end(), a.begin() + 1, a.begin() + n);
            out.push_back(with(ch, e ? ch.coeff : -ch.coeff, std::move(b)));
        }
    }
    return ChainSum(std::move(out));
}

ChainSum b1(const ChainSum& c, const std::vector<FMat>& diffs) {
    auto del = [&](const Hom& g) {
        FMat x = diffs.at(g.tgt) * g.m;
        FMat y = g.m * diffs.at(g.src);
        return Hom{g.tgt, g.src, par(g) ? x + y : x - y, g.degree + 1};
    };
    std::vector<Chain> out;
    for (auto& ch : c.terms()) {
        const auto& a = ch.a;
        int n = ch.length();
        for (int j = 0; j <= n; ++j) {
            int e = j == 0 ? 0 : (par_sum(a, 0, j) + j) & 1;
            std::vector<Hom> b = a;
            b[j] = del(a[j]);
            out.push_back(with(ch, e ? -ch.coeff : ch.coeff, std::move(b)));
        }
    }
    return ChainSum(std::move(out));
}

ChainSum b0(const CategoryData& cat, const ChainSum& c) {
    std::vector<Chain> out;
    Form h(cat.algebra.h);
    for (auto& ch : c.terms()) {
        const auto& a = ch.a;
        int n = ch.length();
        for (int j = 0; j <= n; ++j) {
            int e = (par_sum(a, 0, j + 1) + j) & 1;
            int X = a[j].src;
            std::vector<Hom> b(a.begin(), a.begin() + j + 1);
            b.push_back(Hom{X, X, cat.object(X).e * h, 2});
            b.insert(b.end(), a.begin() + j + 1, a.end());
            out.push_back(with(ch, e ? -ch.coeff : ch.coeff, std::move(b)));
        }
    }
    return ChainSum(std::move(out));
}

ChainSum connes_B(const CategoryData& cat, const ChainSum& c) {
    std::vector<Chain> out;
    for (auto& ch : c.terms()) {
        const auto& a = ch.a;
        int n = ch.length();
        for (int l = 0; l <= n; ++l) {
            int p = (par_sum(a, l, n + 1) + n - l + 1) & 1;
            int q = (par_sum(a, 0, l) + l) & 1;
            std::vector<Hom> b{identity_hom(cat, a[l].tgt)};
            b.insert(b.end(), a.begin() + l, a.end());
            b.insert(b.end(), a.begin(), a.begin() + l);
            out.push_back(with(ch, (p & q) ? -ch.coeff : ch.coeff, std::move(b)));
        }
    }
    return reduce_chain(cat, ChainSum(std::move(out)));
}

bool is_identity_multiple(const CategoryData& cat, const Hom& a) {
    if (a.tgt != a.src) return false;
    const FMat& e = cat.object(a.tgt).e;
    // find the ratio at the first nonzero entry of e
    for (int i = 0; i < e.rows(); ++i)
        for (int j = 0; j < e.cols(); ++j) {
            const Form& x = e(i, j);
            if (x.is_zero()) continue;
            const Form& y = a.m(i, j);
            if (y.is_zero()) return a.m.is_zero();
            if (y.terms().size() != x.terms().size() || !(y.terms()[0].k == x.terms()[0].k)) return false;
            Scalar c = y.terms()[0].c / x.terms()[0].c;
            return e * c == a.m;
        }
    return a.m.is_zero();
}

ChainSum reduce_chain(const CategoryData& cat, const ChainSum& c) {
    std::vector<Chain> out;
    for (auto& ch : c.terms()) {
        bool drop = false;
        for (size_t i = 1; i < ch.a.size() && !drop; ++i) drop = is_identity_multiple(cat, ch.a[i]);
        if (!drop) out.push_back(ch);
    }
    return ChainSum(std::move(out));
}

Form hkr(const ChainSum& c) {
    Form out;
    for (auto& ch : c.terms()) {
        Form t = ch.a[0].m(0, 0);
        for (size_t i = 1; i < ch.a.size(); ++i) {
            if (ch.a[i].m.rows() != 1 || ch.a[i].m.cols() != 1) throw InvalidInput("hkr needs 1x1 slots");
            t = t * de_rham_d(ch.a[i].m(0, 0));
        }
        if (ch.a[0].m.rows() != 1 || ch.a[0].m.cols() != 1) throw InvalidInput("hkr needs 1x1 slots");
        out += t.shift_u(ch.u) * (ch.coeff / factorial(ch.length()));
    }
    return out;
}

CdgFunctor compose(const CdgFunctor& second, const CdgFunctor& first) {
    CdgFunctor F;
    auto r1 = first.rho, r2 = second.rho;
    F.rho = [r1, r2](const Hom& h) { return r2(Hom{h.tgt, h.src, r1(h), h.degree}); };
    size_t n = std::max(first.beta.size(), second.beta.size());
    F.beta.resize(n);
    for (size_t k = 0; k < n; ++k) {
        std::optional<FMat> b;
        if (k < first.beta.size() && first.beta[k]) b = r2(Hom{int(k), int(k), *first.beta[k], 1});
        if (k < second.beta.size() && second.beta[k]) b = b ? *b + *second.beta[k] : *second.beta[k];
        F.beta[k] = b;
    }
    return F;
}

ChainSum pushforward(const CdgFunctor& F, const ChainSum& c, int n_max) {
    std::vector<Chain> out;
    for (auto& ch : c.terms()) {
        int n = ch.length();
        if (n > n_max) continue;
        std::vector<Hom> img;
        for (auto& h : ch.a) img.push_back(Hom{h.tgt, h.src, F.rho(h), h.degree});
        // gap g follows slot g and sits at object a[g].src
        std::vector<const FMat*> beta(n + 1, nullptr);
        for (int g = 0; g <= n; ++g) {
            int X = ch.a[g].src;
            if (X < int(F.beta.size()) && F.beta[X] && !F.beta[X]->is_zero()) beta[g] = &*F.beta[X];
        }
        std::vector<int> cnt(n + 1, 0);
        std::function<void(int, int)> rec = [&](int g, int left) {
            if (g == n + 1) {
                int k = 0;
                std::vector<Hom> b;
                for (int s = 0; s <= n; ++s) {
                    b.push_back(img[s]);
                    for (int t = 0; t < cnt[s]; ++t) b.push_back(Hom{ch.a[s].src, ch.a[s].src, *beta[s], 1});
                    k += cnt[s];
                }
                out.push_back(with(ch, (k & 1) ? -ch.coeff : ch.coeff, std::move(b)));
                return;
            }
            int maxk = beta[g] ? left : 0;
            for (int k = 0; k <= maxk; ++k) {
                cnt[g] = k;
                rec(g + 1, left - k);
            }
            cnt[g] = 0;
        };
        rec(0, n_max - n);
    }
    return ChainSum(std::move(out));
}

TraceMap::TraceMap(const CategoryData& cat) : cat_(cat) {
    const RingPtr& r = cat.ring();
    for (auto& C : cat.objects) {
        FMat K = nabla_squared(C);
        FMat G = C.module.e, P = C.module.e;
        Form mu = Form::upow(r, 1) * Scalar(-1);
        for (int j = 1;; ++j) {
            P = P * K * mu;
            if (P.is_zero()) break;
            if (j > r->nvars()) throw Error("curvature powers fail to vanish");
            G += P;
        }
        G_.push_back(G);
    }
}

Form TraceMap::operator()(const Chain& ch) const {
    const auto& a = ch.a;
    int n = ch.length();
    FMat P = a[0].m * G_[a[0].src];
    for (int i = 1; i <= n && !P.is_zero(); ++i) {
        const Connection& Ct = cat_.objects[a[i].tgt];
        const Connection& Cs = cat_.objects[a[i].src];
        FMat d = covariant_derivative(Ct, Cs, a[i].m, par(a[i]));
        P = P * d * G_[a[i].src];
    }
    if (P.is_zero()) return Form::scalar(cat_.ring(), 0);
    Form s = supertrace(P, cat_.object(a[0].tgt).degrees);
    std::vector<Form::T> raw;
    for (auto& t : s.terms()) {
        FKey k = t.k;
        Scalar c = t.c * ch.coeff / factorial(int(k.u) + n);
        k.u += ch.u;
        raw.push_back({k, c});
    }
    return Form::from_terms(cat_.ring(), std::move(raw));
}

Form TraceMap::operator()(const ChainSum& c) const {
    Form out = Form::scalar(cat_.ring(), 0);
    for (auto& ch : c.terms()) out += (*this)(ch);
    return out;
}

Form tr_nabla(const CategoryData& cat, const ChainSum& c) { return TraceMap(cat)(c); }

Form chern_via_chains(const Connection& C) {
    const auto& M = C.module;
    const RingPtr& r = M.ring();
    CategoryData cat;
    cat.algebra = CurvedAlgebra{r, RingElement(r, 0)};
    Connection C0 = C;
    C0.module.delta = FMat(r, M.size(), M.size());
    cat.objects.push_back(C0);
    ChainSum one({Chain{Scalar(1), 0, {identity_hom(cat, 0)}}});
    CdgFunctor F;
    F.rho = [](const Hom& h) { return h.m; };
    F.beta = {M.delta};
    return TraceMap(cat)(pushforward(F, one, r->nvars() + 1));
}

std::map<std::string, Scalar> chain_expansion(const ChainSum& c) {
    std::map<std::string, Scalar> out;
    for (auto& ch : c.terms()) {
        std::vector<std::pair<std::string, Scalar>> acc{{std::to_string(ch.u) + "/", ch.coeff}};
        for (auto& h : ch.a) {
            std::vector<std::pair<std::string, Scalar>> next;
            for (int i = 0; i < h.m.rows(); ++i)
                for (int j = 0; j < h.m.cols(); ++j)
                    for (auto& t : h.m(i, j).terms()) {
                        std::string k = "|" + std::to_string(h.tgt) + "<" + std::to_string(h.src) + "@" +
                                        std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(t.k.m.e);
                        for (auto& [p, s] : acc) next.push_back({p + k, s * t.c});
                    }
            acc = std::move(next);
        }
        for (auto& [k, s] : acc) out[k] += s;
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

bool chains_equal(const ChainSum& a, const ChainSum& b) {
    return chain_expansion(a + b * Scalar(-1)).empty();
}

std::string chain_str(const Chain& c) {
    std::string s = c.coeff.str();
    if (c.u) s += "*u^" + std::to_string(c.u);
    s += "*" + c.a[0].m.str() + "[";
    for (size_t i = 1; i < c.a.size(); ++i) s += (i > 1 ? " | " : "") + c.a[i].m.str();
    return s + "]";
}

}  // namespace chw
