#include "chw/ring.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace chw {

namespace {

struct MonoHash {
    size_t operator()(std::uint64_t e) const { return std::hash<std::uint64_t>()(e * 0x9E3779B97F4A7C15ull); }
};

std::vector<Term> merge_sorted(std::vector<Term> raw) {
    std::sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return grlex_less(b.m, a.m); });
    std::vector<Term> out;
    out.reserve(raw.size());
    for (auto& t : raw) {
        if (!out.empty() && out.back().m == t.m)
            out.back().c += t.c;
        else {
            if (!out.empty() && out.back().c.is_zero()) out.pop_back();
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && out.back().c.is_zero()) out.pop_back();
    return out;
}

}  // namespace

RingPtr GradedRing::make(Grading g, std::vector<Variable> vars) {
    if (int(vars.size()) > kMaxVars) throw InvalidInput("at most " + std::to_string(kMaxVars) + " variables are supported");
    for (size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].degree % 2 != 0) throw InvalidInput("variable " + vars[i].name + " must have even degree");
        if (vars[i].name.empty() || vars[i].name == "i" || vars[i].name == "u" || vars[i].name == "d")
            throw InvalidInput("reserved or empty variable name '" + vars[i].name + "'");
        for (size_t j = 0; j < i; ++j)
            if (vars[j].name == vars[i].name) throw InvalidInput("duplicate variable " + vars[i].name);
    }
    auto r = std::make_shared<GradedRing>();
    r->grading_ = g;
    r->vars_ = std::move(vars);
    r->self_ = r;
    return r;
}

RingPtr GradedRing::quotient(const RingPtr& free_ring, std::vector<Term> relation) {
    if (free_ring->has_relation()) throw InvalidInput("only a single relation is supported");
    auto rel = merge_sorted(std::move(relation));
    if (rel.empty()) return free_ring;
    if (rel.front().m.is_one()) throw InvalidInput("relation is a unit; the quotient ring is zero");
    long d0 = free_ring->mono_degree(rel.front().m);
    for (auto& t : rel)
        if (!free_ring->same_degree(free_ring->mono_degree(t.m), d0) || !free_ring->same_degree(d0, 0))
            throw InvalidInput("relation must be homogeneous of degree 0");
    Scalar lc = rel.front().c.inv();
    for (auto& t : rel) t.c *= lc;
    auto r = std::make_shared<GradedRing>();
    r->grading_ = free_ring->grading_;
    r->vars_ = free_ring->vars_;
    r->relation_ = std::move(rel);
    r->free_ = free_ring;
    r->self_ = r;
    return r;
}

int GradedRing::var_index(const std::string& name) const {
    for (int i = 0; i < nvars(); ++i)
        if (vars_[i].name == name) return i;
    return -1;
}

long GradedRing::mono_degree(Mono m) const {
    long d = 0;
    for (int i = 0; i < nvars(); ++i) d += long(m.exp(i)) * vars_[i].degree;
    return reduce_degree(d);
}

std::vector<Term> GradedRing::normal_form(std::vector<Term> raw) const {
    auto t = merge_sorted(std::move(raw));
    if (relation_.empty()) return t;
    Mono L = relation_.front().m;
    if (std::none_of(t.begin(), t.end(), [&](const Term& x) { return L.divides(x.m); })) return t;

    std::map<Mono, Scalar, GrlexGreater> work;
    for (auto& x : t) work.emplace(x.m, std::move(x.c));
    std::vector<Term> out;
    while (!work.empty()) {
        auto it = work.begin();
        if (!L.divides(it->first)) {
            out.push_back({it->first, std::move(it->second)});
            work.erase(it);
            continue;
        }
        Mono q = it->first / L;
        Scalar c = std::move(it->second);
        work.erase(it);
        for (size_t k = 1; k < relation_.size(); ++k) {
            Mono m = q * relation_[k].m;
            Scalar v = c * relation_[k].c;
            auto [pos, fresh] = work.emplace(m, -v);
            if (!fresh) {
                pos->second -= v;
                if (pos->second.is_zero()) work.erase(pos);
            }
        }
    }
    return out;
}

std::string GradedRing::mono_str(Mono m) const {
    std::string s;
    for (int i = 0; i < nvars(); ++i) {
        int k = m.exp(i);
        if (!k) continue;
        if (!s.empty()) s += "*";
        s += vars_[i].name;
        if (k > 1) s += "^" + std::to_string(k);
    }
    return s.empty() ? "1" : s;
}

std::string GradedRing::describe() const {
    std::ostringstream o;
    o << (grading_ == Grading::Z ? "Z" : "Z2") << "-graded Q(i)[";
    for (int i = 0; i < nvars(); ++i) o << (i ? "," : "") << vars_[i].name << ":" << vars_[i].degree;
    o << "]";
    if (has_relation()) {
        RingElement f = RingElement::from_terms(free_ring(), relation_);
        o << "/(" << f.str() << ")";
    }
    return o.str();
}

RingPtr common_ring(const RingPtr& a, const RingPtr& b) {
    if (!a) return b;
    if (!b || a == b) return a;
    throw IncompatibleRings();
}

RingElement::RingElement(RingPtr r, const Scalar& c) : ring_(std::move(r)) {
    if (!c.is_zero()) t_.push_back({Mono{}, c});
}

RingElement RingElement::var(const RingPtr& r, int i, int power) { return monomial(r, Mono::var(i, power)); }

RingElement RingElement::monomial(const RingPtr& r, Mono m, const Scalar& c) { return from_terms(r, {{m, c}}); }

RingElement RingElement::from_terms(const RingPtr& r, std::vector<Term> raw) { return ring_normal_form(raw, r); }

RingElement ring_normal_form(const std::vector<Term>& raw, const RingPtr& r) {
    RingElement e;
    e.ring_ = r;
    e.t_ = r->normal_form(raw);
    return e;
}

Scalar RingElement::constant_term() const {
    if (!t_.empty() && t_.back().m.is_one()) return t_.back().c;
    return Scalar();
}

std::optional<long> RingElement::gamma_degree() const {
    if (t_.empty()) return 0;
    long d = ring_->mono_degree(t_.front().m);
    for (auto& t : t_)
        if (ring_->mono_degree(t.m) != d) return std::nullopt;
    return d;
}

bool RingElement::homogeneous_of(long d) const {
    if (t_.empty()) return true;
    for (auto& t : t_)
        if (!ring_->same_degree(ring_->mono_degree(t.m), d)) return false;
    return true;
}

RingElement RingElement::operator-() const {
    RingElement r = *this;
    for (auto& t : r.t_) t.c = -t.c;
    return r;
}

RingElement& RingElement::operator+=(const RingElement& o) {
    ring_ = common_ring(ring_, o.ring_);
    if (o.t_.empty()) return *this;
    std::vector<Term> out;
    out.reserve(t_.size() + o.t_.size());
    size_t i = 0, j = 0;
    while (i < t_.size() || j < o.t_.size()) {
        if (j == o.t_.size() || (i < t_.size() && grlex_less(o.t_[j].m, t_[i].m)))
            out.push_back(std::move(t_[i++]));
        else if (i == t_.size() || grlex_less(t_[i].m, o.t_[j].m))
            out.push_back(o.t_[j++]);
        else {
            Scalar c = t_[i].c + o.t_[j].c;
            if (!c.is_zero()) out.push_back({t_[i].m, std::move(c)});
            ++i, ++j;
        }
    }
    t_ = std::move(out);
    return *this;
}

RingElement& RingElement::operator-=(const RingElement& o) { return *this += -o; }

RingElement& RingElement::operator*=(const Scalar& s) {
    if (s.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto& t : t_) t.c *= s;
    return *this;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    RingPtr r = common_ring(a.ring_, b.ring_);
    if (a.is_zero() || b.is_zero()) return RingElement(r, 0);
    std::unordered_map<std::uint64_t, Scalar, MonoHash> acc;
    acc.reserve(a.t_.size() * b.t_.size());
    for (auto& x : a.t_)
        for (auto& y : b.t_) acc[(x.m * y.m).e] += x.c * y.c;
    std::vector<Term> raw;
    raw.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (!c.is_zero()) raw.push_back({Mono{m}, std::move(c)});
    return ring_normal_form(raw, r);
}

RingElement ring_mul(const RingElement& p, const RingElement& q) { return p * q; }

bool operator==(const RingElement& a, const RingElement& b) {
    if (a.ring_ && b.ring_ && a.ring_ != b.ring_) throw IncompatibleRings();
    if (a.t_.size() != b.t_.size()) return false;
    for (size_t i = 0; i < a.t_.size(); ++i)
        if (a.t_[i].m != b.t_[i].m || !(a.t_[i].c == b.t_[i].c)) return false;
    return true;
}

RingElement RingElement::pow(int n) const {
    RingElement r(ring_, 1), b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

RingElement RingElement::partial(int i) const {
    std::vector<Term> raw;
    for (auto& t : t_) {
        int k = t.m.exp(i);
        if (!k) continue;
        raw.push_back({t.m / Mono::var(i), t.c * Scalar(long(k))});
    }
    if (!ring_) return {};
    return ring_normal_form(raw, ring_);
}

RingElement RingElement::monic() const {
    if (t_.empty()) return *this;
    return *this * t_.front().c.inv();
}

std::string RingElement::str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (size_t k = 0; k < t_.size(); ++k) {
        const Term& t = t_[k];
        std::string c = t.c.str();
        bool neg = c[0] == '-';
        if (neg) c = c.substr(1);
        if (k)
            s += neg ? " - " : " + ";
        else if (neg)
            s += "-";
        if (t.m.is_one())
            s += c;
        else if (c == "1")
            s += ring_->mono_str(t.m);
        else
            s += c + "*" + ring_->mono_str(t.m);
    }
    return s;
}

}  // namespace chw
