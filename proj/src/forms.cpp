#include "chw/forms.hpp"

#include <algorithm>
#include <map>

namespace chw {

namespace {

std::vector<Form::T> normalize(const RingPtr& r, std::vector<Form::T> raw) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Term>> groups;
    for (auto& t : raw) groups[{t.k.u, t.k.mask}].push_back({t.k.m, std::move(t.c)});
    std::vector<Form::T> out;
    for (auto& [key, terms] : groups) {
        auto nf = r->normal_form(std::move(terms));
        for (auto& t : nf) out.push_back({FKey{key.first, key.second, t.m}, std::move(t.c)});
    }
    std::sort(out.begin(), out.end(), [](const Form::T& a, const Form::T& b) { return fkey_less(a.k, b.k); });
    return out;
}

std::string wedge_str(const RingPtr& r, std::uint32_t mask) {
    std::string s;
    for (int i = 0; i < 32; ++i)
        if (mask >> i & 1) s += (s.empty() ? "d" : "∧d") + r->var_name(i);
    return s;
}

}  // namespace

Form::Form(const RingElement& a) : ring_(a.ring()) {
    for (auto& t : a.terms()) t_.push_back({FKey{0, 0, t.m}, t.c});
}

Form Form::dx(const RingPtr& r, int i) {
    Form f;
    f.ring_ = r;
    f.t_.push_back({FKey{0, 1u << i, Mono{}}, Scalar(1)});
    return f;
}

Form Form::upow(const RingPtr& r, int k) {
    Form f;
    f.ring_ = r;
    f.t_.push_back({FKey{std::uint32_t(k), 0, Mono{}}, Scalar(1)});
    return f;
}

Form Form::from_terms(const RingPtr& r, std::vector<T> raw) {
    Form f;
    f.ring_ = r;
    f.t_ = normalize(r, std::move(raw));
    return f;
}

Form Form::operator-() const {
    Form r = *this;
    for (auto& t : r.t_) t.c = -t.c;
    return r;
}

Form& Form::operator+=(const Form& o) {
    ring_ = common_ring(ring_, o.ring_);
    if (o.t_.empty()) return *this;
    std::vector<T> out;
    out.reserve(t_.size() + o.t_.size());
    size_t i = 0, j = 0;
    while (i < t_.size() || j < o.t_.size()) {
        if (j == o.t_.size() || (i < t_.size() && fkey_less(t_[i].k, o.t_[j].k)))
            out.push_back(std::move(t_[i++]));
        else if (i == t_.size() || fkey_less(o.t_[j].k, t_[i].k))
            out.push_back(o.t_[j++]);
        else {
            Scalar c = t_[i].c + o.t_[j].c;
            if (!c.is_zero()) out.push_back({t_[i].k, std::move(c)});
            ++i, ++j;
        }
    }
    t_ = std::move(out);
    return *this;
}

Form& Form::operator-=(const Form& o) { return *this += -o; }

Form& Form::operator*=(const Scalar& s) {
    if (s.is_zero()) {
        t_.clear();
        return *this;
    }
    for (auto& t : t_) t.c *= s;
    return *this;
}

Form operator*(const Form& a, const Form& b) {
    FormAcc acc;
    acc.add_product(a, b);
    return acc.finish(common_ring(a.ring_, b.ring_));
}

bool operator==(const Form& a, const Form& b) {
    if (a.ring_ && b.ring_ && a.ring_ != b.ring_) throw IncompatibleRings();
    if (a.t_.size() != b.t_.size()) return false;
    for (size_t i = 0; i < a.t_.size(); ++i)
        if (!(a.t_[i].k == b.t_[i].k) || !(a.t_[i].c == b.t_[i].c)) return false;
    return true;
}

Form Form::coeff_u(int J) const {
    Form f;
    f.ring_ = ring_;
    for (auto& t : t_)
        if (int(t.k.u) == J) f.t_.push_back({FKey{0, t.k.mask, t.k.m}, t.c});
    return f;
}

int Form::max_u() const {
    int m = -1;
    for (auto& t : t_) m = std::max(m, int(t.k.u));
    return m;
}

Form Form::form_part(int k) const {
    Form f;
    f.ring_ = ring_;
    for (auto& t : t_)
        if (std::popcount(t.k.mask) == k) f.t_.push_back(t);
    return f;
}

Form Form::shift_u(int k) const {
    Form f = *this;
    for (auto& t : f.t_) t.k.u += k;
    return f;
}

bool Form::is_diff_form() const {
    return std::all_of(t_.begin(), t_.end(), [](const T& t) { return t.k.u == 0; });
}

RingElement Form::coeff(std::uint32_t mask, int J) const {
    std::vector<Term> raw;
    for (auto& t : t_)
        if (t.k.mask == mask && int(t.k.u) == J) raw.push_back({t.k.m, t.c});
    if (!ring_) return {};
    return RingElement::from_terms(ring_, std::move(raw));
}

std::optional<long> Form::gamma_degree() const {
    if (t_.empty()) return 0;
    std::optional<long> d;
    for (auto& t : t_) {
        long v = ring_->mono_degree(t.k.m) + 2 * long(t.k.u);
        for (int i = 0; i < ring_->nvars(); ++i)
            if (t.k.mask >> i & 1) v += ring_->var_degree(i) - 1;
        v = ring_->reduce_degree(v);
        if (d && *d != v) return std::nullopt;
        d = v;
    }
    return d;
}

std::string Form::str() const {
    if (t_.empty()) return "0";
    std::string s;
    size_t i = 0;
    while (i < t_.size()) {
        size_t j = i;
        std::vector<Term> g;
        while (j < t_.size() && t_[j].k.u == t_[i].k.u && t_[j].k.mask == t_[i].k.mask) {
            g.push_back({t_[j].k.m, t_[j].c});
            ++j;
        }
        RingElement c = RingElement::from_terms(ring_, g);
        std::string cs = c.str();
        std::string tail;
        if (t_[i].k.u) tail = t_[i].k.u == 1 ? "u" : "u^" + std::to_string(t_[i].k.u);
        if (t_[i].k.mask) tail += (tail.empty() ? "" : "*") + wedge_str(ring_, t_[i].k.mask);
        bool neg = false;
        std::string item;
        if (tail.empty())
            item = cs;
        else if (cs == "1")
            item = tail;
        else if (cs == "-1")
            item = "-" + tail;
        else if (g.size() == 1)
            item = cs + "*" + tail;
        else
            item = "(" + cs + ")*" + tail;
        if (!s.empty() && item[0] == '-') {
            neg = true;
            item = item.substr(1);
        }
        if (!s.empty()) s += neg ? " - " : " + ";
        s += item;
        i = j;
    }
    return s;
}

void FormAcc::add(const Form& a) {
    ring_ = common_ring(ring_, a.ring());
    for (auto& t : a.terms()) acc_[t.k] += t.c;
}

void FormAcc::add_product(const Form& a, const Form& b, const Scalar& scale) {
    ring_ = common_ring(ring_, common_ring(a.ring(), b.ring()));
    if (a.is_zero() || b.is_zero() || scale.is_zero()) return;
    bool unit = scale.is_one();
    for (auto& x : a.terms()) {
        Scalar xs = unit ? x.c : x.c * scale;
        for (auto& y : b.terms()) {
            if (x.k.mask & y.k.mask) continue;
            FKey k{x.k.u + y.k.u, x.k.mask | y.k.mask, x.k.m * y.k.m};
            Scalar v = xs * y.c;
            auto& slot = acc_[k];
            if (wedge_sign(x.k.mask, y.k.mask) < 0)
                slot -= v;
            else
                slot += v;
        }
    }
}

Form FormAcc::finish(const RingPtr& r) {
    RingPtr ring = common_ring(ring_, r);
    std::vector<Form::T> raw;
    raw.reserve(acc_.size());
    for (auto& [k, c] : acc_)
        if (!c.is_zero()) raw.push_back({k, std::move(c)});
    acc_.clear();
    if (!ring) return {};
    return Form::from_terms(ring, std::move(raw));
}

Form wedge(const Form& a, const Form& b) { return a * b; }
Form useries_add(const Form& p, const Form& q) { return p + q; }
Form useries_mul(const Form& p, const Form& q) { return p * q; }

Form de_rham_d(const Form& w) {
    if (w.is_zero()) return w;
    const RingPtr& r = w.ring();
    std::vector<Form::T> raw;
    for (auto& t : w.terms())
        for (int i = 0; i < r->nvars(); ++i) {
            int e = t.k.m.exp(i);
            if (!e || (t.k.mask >> i & 1)) continue;
            int below = std::popcount(t.k.mask & ((1u << i) - 1));
            Scalar c = t.c * Scalar(long(e));
            if (below & 1) c = -c;
            raw.push_back({FKey{t.k.u, t.k.mask | (1u << i), t.k.m / Mono::var(i)}, std::move(c)});
        }
    return Form::from_terms(r, std::move(raw));
}

Form dh_of(const RingElement& h) { return de_rham_d(Form(h)); }

Form hn_differential(const Form& p, const RingElement& h) {
    RingPtr r = common_ring(p.ring(), h.ring());
    if (!r) return {};
    return Form::upow(r, 1) * de_rham_d(p) + dh_of(h) * p;
}

Form tau(const Form& p) {
    std::vector<Form::T> raw;
    for (auto& t : p.terms()) raw.push_back({t.k, (t.k.u & 1) ? -t.c : t.c});
    if (!p.ring()) return p;
    return Form::from_terms(p.ring(), std::move(raw));
}

}  // namespace chw
