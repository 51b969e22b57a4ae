#include "chw/membership.hpp"

#include <algorithm>

namespace chw {

std::vector<Mono> monomials_up_to(int n, int d) {
    std::vector<Mono> out{Mono{}};
    for (int i = 0; i < n; ++i) {
        std::vector<Mono> next;
        for (Mono m : out)
            for (int k = 0; m.deg() + k <= d; ++k) next.push_back(m * Mono::var(i, k));
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), grlex_less);
    return out;
}

int default_degree_bound(const Form& target) {
    int d = 0;
    for (auto& t : target.terms()) d = std::max(d, t.k.m.deg());
    return d + 2;
}

MembershipSolver::MembershipSolver(const RingPtr& ring, std::vector<Form> gens, int bound)
    : ring_(ring), gens_(std::move(gens)), bound_(bound) {
    auto monos = monomials_up_to(ring->nvars(), bound);
    for (size_t g = 0; g < gens_.size(); ++g) {
        if (gens_[g].is_zero()) continue;
        common_ring(ring_, gens_[g].ring());
        for (Mono m : monos) {
            if (!ring->is_standard(m)) continue;
            Form col = Form(RingElement::monomial(ring, m)) * gens_[g];
            if (col.is_zero()) continue;
            int id = int(cols_.size());
            cols_.push_back({int(g), m});
            Row r;
            for (auto& t : col.terms()) r.v.emplace(t.k, t.c);
            r.combo[id] = Scalar(1);
            // lead-reduce against existing pivots
            while (!r.v.empty()) {
                auto lead = r.v.begin();
                auto p = pivots_.find(lead->first);
                if (p == pivots_.end()) break;
                Scalar c = lead->second / p->second.v.begin()->second;
                for (auto& [k, v] : p->second.v) {
                    auto [pos, fresh] = r.v.emplace(k, -(c * v));
                    if (!fresh) {
                        pos->second -= c * v;
                        if (pos->second.is_zero()) r.v.erase(pos);
                    }
                }
                for (auto& [k, v] : p->second.combo) {
                    auto [pos, fresh] = r.combo.emplace(k, -(c * v));
                    if (!fresh) {
                        pos->second -= c * v;
                        if (pos->second.is_zero()) r.combo.erase(pos);
                    }
                }
            }
            if (r.v.empty()) continue;
            FKey k = r.v.begin()->first;
            pivots_.emplace(k, std::move(r));
        }
    }
}

void MembershipSolver::reduce_full(Vec& v, std::map<int, Scalar>* combo) const {
    auto it = v.begin();
    while (it != v.end()) {
        auto p = pivots_.find(it->first);
        if (p == pivots_.end()) {
            ++it;
            continue;
        }
        FKey key = it->first;
        Scalar c = it->second / p->second.v.begin()->second;
        for (auto& [k, x] : p->second.v) {
            auto [pos, fresh] = v.emplace(k, -(c * x));
            if (!fresh) {
                pos->second -= c * x;
                if (pos->second.is_zero()) v.erase(pos);
            }
        }
        if (combo)
            for (auto& [k, x] : p->second.combo) (*combo)[k] += c * x;
        it = v.lower_bound(key);
    }
}

Form MembershipSolver::reduce(const Form& target) const {
    Vec v;
    for (auto& t : target.terms()) v.emplace(t.k, t.c);
    reduce_full(v, nullptr);
    std::vector<Form::T> raw;
    for (auto& [k, c] : v) raw.push_back({k, c});
    return Form::from_terms(ring_, std::move(raw));
}

MembershipCertificate MembershipSolver::solve(const Form& target) const {
    MembershipCertificate cert;
    cert.bound = bound_;
    Vec v;
    for (auto& t : target.terms()) v.emplace(t.k, t.c);
    std::map<int, Scalar> combo;
    reduce_full(v, &combo);
    std::vector<Form::T> raw;
    for (auto& [k, c] : v) raw.push_back({k, c});
    cert.remainder = Form::from_terms(ring_, std::move(raw));
    if (!cert.remainder.is_zero()) return cert;

    cert.verdict = MembershipCertificate::Verdict::Member;
    std::map<int, std::vector<Term>> mult;
    for (auto& [id, c] : combo)
        if (!c.is_zero()) mult[cols_[id].first].push_back({cols_[id].second, c});
    Form check = Form::scalar(ring_, 0);
    for (auto& [g, terms] : mult) {
        RingElement m = RingElement::from_terms(ring_, terms);
        if (m.is_zero()) continue;
        check += Form(m) * gens_[g];
        cert.combination.push_back({g, m});
    }
    if (!(check == (target.ring() ? target : Form::scalar(ring_, 0))))
        throw Error("membership certificate failed exact re-verification");
    return cert;
}

MembershipCertificate module_membership(const Form& target, const std::vector<Form>& gens, int degree_bound) {
    RingPtr r = target.ring();
    for (auto& g : gens) r = common_ring(r, g.ring());
    if (target.is_zero()) {
        MembershipCertificate c;
        c.verdict = MembershipCertificate::Verdict::Member;
        c.bound = degree_bound;
        c.remainder = target;
        return c;
    }
    return MembershipSolver(r, gens, degree_bound).solve(target);
}

std::vector<Form> relation_generators(const RingPtr& ring, int k) {
    std::vector<Form> out;
    if (!ring->has_relation()) return out;
    RingPtr fr = ring->free_ring();
    RingElement f_free = RingElement::from_terms(fr, ring->relation());
    // df computed over the free ring, then coefficients normal-formed in the quotient
    Form df_free = dh_of(f_free);
    std::vector<Form::T> raw(df_free.terms().begin(), df_free.terms().end());
    Form df = Form::from_terms(ring, raw);
    RingElement f = RingElement::from_terms(ring, ring->relation());
    int n = ring->nvars();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        int pc = std::popcount(mask);
        Form dxs = Form::scalar(ring, 1);
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) dxs = dxs * Form::dx(ring, i);
        if (pc == k && !f.is_zero()) out.push_back(Form(f) * dxs);
        if (pc == k - 1) {
            Form g = df * dxs;
            if (!g.is_zero()) out.push_back(g);
        }
    }
    return out;
}

RingElement milnor_representative(const Form& w, const RingElement& f) {
    if (w.is_zero()) return RingElement(f.ring(), 0);
    RingPtr r = common_ring(w.ring(), f.ring());
    int n = r->nvars();
    std::uint32_t top = n >= 32 ? ~0u : (1u << n) - 1;
    for (auto& t : w.terms())
        if (t.k.u != 0 || t.k.mask != top) throw NotTopForm();
    RingElement g = w.coeff(top, 0);
    return ideal_nf(g, buchberger(jacobian(f)));
}

}  // namespace chw

namespace chw {

Form contract(const Form& w, const std::vector<RingElement>& X) {
    if (w.is_zero()) return w;
    const RingPtr& r = w.ring();
    FormAcc acc;
    for (auto& t : w.terms()) {
        for (int i = 0; i < int(X.size()); ++i) {
            if (!(t.k.mask >> i & 1) || X[i].is_zero()) continue;
            int below = std::popcount(t.k.mask & ((1u << i) - 1));
            Form rest = Form::from_terms(r, {{FKey{t.k.u, t.k.mask & ~(1u << i), t.k.m}, (below & 1) ? -t.c : t.c}});
            acc.add_product(Form(X[i]), rest);
        }
    }
    return acc.finish(r);
}

RelationSubmodule::RelationSubmodule(const RingPtr& ring, int field_bound, int membership_bound)
    : ring_(ring), membership_bound_(membership_bound) {
    if (!ring->has_relation()) return;
    RingElement f_free = RingElement::from_terms(ring->free_ring(), ring->relation());
    Form dff = dh_of(f_free);
    df_ = Form::from_terms(ring, std::vector<Form::T>(dff.terms().begin(), dff.terms().end()));
    std::vector<Form> partials;
    for (int i = 0; i < ring->nvars(); ++i) partials.push_back(Form(df_.coeff(1u << i)));
    auto cert = module_membership(Form::scalar(ring, 1), partials, field_bound);
    if (!cert.member()) return;
    field_.assign(ring->nvars(), RingElement(ring, 0));
    for (auto& [g, m] : cert.combination) field_[g] = m;
}

std::optional<Form> RelationSubmodule::witness(const Form& w) const {
    if (w.is_zero()) return w;
    if (!has_field()) return std::nullopt;
    Form eta = contract(w, field_);
    if (df_ * eta == w) return eta;
    return std::nullopt;
}

bool RelationSubmodule::contains(const Form& w) const {
    if (w.is_zero()) return true;
    if (!ring_->has_relation()) return false;
    if (has_field()) return witness(w).has_value();
    for (int J = 0; J <= w.max_u(); ++J) {
        Form c = w.coeff_u(J);
        for (int k = 0; k <= ring_->nvars(); ++k) {
            Form part = c.form_part(k);
            if (part.is_zero()) continue;
            if (!module_membership(part, relation_generators(ring_, k),
                                   membership_bound_ >= 0 ? membership_bound_ : default_degree_bound(part)).member()) return false;
        }
    }
    return true;
}

}  // namespace chw
