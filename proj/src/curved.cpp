#include "chw/curved.hpp"

namespace chw {

namespace {

std::string at(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

bool is_ring_matrix(const FMat& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            for (auto& t : m(i, j).terms())
                if (t.k.mask || t.k.u) return false;
    return true;
}

void first_mismatch(const FMat& a, const FMat& b, const std::string& what, std::vector<std::string>& out) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!(a(i, j) == b(i, j))) {
                out.push_back(what + " fails at entry " + at(i, j) + ": " + a(i, j).str() + " vs " + b(i, j).str());
                return;
            }
}

}  // namespace

CurvedModule free_module(const RingPtr& r, std::vector<long> degrees, const FMat& delta) {
    int n = int(degrees.size());
    return CurvedModule{std::move(degrees), FMat::identity(r, n), delta};
}

ModuleCheck check_module(const CurvedModule& M, const CurvedAlgebra& alg) {
    ModuleCheck res;
    auto& f = res.failures;
    int n = M.size();
    const RingPtr& r = alg.ring;
    if (M.e.rows() != n || M.e.cols() != n || M.delta.rows() != n || M.delta.cols() != n) {
        f.push_back("idempotent and delta must be " + std::to_string(n) + "x" + std::to_string(n));
        res.ok = false;
        return res;
    }
    if (M.e.ring() != r || M.delta.ring() != r) throw IncompatibleRings();
    auto hd = alg.h.gamma_degree();
    if (!alg.h.is_zero() && (!hd || !r->same_degree(*hd, 2)))
        f.push_back("h = " + alg.h.str() + " is not homogeneous of degree 2");
    if (!is_ring_matrix(M.e) || !is_ring_matrix(M.delta)) f.push_back("idempotent and delta must have polynomial entries");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto de = M.e(i, j).gamma_degree();
            if (!M.e(i, j).is_zero() && (!de || !r->same_degree(*de, M.degrees[i] - M.degrees[j])))
                f.push_back("idempotent entry " + at(i, j) + " = " + M.e(i, j).str() + " is not homogeneous of degree " +
                            std::to_string(M.degrees[i] - M.degrees[j]));
            auto dd = M.delta(i, j).gamma_degree();
            if (!M.delta(i, j).is_zero() && (!dd || !r->same_degree(*dd, M.degrees[i] - M.degrees[j] + 1)))
                f.push_back("delta entry " + at(i, j) + " = " + M.delta(i, j).str() + " is not homogeneous of degree " +
                            std::to_string(M.degrees[i] - M.degrees[j] + 1));
        }
    FMat ee = M.e * M.e;
    first_mismatch(ee, M.e, "e*e = e", f);
    first_mismatch(M.e * M.delta, M.delta, "e*delta = delta", f);
    first_mismatch(M.delta * M.e, M.delta, "delta*e = delta", f);
    res.delta_sq = M.delta * M.delta;
    first_mismatch(res.delta_sq, M.e * Form(-alg.h), "delta^2 = -h*e", f);

    Form tr = Form::scalar(r, 0), trd = Form::scalar(r, 0);
    for (int i = 0; i < n; ++i) {
        tr += M.e(i, i);
        trd += res.delta_sq(i, i);
    }
    if (!tr.is_zero() && tr.terms().size() == 1 && tr.terms()[0].k == FKey{}) {
        Form c = trd * tr.terms()[0].c.inv();
        if (M.e * c == res.delta_sq) res.realized = c.coeff(0, 0);
    }
    res.ok = f.empty();
    return res;
}

Connection levi_civita(const CurvedModule& M) { return Connection{M, FMat(M.ring(), M.size(), M.size())}; }

Connection with_mu(const CurvedModule& M, const FMat& mu) { return Connection{M, mu}; }

std::vector<std::string> check_connection(const Connection& C) {
    std::vector<std::string> f;
    const auto& M = C.module;
    int n = M.size();
    if (C.mu.rows() != n || C.mu.cols() != n) {
        f.push_back("mu must be " + std::to_string(n) + "x" + std::to_string(n));
        return f;
    }
    const RingPtr& r = M.ring();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Form& x = C.mu(i, j);
            for (auto& t : x.terms())
                if (t.k.u || std::popcount(t.k.mask) != 1) {
                    f.push_back("mu entry " + at(i, j) + " is not a 1-form");
                    break;
                }
            auto d = x.gamma_degree();
            if (!x.is_zero() && (!d || !r->same_degree(*d, M.degrees[i] - M.degrees[j] - 1)))
                f.push_back("mu entry " + at(i, j) + " is not homogeneous of degree " +
                            std::to_string(M.degrees[i] - M.degrees[j] - 1));
        }
    first_mismatch(M.e * C.mu * M.e, C.mu, "e*mu*e = mu", f);
    return f;
}

FMat apply_connection(const Connection& C, const FMat& v) {
    const auto& M = C.module;
    FMat s = sign_matrix(M.ring(), M.degrees);
    return M.e * (s * v.d()) + C.mu * v;
}

std::optional<int> map_parity(const FMat& X, const std::vector<long>& tgt, const std::vector<long>& src) {
    std::optional<int> p;
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j)
            for (auto& t : X(i, j).terms()) {
                int q = (std::popcount(t.k.mask) + parity(tgt[i]) + parity(src[j])) & 1;
                if (p && *p != q) return std::nullopt;
                p = q;
            }
    return p ? p : 0;
}

FMat covariant_derivative(const Connection& tgt, const Connection& src, const FMat& X, int par) {
    // composition on the presentation: nabla_tgt(X v) - (-1)^{|X|} X(nabla_src v) for v the columns of e_src
    FMat a = apply_connection(tgt, X * src.module.e);
    FMat b = X * apply_connection(src, src.module.e);
    return (par & 1) ? a + b : a - b;
}

FMat covariant_derivative(const Connection& C, const FMat& X) {
    auto p = map_parity(X, C.module.degrees, C.module.degrees);
    if (!p) throw InvalidInput("covariant derivative of an inhomogeneous endomorphism");
    return covariant_derivative(C, C, X, *p);
}

FMat nabla_squared(const Connection& C) {
    const auto& M = C.module;
    FMat K = apply_connection(C, apply_connection(C, M.e));
    // Omega-linearity on a fixed generic column: nabla^2(e a) must equal K a
    const RingPtr& r = M.ring();
    int n = M.size();
    FMat a(r, n, 1);
    for (int i = 0; i < n; ++i) {
        Form v = Form::scalar(r, long(i + 2));
        if (r->nvars()) {
            int k = i % r->nvars();
            v += Form(RingElement::var(r, k)) * Scalar(long(2 * i + 1));
            v += Form(RingElement::var(r, (k + 1) % r->nvars(), 2));
        }
        a(i, 0) = v;
    }
    FMat res = apply_connection(C, apply_connection(C, M.e * a)) - K * a;
    std::vector<Form> parts;
    for (int i = 0; i < n; ++i) parts.push_back(res(i, 0));
    auto z = zero_check(parts, r, "nabla^2 Leibniz residue");
    if (!z.ok) throw NonLinearCurvature("nabla^2 is not Omega-linear on the sample column: " + z.detail);
    return K;
}

FMat curvature_R(const Connection& C) {
    const RingPtr& r = C.module.ring();
    FMat K = nabla_squared(C);
    FMat dd = covariant_derivative(C, C, C.module.delta, 1);
    return K * Form::upow(r, 1) + dd;
}

Form supertrace(const FMat& X, const std::vector<long>& degrees) {
    std::vector<Form::T> raw;
    for (int i = 0; i < X.rows(); ++i)
        for (auto& t : X(i, i).terms()) {
            bool neg = parity(degrees[i]) && !(std::popcount(t.k.mask) & 1);
            raw.push_back({t.k, neg ? -t.c : t.c});
        }
    return Form::from_terms(X.ring(), std::move(raw));
}

Form chern_weil(const Connection& C) {
    const auto& M = C.module;
    const RingPtr& r = M.ring();
    FMat R = curvature_R(C);
    Form ch = supertrace(M.e, M.degrees);
    FMat P = R;
    for (int m = 1; !P.is_zero(); ++m) {
        if (m > 2 * r->nvars() + 2) throw Error("curvature powers fail to vanish");
        Scalar c = factorial(m).inv();
        if (m & 1) c = -c;
        ch += supertrace(P, M.degrees) * c;
        P = P * R;
    }
    return ch;
}

IdentityCheck zero_check(const std::vector<Form>& residues, const RingPtr& ring, const std::string& what,
                         int membership_bound) {
    IdentityCheck res;
    std::optional<RelationSubmodule> rel;
    for (size_t k = 0; k < residues.size(); ++k) {
        const Form& z = residues[k];
        if (z.is_zero()) continue;
        if (ring->has_relation()) {
            if (!rel) rel.emplace(ring, 2, membership_bound);
            if (rel->contains(z)) {
                res.modulo_relation = true;
                continue;
            }
        }
        res.ok = false;
        int J = z.terms().front().k.u;
        res.detail = what + (residues.size() > 1 ? " [" + std::to_string(k) + "]" : "") + " has nonzero u^" +
                     std::to_string(J) + " coefficient " + z.coeff_u(J).str();
        return res;
    }
    if (res.modulo_relation) res.detail = what + " vanishes modulo the relation submodule";
    return res;
}

IdentityCheck cycle_check(const Form& ch, const RingElement& h, int membership_bound) {
    return zero_check({hn_differential(ch, h)}, common_ring(ch.ring(), h.ring()), "(ud + dh)(ch)", membership_bound);
}

IdentityCheck cycle_check(const Connection& C, const RingElement& h) { return cycle_check(chern_weil(C), h); }

IdentityCheck commutator_check(const Connection& C, const RingElement& h, int membership_bound) {
    const auto& M = C.module;
    const RingPtr& r = M.ring();
    FMat R = curvature_R(C);
    FMat lhs = covariant_derivative(C, C, R, 0) * Form::upow(r, 1) + (M.delta * R - R * M.delta);
    FMat rhs = sign_matrix(r, M.degrees) * M.e * dh_of(h);
    std::vector<Form> parts;
    for (int i = 0; i < M.size(); ++i)
        for (int j = 0; j < M.size(); ++j) parts.push_back(lhs(i, j) - rhs(i, j));
    return zero_check(parts, r, "[u nabla + delta, R] - dh*e", membership_bound);
}

std::vector<Form> chern_classes(const Connection& C) {
    const auto& M = C.module;
    if (!M.delta.is_zero()) throw InvalidInput("Chern classes require delta = 0");
    const RingPtr& r = M.ring();
    FMat K = nabla_squared(C);
    int top = r->nvars() / 2;
    std::vector<Form> p(top + 1), c(top + 1);
    c[0] = Form::scalar(r, 1);
    FMat Kj = M.e;
    for (int j = 1; j <= top; ++j) {
        Kj = Kj * K;
        p[j] = supertrace(Kj, M.degrees);
    }
    for (int k = 1; k <= top; ++k) {
        Form s = Form::scalar(r, 0);
        for (int i = 1; i <= k; ++i) {
            Form t = c[k - i] * p[i];
            s += (i & 1) ? t : -t;
        }
        c[k] = s * Scalar::frac(1, k);
    }
    return {c.begin() + 1, c.end()};
}

}  // namespace chw
