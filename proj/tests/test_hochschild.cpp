#include "doctest.h"
#include "support.hpp"

using namespace test;

namespace {

// one object: the ring itself, rank one, trivial connection
CategoryData ring_category(const RingPtr& r, RingElement h = {}) {
    CategoryData cat;
    cat.algebra = {r, h.ring() ? h : RingElement(r, 0)};
    cat.objects.push_back(levi_civita(free_module(r, {0}, FMat(r, 1, 1))));
    return cat;
}

ChainSum ring_chain(const CategoryData& cat, const std::vector<std::string>& slots, Scalar coeff = 1) {
    std::vector<std::tuple<int, int, FMat>> s;
    for (auto& x : slots) s.push_back({0, 0, mat(cat.ring(), {{x}})});
    return make_chain(cat, coeff, s);
}

ChainSum operator-(const ChainSum& a, const ChainSum& b) { return a + b * Scalar(-1); }

}  // namespace

TEST_CASE("Hochschild differential on a commutative ring") {
    auto r = ring_of({"x", "y", "z"});
    auto cat = ring_category(r);
    // b(a0[a1]) = a0 a1 - a1 a0 = 0
    CHECK(b2(ring_chain(cat, {"x", "y"})).empty());
    // b(a0[a1|a2]) = a0a1[a2] - a0[a1a2] + a2a0[a1]
    ChainSum want = ring_chain(cat, {"x*y", "z"}) - ring_chain(cat, {"x", "y*z"}) + ring_chain(cat, {"z*x", "y"});
    CHECK(chains_equal(b2(ring_chain(cat, {"x", "y", "z"})), want));
    CHECK(b2(ring_chain(cat, {"x"})).empty());
}

TEST_CASE("curvature insertion b0 and Connes' B on a commutative ring") {
    auto r = ring_of({"x", "y"});
    auto cat = ring_category(r, P("x*y", r));
    // b0(a0) = a0[h]
    CHECK(chains_equal(b0(cat, ring_chain(cat, {"x"})), ring_chain(cat, {"x", "x*y"})));
    // b0(a0[a1]) = a0[h|a1] - a0[a1|h]
    CHECK(chains_equal(b0(cat, ring_chain(cat, {"x", "y"})),
                       ring_chain(cat, {"x", "x*y", "y"}) - ring_chain(cat, {"x", "y", "x*y"})));
    // B(a0) = 1[a0]; B(a0[a1]) = 1[a0|a1] - 1[a1|a0]
    CHECK(chains_equal(connes_B(cat, ring_chain(cat, {"x"})), ring_chain(cat, {"1", "x"})));
    CHECK(chains_equal(connes_B(cat, ring_chain(cat, {"x", "y"})),
                       ring_chain(cat, {"1", "x", "y"}) - ring_chain(cat, {"1", "y", "x"})));
    // normalized: B(1[a]) has 1 in a bar slot
    CHECK(connes_B(cat, ring_chain(cat, {"1", "x"})).empty());
}

TEST_CASE("b1 from module differentials") {
    auto r = ring_of({"x", "y"});
    CategoryData cat;
    cat.algebra = {r, P("-x*y", r)};
    cat.objects.push_back(levi_civita(free_module(r, {0, 1}, FMat(r, 2, 2))));
    FMat delta = mat(r, {{"0", "x"}, {"y", "0"}});
    // b1(a0) = [delta, a0]; for a0 = e: delta - delta = 0
    ChainSum one({Chain{1, 0, {identity_hom(cat, 0)}}});
    CHECK(b1(one, {delta}).empty());
    // b1(e[a1]) = [delta, e][a1] - e[[delta, a1]] with a1 = diag(x, 0) even
    ChainSum c = make_chain(cat, 1, {{0, 0, FMat::identity(r, 2)}, {0, 0, mat(r, {{"x", "0"}, {"0", "0"}})}});
    ChainSum want = make_chain(cat, 1, {{0, 0, FMat::identity(r, 2)}, {0, 0, mat(r, {{"0", "x^2"}, {"-x*y", "0"}})}});
    CHECK(chains_equal(b1(c, {delta}), want));
}

TEST_CASE("chain complex identities on random graded chains") {
    Rng rng(61);
    auto r = ring_of({"x", "y", "z"});
    int nonzero = 0;
    for (int it = 0; it < 30; ++it) {
        auto cat = random_category(rng, r, rng.poly(r, 2, 2));
        ChainSum c = random_chain(rng, cat, rng(0, 3));
        CHECK(b2(b2(c)).empty());
        CHECK(connes_B(cat, connes_B(cat, c)).empty());
        ChainSum bb0 = b2(b0(cat, c)) + b0(cat, b2(c));
        CHECK(chains_equal(bb0, ChainSum{}));
        CHECK(b0(cat, b0(cat, c)).empty());
        // (b2 + b0) B + B (b2 + b0) = 0 on normalized chains
        ChainSum nc = reduce_chain(cat, c);
        ChainSum lhs = reduce_chain(cat, b2(connes_B(cat, nc)) + b0(cat, connes_B(cat, nc))) +
                       connes_B(cat, b2(nc) + b0(cat, nc));
        CHECK(chains_equal(lhs, ChainSum{}));
        if (!connes_B(cat, nc).empty()) ++nonzero;
    }
    CHECK(nonzero > 10);
}

TEST_CASE("normalization") {
    auto r = ring_of({"x", "y"});
    auto cat = ring_category(r);
    CHECK(reduce_chain(cat, ring_chain(cat, {"x", "3"})).empty());
    CHECK(reduce_chain(cat, ring_chain(cat, {"x", "y", "1"})).empty());
    ChainSum head = ring_chain(cat, {"1", "y"});
    CHECK(chains_equal(reduce_chain(cat, head), head));
    CHECK(is_identity_multiple(cat, Hom{0, 0, mat(r, {{"-2"}}), 0}));
    CHECK_FALSE(is_identity_multiple(cat, Hom{0, 0, mat(r, {{"x"}}), 0}));
}

TEST_CASE("HKR map") {
    auto r = ring_of({"x", "y", "z"});
    auto cat = ring_category(r);
    CHECK(hkr(ring_chain(cat, {"x", "y"})) == F("x*d(y)", r));
    CHECK(hkr(ring_chain(cat, {"1", "x", "y"})) == F("d(x)*d(y)", r) * Scalar::frac(1, 2));
    CHECK(hkr(ring_chain(cat, {"z", "x^2", "y"}, 3)) == F("3*z*x*d(x)*d(y)", r));
    Rng rng(67);
    TraceMap tr(cat);
    for (int it = 0; it < 50; ++it) {
        int n = rng(0, 3);
        std::vector<std::string> s;
        for (int i = 0; i <= n; ++i) s.push_back(rng.poly(r, 2, 2).str());
        ChainSum c = ring_chain(cat, s, rng.scalar());
        // HKR kills boundaries, intertwines B with d, and is the trace map of the trivial connection
        CHECK(hkr(b2(c)).is_zero());
        CHECK(hkr(connes_B(cat, c)) == de_rham_d(hkr(c)));
        CHECK(tr(c) == hkr(c));
    }
    CategoryData big;
    big.algebra = {r, RingElement(r, 0)};
    big.objects.push_back(levi_civita(free_module(r, {0, 0}, FMat(r, 2, 2))));
    CHECK_THROWS_AS(hkr(make_chain(big, 1, {{0, 0, FMat::identity(r, 2)}})), InvalidInput);
}

TEST_CASE("pushforward along curved functors") {
    auto r = ring_of({"x", "y"});
    CategoryData cat;
    cat.algebra = {r, RingElement(r, 0)};
    cat.objects.push_back(levi_civita(free_module(r, {0, 1}, FMat(r, 2, 2))));
    FMat beta = mat(r, {{"0", "x"}, {"y", "0"}});
    CdgFunctor id;
    id.rho = [](const Hom& h) { return h.m; };
    CdgFunctor F = id;
    F.beta = {beta};
    ChainSum one({Chain{1, 0, {identity_hom(cat, 0)}}});
    CHECK(chains_equal(pushforward(id, one, 3), one));
    // F_*(e) = sum_k (-1)^k e[beta|...|beta]
    ChainSum want = one;
    for (int k = 1; k <= 3; ++k) {
        std::vector<std::tuple<int, int, FMat>> s{{0, 0, FMat::identity(r, 2)}};
        for (int j = 0; j < k; ++j) s.push_back({0, 0, beta});
        want += make_chain(cat, (k & 1) ? -1 : 1, s);
    }
    CHECK(chains_equal(pushforward(F, one, 3), want));

    // a1 [a2] with beta in both gaps, truncated at length 2
    FMat a = mat(r, {{"x", "0"}, {"0", "y"}});
    ChainSum c = make_chain(cat, 1, {{0, 0, FMat::identity(r, 2)}, {0, 0, a}});
    ChainSum w = c + make_chain(cat, -1, {{0, 0, FMat::identity(r, 2)}, {0, 0, beta}, {0, 0, a}}) +
                 make_chain(cat, -1, {{0, 0, FMat::identity(r, 2)}, {0, 0, a}, {0, 0, beta}});
    CHECK(chains_equal(pushforward(F, c, 2), w));

    Rng rng(71);
    for (int it = 0; it < 20; ++it) {
        auto rc = random_category(rng, r, RingElement(r, 0));
        ChainSum ch = random_chain(rng, rc, rng(0, 2));
        CdgFunctor G, H;
        // rho: conjugation-free scaling keeps morphisms inside the category
        Scalar s1 = rng.scalar(), s2 = rng.scalar();
        if (s1.is_zero()) s1 = 1;
        if (s2.is_zero()) s2 = 1;
        G.rho = [s1](const Hom& h) { return h.m * (h.degree & 1 ? s1 : Scalar(1)); };
        H.rho = [s2](const Hom& h) { return h.m * (h.degree & 1 ? s2 : Scalar(1)); };
        for (size_t k = 0; k < rc.objects.size(); ++k) {
            const auto& M = rc.object(int(k));
            auto odd = [&](Rng& g) {
                FMat b(r, M.size(), M.size());
                for (int i = 0; i < M.size(); ++i)
                    for (int j = 0; j < M.size(); ++j)
                        if (parity(M.degrees[i] - M.degrees[j]) == 1 && g(0, 1)) b(i, j) = Form(g.poly(r, 1, 1));
                return M.e * b * M.e;
            };
            G.beta.push_back(rng(0, 1) ? std::optional<FMat>(odd(rng)) : std::nullopt);
            H.beta.push_back(rng(0, 1) ? std::optional<FMat>(odd(rng)) : std::nullopt);
        }
        const int N = 4;
        CHECK(chains_equal(pushforward(compose(H, G), ch, N), pushforward(H, pushforward(G, ch, N), N)));
        CHECK(chains_equal(reduce_chain(rc, pushforward(G, connes_B(rc, ch), N + 1)),
                           connes_B(rc, pushforward(G, ch, N))));
    }
}

TEST_CASE("trace map identities on 100 random chains") {
    Rng rng(73);
    auto r = ring_of({"x", "y", "z"});
    int nonzero = 0, with_units = 0, killed = 0;
    for (int it = 0; it < 100; ++it) {
        auto cat = random_category(rng, r, rng.poly(r, 2, 3));
        ChainSum c = random_chain(rng, cat, rng(0, 3));
        TraceMap tr(cat);
        Form t = tr(c);
        CHECK(tr(b2(c) + connes_B(cat, c).shift_u(1)) == de_rham_d(t).shift_u(1));
        CHECK(tr(b0(cat, c)) == dh_of(cat.algebra.h) * t);
        // insert a unit at a random gap so that normalization has something to drop
        std::vector<Chain> withunit;
        for (auto ch : c.terms()) {
            int g = rng(0, ch.length());
            ch.a.insert(ch.a.begin() + g + 1, identity_hom(cat, ch.a[g].src));
            withunit.push_back(std::move(ch));
        }
        ChainSum cu = ChainSum(withunit) + c;
        ChainSum dropped = cu - reduce_chain(cat, cu);
        if (!dropped.empty()) {
            ++with_units;
            killed += tr(dropped).is_zero();
        }
        if (!t.is_zero()) ++nonzero;
    }
    CHECK(nonzero > 20);
    // recorded, not asserted: does the trace vanish on chains with identity multiples in bar slots?
    MESSAGE("tr(c - reduce c) = 0 on " << killed << " of " << with_units << " chains with unit bar slots");
}

TEST_CASE("chain route agrees with Chern-Weil when delta = 0") {
    auto r = ring_of({"x", "y", "z"});
    auto C = levi_civita(free_module(r, {0, 1}, FMat(r, 2, 2)));
    CHECK(chern_via_chains(C) == chern_weil(C));
    auto s = quotient_of(r, "x^2+y^2+z^2-1");
    FMat e = mat(s, {{"(1-x)/2", "(-y-i*z)/2"}, {"(-y+i*z)/2", "(1+x)/2"}});
    auto S = levi_civita(CurvedModule{{0, 0}, e, FMat(s, 2, 2)});
    Form diff = chern_via_chains(S) - chern_weil(S);
    CHECK(zero_check({diff}, s, "routes").ok);
    auto M = free_module(r, {0, 1}, mat(r, {{"0", "x"}, {"y*z", "0"}}));
    CHECK(chern_via_chains(levi_civita(M)) == chern_weil(levi_civita(M)));
}

TEST_CASE("composability and printing") {
    auto r = ring_of({"x"});
    auto cat = ring_category(r);
    CHECK_THROWS_AS(check_composable(cat, Chain{1, 0, {}}), IncomposableChain);
    CHECK_THROWS_AS(check_composable(cat, Chain{1, 0, {Hom{0, 1, FMat(r, 1, 1), 0}}}), IncomposableChain);
    CHECK_THROWS_AS(make_chain(cat, 1, {{0, 0, FMat(r, 2, 1)}}), IncomposableChain);
    CHECK_THROWS_AS(compose(Hom{0, 1, FMat(r, 1, 1), 0}, Hom{0, 0, FMat(r, 1, 1), 0}), IncomposableChain);
    ChainSum c = ring_chain(cat, {"x", "x^2"}, 2);
    REQUIRE(c.terms().size() == 1);
    CHECK(chain_str(c.terms()[0]).find("[") != std::string::npos);
    CHECK(chains_equal(c + c, c * Scalar(2)));
}
