#pragma once

#include "chw/curved.hpp"

#include <functional>
#include <map>
#include <optional>

namespace chw {

struct IncomposableChain : Error {
    using Error::Error;
};

// Finite curved category: objects are modules with trivial differential, each with a connection.
struct CategoryData {
    CurvedAlgebra algebra;
    std::vector<Connection> objects;  // module delta is ignored

    const RingPtr& ring() const { return algebra.ring; }
    const CurvedModule& object(int k) const { return objects.at(k).module; }
    int size(int k) const { return object(k).size(); }
};

// Homogeneous morphism src -> tgt; matrix is size(tgt) x size(src).
struct Hom {
    int tgt = 0, src = 0;
    FMat m;
    long degree = 0;
};

Hom identity_hom(const CategoryData& cat, int obj);
Hom compose(const Hom& a, const Hom& b);  // a after b
// Splits an arbitrary matrix into homogeneous morphisms.
std::vector<Hom> homogeneous_parts(const CategoryData& cat, int tgt, int src, const FMat& m);

// coeff * u^u * a[0] [a[1] | ... | a[n]]
struct Chain {
    Scalar coeff{1};
    int u = 0;
    std::vector<Hom> a;

    int length() const { return int(a.size()) - 1; }
};

class ChainSum {
public:
    ChainSum() = default;
    ChainSum(std::vector<Chain> terms);
    const std::vector<Chain>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    ChainSum& operator+=(const ChainSum& o);
    friend ChainSum operator+(ChainSum a, const ChainSum& b) { return a += b; }
    ChainSum operator*(const Scalar& s) const;
    ChainSum shift_u(int k) const;

private:
    void canonicalize();
    std::vector<Chain> terms_;
};

void check_composable(const CategoryData& cat, const Chain& c);
// multilinear split of the slots into homogeneous components
ChainSum make_chain(const CategoryData& cat, const Scalar& coeff,
                    const std::vector<std::tuple<int, int, FMat>>& slots, int u = 0);

ChainSum b2(const ChainSum& c);
ChainSum b1(const ChainSum& c, const std::vector<FMat>& differentials);
ChainSum b0(const CategoryData& cat, const ChainSum& c);
ChainSum connes_B(const CategoryData& cat, const ChainSum& c);
ChainSum reduce_chain(const CategoryData& cat, const ChainSum& c);
bool is_identity_multiple(const CategoryData& cat, const Hom& a);

// one-object category of the ring itself: a0 da1 ... dan / n!
Form hkr(const ChainSum& c);

// Morphism data (rho, beta): rho maps morphisms slot-wise (object indices kept),
// beta[k] is the odd element inserted at object k (absent = 0).
struct CdgFunctor {
    std::function<FMat(const Hom&)> rho;
    std::vector<std::optional<FMat>> beta;
};
CdgFunctor compose(const CdgFunctor& second, const CdgFunctor& first);
ChainSum pushforward(const CdgFunctor& F, const ChainSum& c, int n_max);

// Chain-level trace map with the category's connections.
class TraceMap {
public:
    explicit TraceMap(const CategoryData& cat);
    Form operator()(const ChainSum& c) const;
    Form operator()(const Chain& c) const;

private:
    const CategoryData& cat_;
    std::vector<FMat> G_;  // sum_j (-u)^j K^j per object
};

Form tr_nabla(const CategoryData& cat, const ChainSum& c);
Form chern_via_chains(const Connection& C);

// Canonical multilinear expansion (slot-wise elementary matrices); equal chains give equal maps.
std::map<std::string, Scalar> chain_expansion(const ChainSum& c);
bool chains_equal(const ChainSum& a, const ChainSum& b);

std::string chain_str(const Chain& c);

}  // namespace chw
