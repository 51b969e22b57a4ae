#include "chw/scalar.hpp"

#include <numeric>

namespace chw {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
    if (!(a >> 64) && !(b >> 64)) return std::gcd(std::uint64_t(a), std::uint64_t(b));
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

u128 uabs(i128 v) { return v < 0 ? u128(-v) : u128(v); }

bool fits64(i128 v) { return v >= INT64_MIN + 1 && v <= INT64_MAX; }

mpz_class mpz_from128(i128 v) {
    u128 a = uabs(v);
    mpz_class hi(static_cast<unsigned long>(std::uint64_t(a >> 64)));
    mpz_class lo(static_cast<unsigned long>(std::uint64_t(a)));
    mpz_class r = (hi << 64) + lo;
    return v < 0 ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(const mpq_class& in) {
    mpq_class q = in;  // mpq_class(num, den) does not reduce
    q.canonicalize();
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
        n_ = q.get_num().get_si();
        d_ = q.get_den().get_si();
        if (n_ != INT64_MIN) return;
    }
    big_ = std::make_shared<const mpq_class>(std::move(q));
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

Rational Rational::from128(i128 n, i128 d) {
    if (fits64(n) && fits64(d)) {
        Rational r;
        r.n_ = std::int64_t(n);
        r.d_ = std::int64_t(d);
        return r;
    }
    mpq_class q(mpz_from128(n), mpz_from128(d));
    q.canonicalize();
    return Rational(q);
}

Rational Rational::operator-() const {
    if (big_) return Rational(mpq_class(-*big_));
    if (n_ == INT64_MIN + 1) return from128(-i128(n_), d_);
    Rational r = *this;
    r.n_ = -n_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
    if (b.n_ == 0) return a;
    if (a.n_ == 0) return b;
    if (a.d_ == 1 && b.d_ == 1) return Rational::from128(i128(a.n_) + b.n_, 1);
    std::int64_t g = std::gcd(a.d_, b.d_);
    i128 n = i128(a.n_) * (b.d_ / g) + i128(b.n_) * (a.d_ / g);
    i128 d = i128(a.d_) * (b.d_ / g);
    if (n == 0) return Rational();
    if (g != 1) {
        u128 g2 = gcd128(uabs(n), u128(g));
        n /= i128(g2);
        d /= i128(g2);
    }
    return Rational::from128(n, d);
}

Rational operator*(const Rational& a, const Rational& b) {
    if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
    if (a.n_ == 0 || b.n_ == 0) return Rational();
    if (a.d_ == 1 && b.d_ == 1) return Rational::from128(i128(a.n_) * b.n_, 1);
    std::int64_t g1 = std::gcd(a.n_, b.d_), g2 = std::gcd(b.n_, a.d_);
    i128 n = i128(a.n_ / g1) * (b.n_ / g2);
    i128 d = i128(a.d_ / g2) * (b.d_ / g1);
    return Rational::from128(n, d);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (a.big_ || b.big_) return Rational(mpq_class(a.to_mpq() / b.to_mpq()));
    Rational inv;
    inv.n_ = b.n_ < 0 ? -b.d_ : b.d_;
    inv.d_ = b.n_ < 0 ? -b.n_ : b.n_;
    return a * inv;
}

int Rational::compare(const Rational& o) const {
    if (!big_ && !o.big_) {
        i128 l = i128(n_) * o.d_, r = i128(o.n_) * d_;
        return (l > r) - (l < r);
    }
    return cmp(to_mpq(), o.to_mpq());
}

std::string Rational::str() const {
    if (big_) return big_->get_str();
    return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_);
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (im_.is_zero() && o.im_.is_zero()) {
        re_ = re_ * o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
}

Scalar Scalar::inv() const {
    if (is_zero()) throw DivisionByZero();
    if (im_.is_zero()) return Scalar(Rational(1) / re_);
    Rational n = re_ * re_ + im_ * im_;
    return Scalar(re_ / n, -im_ / n);
}

std::string Scalar::str() const {
    if (im_.is_zero()) return re_.str();
    std::string s;
    bool has_re = !re_.is_zero();
    if (has_re) s = re_.str();
    if (has_re && im_.sgn() > 0) s += "+";
    if (im_.is_one())
        s += "i";
    else if (im_ == Rational(-1))
        s += "-i";
    else
        s += im_.str() + "*i";
    return has_re ? "(" + s + ")" : s;
}

Scalar scalar_arith(const Scalar& a, const Scalar& b, ScalarOp op) {
    switch (op) {
    case ScalarOp::add: return a + b;
    case ScalarOp::mul: return a * b;
    case ScalarOp::inv: return a.inv();
    case ScalarOp::neg: return -a;
    }
    return {};
}

Scalar factorial(int n) {
    mpz_class f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return Scalar(mpq_class(f));
}

}  // namespace chw
