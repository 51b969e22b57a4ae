#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace chw {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
};

// Exact rational in lowest terms. Machine-word numerator/denominator while they fit,
// GMP otherwise; values are canonical, so equal rationals have equal representations.
class Rational {
public:
    Rational() = default;
    Rational(long v) : n_(v) {}
    explicit Rational(const mpq_class& q);

    bool is_zero() const { return !big_ && n_ == 0; }
    bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
    int sgn() const { return big_ ? ::sgn(*big_) : (n_ > 0) - (n_ < 0); }
    mpq_class to_mpq() const;

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
        if (a.big_ && b.big_) return *a.big_ == *b.big_;
        return false;
    }
    int compare(const Rational& o) const;
    std::string str() const;

private:
    static Rational from128(__int128 n, __int128 d);  // reduced, d > 0
    std::int64_t n_ = 0, d_ = 1;
    std::shared_ptr<const mpq_class> big_;
};

// Exact element re + im*i of Q(i).
class Scalar {
public:
    Scalar() = default;
    Scalar(long v) : re_(v) {}
    Scalar(Rational re, Rational im = Rational()) : re_(std::move(re)), im_(std::move(im)) {}
    Scalar(const mpq_class& re, const mpq_class& im = 0) : re_(re), im_(im) {}
    static Scalar frac(long num, long den) { return Scalar(mpq_class(num, den)); }
    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_one() const { return re_.is_one() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    Scalar operator-() const { return Scalar(-re_, -im_); }
    Scalar& operator+=(const Scalar& o) {
        re_ = re_ + o.re_;
        if (!o.im_.is_zero()) im_ = im_ + o.im_;
        return *this;
    }
    Scalar& operator-=(const Scalar& o) {
        re_ = re_ - o.re_;
        if (!o.im_.is_zero()) im_ = im_ - o.im_;
        return *this;
    }
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o) { return *this *= o.inv(); }
    Scalar inv() const;

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

    // Total order used only for canonical printing / hashing.
    int compare(const Scalar& o) const {
        int c = re_.compare(o.re_);
        return c ? c : im_.compare(o.im_);
    }

    std::string str() const;

private:
    Rational re_;
    Rational im_;
};

enum class ScalarOp { add, mul, inv, neg };
Scalar scalar_arith(const Scalar& a, const Scalar& b, ScalarOp op);

Scalar factorial(int n);

}  // namespace chw
