#pragma once

#include "chw/forms.hpp"

#include <functional>

namespace chw {

// Dense matrix of forms (ring elements are 0-forms). Represents right-linear operators
// on a graded free module: column j is the image of basis vector j.
class FMat {
public:
    FMat() = default;
    FMat(const RingPtr& r, int rows, int cols);
    static FMat identity(const RingPtr& r, int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const RingPtr& ring() const { return ring_; }
    Form& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Form& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    bool is_zero() const;
    FMat col(int j) const;
    FMat map(const std::function<Form(const Form&)>& f) const;
    FMat d() const;  // entrywise de Rham differential
    FMat transpose() const;

    FMat operator-() const;
    FMat& operator+=(const FMat& o);
    FMat& operator-=(const FMat& o);
    FMat& operator*=(const Form& s);  // right scalar multiplication, entry*s
    friend FMat operator+(FMat a, const FMat& b) { return a += b; }
    friend FMat operator-(FMat a, const FMat& b) { return a -= b; }
    friend FMat operator*(const FMat& a, const FMat& b);
    friend FMat operator*(FMat a, const Scalar& s);
    friend FMat operator*(FMat a, const Form& s) { return a *= s; }
    friend bool operator==(const FMat& a, const FMat& b);

    std::string str() const;

private:
    void check_shape(const FMat& o) const;
    int rows_ = 0, cols_ = 0;
    RingPtr ring_;
    std::vector<Form> a_;
};

// diag((-1)^{|e_i|})
FMat sign_matrix(const RingPtr& r, const std::vector<long>& degrees);
int parity(long degree);

}  // namespace chw
