#include "chw/matrix.hpp"

namespace chw {

int parity(long d) { return int(((d % 2) + 2) % 2); }

FMat::FMat(const RingPtr& r, int rows, int cols) : rows_(rows), cols_(cols), ring_(r) {
    a_.assign(size_t(rows) * cols, Form::scalar(r, 0));
}

FMat FMat::identity(const RingPtr& r, int n) {
    FMat m(r, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Form::scalar(r, 1);
    return m;
}

bool FMat::is_zero() const {
    for (auto& f : a_)
        if (!f.is_zero()) return false;
    return true;
}

FMat FMat::col(int j) const {
    FMat c(ring_, rows_, 1);
    for (int i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
}

FMat FMat::map(const std::function<Form(const Form&)>& f) const {
    FMat m = *this;
    for (auto& x : m.a_) x = f(x);
    return m;
}

FMat FMat::d() const {
    return map([](const Form& f) { return de_rham_d(f); });
}

FMat FMat::transpose() const {
    FMat t(ring_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

void FMat::check_shape(const FMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw InvalidInput("matrix shape mismatch: " + std::to_string(rows_) + "x" + std::to_string(cols_) + " vs " +
                           std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
}

FMat FMat::operator-() const {
    FMat m = *this;
    for (auto& x : m.a_) x = -x;
    return m;
}

FMat& FMat::operator+=(const FMat& o) {
    check_shape(o);
    ring_ = common_ring(ring_, o.ring_);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

FMat& FMat::operator-=(const FMat& o) {
    check_shape(o);
    ring_ = common_ring(ring_, o.ring_);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

FMat& FMat::operator*=(const Form& s) {
    for (auto& x : a_) x = x * s;
    return *this;
}

FMat operator*(FMat a, const Scalar& s) {
    for (auto& x : a.a_) x *= s;
    return a;
}

FMat operator*(const FMat& a, const FMat& b) {
    if (a.cols_ != b.rows_)
        throw InvalidInput("matrix product shape mismatch: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) +
                           " times " + std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    RingPtr r = common_ring(a.ring_, b.ring_);
    FMat c(r, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            FormAcc acc;
            for (int k = 0; k < a.cols_; ++k) {
                const Form& x = a(i, k);
                if (x.is_zero()) continue;
                const Form& y = b(k, j);
                if (y.is_zero()) continue;
                acc.add_product(x, y);
            }
            if (!acc.empty()) c(i, j) = acc.finish(r);
        }
    return c;
}

bool operator==(const FMat& a, const FMat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (size_t k = 0; k < a.a_.size(); ++k)
        if (!(a.a_[k] == b.a_[k])) return false;
    return true;
}

std::string FMat::str() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
        s += i ? ", [" : "[";
        for (int j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).str();
        s += "]";
    }
    return s + "]";
}

FMat sign_matrix(const RingPtr& r, const std::vector<long>& degrees) {
    int n = int(degrees.size());
    FMat s(r, n, n);
    for (int i = 0; i < n; ++i) s(i, i) = Form::scalar(r, parity(degrees[i]) ? -1 : 1);
    return s;
}

}  // namespace chw
