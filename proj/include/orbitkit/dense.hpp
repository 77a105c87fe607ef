#ifndef ORBITKIT_DENSE_HPP
#define ORBITKIT_DENSE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "orbitkit/error.hpp"

namespace orbitkit {

using cplx = std::complex<double>;

/// Square complex matrix with double-precision entries, row-major.
/// Immutable in spirit: operations return new values.
class Matrix {
public:
    Matrix() = default;

    explicit Matrix(std::size_t n) : n_(n), a_(n * n, cplx{0.0, 0.0}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const std::vector<cplx>& d) {
        Matrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t dim() const { return n_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    Matrix adjoint() const {
        Matrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        check_dim(o);
        Matrix r(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_dim(o);
        Matrix r(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        check_dim(o);
        Matrix r(n_);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Matrix operator*(cplx s) const {
        Matrix r(n_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
        return r;
    }

    friend Matrix operator*(cplx s, const Matrix& m) { return m * s; }

    /// Matrix-vector product.
    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        std::vector<cplx> r(n_, cplx{});
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    cplx trace() const {
        cplx t{};
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : a_) s += std::norm(z);
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (const cplx& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    bool operator==(const Matrix& o) const { return n_ == o.n_ && a_ == o.a_; }

private:
    void check_dim(const Matrix& o) const {
        if (n_ != o.n_) throw domain_error("DimensionMismatch", "matrix dimensions differ");
    }

    std::size_t n_ = 0;
    std::vector<cplx> a_;
};

} // namespace orbitkit

#endif
