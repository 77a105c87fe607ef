#ifndef ORBITKIT_LINALG_HPP
#define ORBITKIT_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"

namespace orbitkit {

struct EigenDecomposition {
    std::vector<cplx> values;
    Matrix vectors; // columns are eigenvectors, unitary
    double residual = 0.0;
};

struct PolarFactors {
    Matrix isometric_factor;
    Matrix positive_factor;
};

struct SvdResult {
    std::vector<double> singular_values; // non-increasing
    Matrix left;
    Matrix right; // x = left * diag(s) * right^*
};

struct IsometryReport {
    bool is_isometry = false;
    double initial_defect = 0.0; // ||v*v - p||
    double final_defect = 0.0;   // ||vv* - (vv*)^2||
};

namespace detail {

inline double offdiag_frobenius(const Matrix& a) {
    double s = 0.0;
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Exact unitary diagonalization of the hermitian 2x2 block
// [[app, apq], [conj(apq), aqq]]; returns the 2x2 rotation as (u00,u01,u10,u11).
struct PlaneRotation {
    cplx u00, u01, u10, u11;
};

inline PlaneRotation hermitian_2x2_rotation(double app, double aqq, cplx apq) {
    // Phase out apq, then the stable real Jacobi angle: t = tan(theta) from
    // t^2 + 2 tau t - 1 = 0 with the smaller-magnitude root.
    PlaneRotation r;
    const double beta = std::abs(apq);
    if (beta == 0.0) {
        r.u00 = r.u11 = 1.0;
        r.u01 = r.u10 = 0.0;
        return r;
    }
    const cplx phase = apq / beta; // e^{i phi}
    const double tau = (aqq - app) / (2.0 * beta);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    r.u00 = c;
    r.u01 = s;
    r.u10 = -s * std::conj(phase);
    r.u11 = c * std::conj(phase);
    return r;
}

inline void apply_rotation(Matrix& a, Matrix& v, std::size_t p, std::size_t q,
                           const PlaneRotation& r) {
    const std::size_t n = a.dim();
    // A <- A * U (columns p,q)
    for (std::size_t k = 0; k < n; ++k) {
        const cplx akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * r.u00 + akq * r.u10;
        a(k, q) = akp * r.u01 + akq * r.u11;
    }
    // A <- U^* A (rows p,q)
    for (std::size_t k = 0; k < n; ++k) {
        const cplx apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(r.u00) * apk + std::conj(r.u10) * aqk;
        a(q, k) = std::conj(r.u01) * apk + std::conj(r.u11) * aqk;
    }
    // V <- V * U
    for (std::size_t k = 0; k < n; ++k) {
        const cplx vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * r.u00 + vkq * r.u10;
        v(k, q) = vkp * r.u01 + vkq * r.u11;
    }
}

// Gram-Schmidt completion: orthonormalize the first `have` columns' complement,
// filling columns [have, n) of m with vectors orthogonal to all previous ones.
inline void complete_orthonormal_columns(Matrix& m, std::size_t have) {
    const std::size_t n = m.dim();
    std::size_t next_basis = 0;
    for (std::size_t c = have; c < n; ++c) {
        std::vector<cplx> w(n, cplx{});
        double nw = 0.0;
        while (nw < 0.5 && next_basis < n) {
            for (std::size_t i = 0; i < n; ++i) w[i] = (i == next_basis) ? cplx{1.0} : cplx{};
            ++next_basis;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c2 = 0; c2 < c; ++c2) {
                    cplx dot{};
                    for (std::size_t i = 0; i < n; ++i) dot += std::conj(m(i, c2)) * w[i];
                    for (std::size_t i = 0; i < n; ++i) w[i] -= dot * m(i, c2);
                }
            }
            nw = 0.0;
            for (const cplx& z : w) nw += std::norm(z);
            nw = std::sqrt(nw);
        }
        for (std::size_t i = 0; i < n; ++i) m(i, c) = w[i] / nw;
    }
}

} // namespace detail

/// Cyclic complex Jacobi diagonalization of a hermitian matrix.
/// Eigenvalues are real, returned sorted non-increasing.
inline EigenDecomposition hermitian_eigen(const Matrix& h) {
    const std::size_t n = h.dim();
    const double nf = h.frobenius_norm();
    const double herm_tol = nf > 0.0 ? 1e-10 * nf : 1e-12;
    if ((h - h.adjoint()).frobenius_norm() > herm_tol)
        throw domain_error("NotHermitian", "input is not hermitian within tolerance");

    Matrix a = h;
    Matrix v = Matrix::identity(n);
    const double target = 1e-13 * nf;
    constexpr int max_sweeps = 100;
    int sweep = 0;
    while (detail::offdiag_frobenius(a) > target) {
        if (++sweep > max_sweeps)
            throw domain_error("NoConvergence", "Jacobi sweeps exhausted");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) <= 1e-2 * target / double(n)) continue;
                const auto r = detail::hermitian_2x2_rotation(
                    a(p, p).real(), a(q, q).real(), a(p, q));
                detail::apply_rotation(a, v, p, q, r);
            }
        if (nf == 0.0) break;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = cplx{a(order[c], order[c]).real(), 0.0};
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = v(i, order[c]);
    }
    Matrix defect = h * out.vectors - out.vectors * Matrix::diagonal(out.values);
    out.residual = defect.frobenius_norm();
    return out;
}

namespace detail {

inline void require_normal(const Matrix& x, double rel_tol, const char* who) {
    const double nf = x.frobenius_norm();
    const double tol = nf > 0.0 ? rel_tol * nf * nf : 1e-12;
    if ((x.adjoint() * x - x * x.adjoint()).frobenius_norm() > tol)
        throw domain_error("NotNormal", who);
}

} // namespace detail

/// Eigendecomposition of a normal matrix via its commuting hermitian parts:
/// diagonalize Re x, then Im x restricted to each Re-eigenvalue cluster.
inline EigenDecomposition normal_eigen(const Matrix& x) {
    detail::require_normal(x, 1e-9, "normal_eigen input");
    const std::size_t n = x.dim();
    const Matrix re = (x + x.adjoint()) * cplx{0.5, 0.0};
    const Matrix im = (x - x.adjoint()) * cplx{0.0, -0.5};
    EigenDecomposition re_dec = hermitian_eigen(re);

    const double group_tol = 1e-8 * std::max(x.frobenius_norm(), 1e-300);
    Matrix vectors = re_dec.vectors;
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n &&
               std::abs(re_dec.values[stop].real() - re_dec.values[stop - 1].real()) <= group_tol)
            ++stop;
        const std::size_t m = stop - start;
        if (m > 1) {
            // compress Im x to the cluster and diagonalize it there
            Matrix w(m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    cplx s{};
                    for (std::size_t r = 0; r < n; ++r)
                        for (std::size_t c = 0; c < n; ++c)
                            s += std::conj(vectors(r, start + i)) * im(r, c) * vectors(c, start + j);
                    w(i, j) = s;
                }
            // w is hermitian in exact arithmetic; discard rounding asymmetry
            w = (w + w.adjoint()) * cplx{0.5, 0.0};
            EigenDecomposition sub = hermitian_eigen(w);
            Matrix block(n); // reuse as n x m storage in the first m columns
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < m; ++c) {
                    cplx s{};
                    for (std::size_t k = 0; k < m; ++k)
                        s += vectors(r, start + k) * sub.vectors(k, c);
                    block(r, c) = s;
                }
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < m; ++c) vectors(r, start + c) = block(r, c);
        }
        start = stop;
    }

    EigenDecomposition out;
    out.vectors = vectors;
    out.values.resize(n);
    // Rayleigh quotients give the complex eigenvalues directly.
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<cplx> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = vectors(i, c);
        std::vector<cplx> xv = x.apply(v);
        cplx val{};
        for (std::size_t i = 0; i < n; ++i) val += std::conj(v[i]) * xv[i];
        out.values[c] = val;
    }
    Matrix defect = x * out.vectors - out.vectors * Matrix::diagonal(out.values);
    out.residual = defect.frobenius_norm();
    return out;
}

/// SVD via hermitian_eigen of x*x; left columns by applying x, completed by
/// Gram-Schmidt where singular values vanish.
inline SvdResult svd(const Matrix& x) {
    const std::size_t n = x.dim();
    EigenDecomposition gram = hermitian_eigen(x.adjoint() * x);
    SvdResult out;
    out.singular_values.resize(n);
    out.right = gram.vectors;
    out.left = Matrix(n);
    for (std::size_t i = 0; i < n; ++i)
        out.singular_values[i] = std::sqrt(std::max(0.0, gram.values[i].real()));
    const double s1 = n > 0 ? out.singular_values[0] : 0.0;
    const double cut = s1 * 1e-13;
    std::size_t kept = 0;
    for (; kept < n; ++kept) {
        if (out.singular_values[kept] <= cut) break;
        std::vector<cplx> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = out.right(i, kept);
        std::vector<cplx> l = x.apply(r);
        // re-orthogonalize against earlier left columns, then normalize
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t c = 0; c < kept; ++c) {
                cplx dot{};
                for (std::size_t i = 0; i < n; ++i) dot += std::conj(out.left(i, c)) * l[i];
                for (std::size_t i = 0; i < n; ++i) l[i] -= dot * out.left(i, c);
            }
        double nl = 0.0;
        for (const cplx& z : l) nl += std::norm(z);
        nl = std::sqrt(nl);
        if (nl <= cut) break;
        for (std::size_t i = 0; i < n; ++i) out.left(i, kept) = l[i] / nl;
        out.singular_values[kept] = nl; // refreshed from the actual image
    }
    for (std::size_t i = kept; i < n; ++i) out.singular_values[i] = 0.0;
    detail::complete_orthonormal_columns(out.left, kept);
    // keep the list sorted after the refresh
    for (std::size_t i = 1; i < n; ++i)
        if (out.singular_values[i] > out.singular_values[i - 1])
            out.singular_values[i] = out.singular_values[i - 1];
    return out;
}

inline double operator_norm(const Matrix& x) {
    if (x.dim() == 0) return 0.0;
    return svd(x).singular_values[0];
}

/// Unitary factor of the polar decomposition, t |t|^{-1}, for invertible t.
inline Matrix polar_unitary(const Matrix& t) {
    const std::size_t n = t.dim();
    SvdResult s = svd(t);
    const double s1 = s.singular_values.empty() ? 0.0 : s.singular_values[0];
    if (s1 == 0.0 || s.singular_values[n - 1] < 1e-10 * s1)
        throw domain_error("SingularInput", "polar_unitary requires an invertible input");
    Matrix u = s.left * s.right.adjoint();
    // Newton-Schulz polish of unitarity
    const Matrix id = Matrix::identity(n);
    for (int it = 0; it < 30; ++it) {
        Matrix g = u.adjoint() * u;
        if ((g - id).frobenius_norm() <= 1e-13 * std::sqrt(double(n))) break;
        u = u * ((id * cplx{3.0, 0.0} - g) * cplx{0.5, 0.0});
    }
    return u;
}

inline PolarFactors polar_factors(const Matrix& t) {
    SvdResult s = svd(t);
    Matrix pos = s.right * Matrix::diagonal([&] {
                     std::vector<cplx> d(t.dim());
                     for (std::size_t i = 0; i < t.dim(); ++i) d[i] = s.singular_values[i];
                     return d;
                 }()) * s.right.adjoint();
    PolarFactors f;
    f.isometric_factor = s.left * s.right.adjoint();
    f.positive_factor = pos;
    return f;
}

inline std::size_t numeric_rank(const Matrix& x, double tol) {
    if (tol <= 0.0) throw domain_error("BadTolerance", "numeric_rank tolerance must be positive");
    SvdResult s = svd(x);
    if (s.singular_values.empty() || s.singular_values[0] == 0.0) return 0;
    const double cut = tol * s.singular_values[0];
    std::size_t r = 0;
    for (double v : s.singular_values)
        if (v > cut) ++r;
    return r;
}

/// Checks v*v = p for a claimed partial isometry v with initial projection p.
inline IsometryReport isometry_check(const Matrix& v, const Matrix& p) {
    if (v.dim() != p.dim()) throw domain_error("DimensionMismatch", "isometry_check dims differ");
    if (operator_norm(p - p.adjoint()) > 1e-10 || operator_norm(p * p - p) > 1e-10)
        throw domain_error("NotAProjection", "p is not an orthogonal projection");
    IsometryReport r;
    r.initial_defect = operator_norm(v.adjoint() * v - p);
    Matrix f = v * v.adjoint();
    r.final_defect = operator_norm(f - f * f);
    r.is_isometry = r.initial_defect <= 1e-9;
    return r;
}

} // namespace orbitkit

#endif
