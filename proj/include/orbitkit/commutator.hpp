#ifndef ORBITKIT_COMMUTATOR_HPP
#define ORBITKIT_COMMUTATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"
#include "orbitkit/expectation.hpp"
#include "orbitkit/linalg.hpp"
#include "orbitkit/spectral.hpp"

namespace orbitkit {

struct ClosedRangeWitness {
    std::size_t index_lo = 0, index_hi = 0; // consecutive positions in canonical order
    double gap = 0.0;                       // |lambda_j - lambda_{j+1}|
    double witness_norm_lower = 1.0;        // symmetric-norm lower bound of the witness
    double commutator_norm = 0.0;           // ||delta_a(z)||, equals gap for this witness
    double ratio = 0.0;
};

struct TangentSplit {
    std::size_t dim_total = 0;     // real dimension of the tangent space at v0
    std::size_t dim_isotropy = 0;  // skew part of the commutant of a0 on Ran p0
    std::size_t dim_complement = 0;
    std::size_t range_dim = 0;     // rank of w -> [w, a0] on the skew complement
};

/// delta_a(x) = xa - ax.
inline Matrix delta(const Matrix& a, const Matrix& x) {
    return x * a - a * x;
}

namespace detail {

inline std::vector<cplx> block_values(const SpectralProfile& p, const ProjectionFamily& fam) {
    // Block eigenvalues in the family's order; a trailing kernel block gets 0.
    std::vector<cplx> mu;
    for (const auto& e : p.eigenvalues) mu.push_back(e.value);
    if (fam.blocks.size() == mu.size() + 1)
        mu.push_back(cplx{});
    else if (fam.blocks.size() != mu.size())
        throw domain_error("BadProjectionFamily",
                           "family does not match the profile's block structure");
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = i + 1; j < mu.size(); ++j)
            if (mu[i] == mu[j])
                throw domain_error("RepeatedBlockValue", "block values must be distinct");
    return mu;
}

} // namespace detail

/// Explicit inverse of delta_a on Ker E for finite distinct spectrum:
/// x_{ij} = y_{ij} / (mu_j - mu_i), validated by its residual.
inline Matrix solve_commutator(const SpectralProfile& a_profile, const ProjectionFamily& fam,
                               const Matrix& y) {
    validate_profile(a_profile);
    if (y.dim() != fam.dim)
        throw domain_error("DimensionMismatch", "y dim differs from family");
    const std::vector<cplx> mu = detail::block_values(a_profile, fam);
    const std::vector<long> owner = detail::block_index_of(fam);

    const double ny = y.frobenius_norm();
    if (conditional_expectation(y, fam).frobenius_norm() > 1e-10 * std::max(ny, 1.0))
        throw domain_error("ExpectationNonzero", "y must lie in Ker E");

    const std::size_t n = y.dim();
    Matrix x(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (owner[i] == owner[j]) continue;
            x(i, j) = y(i, j) / (mu[owner[j]] - mu[owner[i]]);
        }

    // residual check pins the divisor sign against our delta convention
    std::vector<cplx> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = mu[owner[i]];
    const Matrix a = Matrix::diagonal(diag);
    if ((delta(a, x) - y).frobenius_norm() > 1e-9 * std::max(ny, 1.0))
        throw domain_error("ResidualCheckFailed", "commutator solve residual too large");
    return x;
}

/// Rank-two witnesses z = xi_j (x) xi_{j+1} + xi_{j+1} (x) xi_j for consecutive
/// eigenvalues in canonical order; the minimum ratio quantifies how far the
/// commutator map is from having a bounded inverse at this truncation.
inline std::vector<ClosedRangeWitness> closed_range_witnesses(const SpectralProfile& profile) {
    SpectralProfile p = canonicalize(profile);
    validate_profile(p);
    if (p.eigenvalues.size() < 2)
        throw domain_error("TooFewEigenvalues", "need at least two eigenvalues");

    const std::size_t dim =
        std::size_t(p.total_multiplicity() + (p.infinite_kernel() ? 1 : p.kernel_dim));
    auto [a, fam] = materialize(p, dim);

    std::vector<ClosedRangeWitness> out;
    for (std::size_t j = 0; j + 1 < p.eigenvalues.size(); ++j) {
        const std::size_t ia = fam.blocks[j][0];
        const std::size_t ib = fam.blocks[j + 1][0];
        Matrix z(dim);
        z(ia, ib) = 1.0;
        z(ib, ia) = 1.0;
        ClosedRangeWitness w;
        w.index_lo = j;
        w.index_hi = j + 1;
        w.gap = std::abs(p.eigenvalues[j].value - p.eigenvalues[j + 1].value);
        w.witness_norm_lower = 1.0;
        w.commutator_norm = operator_norm(delta(a, z));
        w.ratio = w.commutator_norm / w.witness_norm_lower;
        out.push_back(w);
    }
    return out;
}

/// Real-dimension split of the tangent space of the partial-isometry fiber at
/// v0: skew directions on Ran(v0 v0*), the isotropy (commutant) part, and the
/// rank of the induced commutator map.
inline TangentSplit tangent_split(const SpectralProfile& a_profile, const Matrix& v0) {
    validate_profile(a_profile);
    const std::size_t dim = v0.dim();
    auto [a, fam] = materialize(a_profile, dim);

    // p_a: support projection of the materialized a
    Matrix p_a(dim);
    for (std::size_t i = 0; i < dim; ++i)
        if (a(i, i) != cplx{}) p_a(i, i) = 1.0;

    Matrix vstarv = v0.adjoint() * v0;
    if (operator_norm(vstarv * vstarv - vstarv) > 1e-8)
        throw domain_error("NotPartialIsometry", "v0*v0 is not a projection");
    if (operator_norm(vstarv - p_a) > 1e-9)
        throw domain_error("InitialSpaceMismatch", "v0*v0 must equal p_a");

    const Matrix a0 = v0 * a * v0.adjoint();
    const Matrix p0 = v0 * v0.adjoint();
    const std::size_t r = std::size_t(std::llround(p0.trace().real()));

    // orthonormal basis of Ran p0
    EigenDecomposition pdec = hermitian_eigen(p0);
    Matrix basis(dim); // first r columns used
    for (std::size_t c = 0; c < r; ++c)
        for (std::size_t i = 0; i < dim; ++i) basis(i, c) = pdec.vectors(i, c);

    // compress a0 to Ran p0
    Matrix a0c(r);
    {
        Matrix t = a0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                cplx s{};
                for (std::size_t k = 0; k < dim; ++k)
                    for (std::size_t l = 0; l < dim; ++l)
                        s += std::conj(basis(k, i)) * t(k, l) * basis(l, j);
                a0c(i, j) = s;
            }
    }

    TangentSplit split;
    split.dim_total = r * r;
    SpectralProfile p0rof = profile_of(a0c, 1e-8);
    std::size_t iso = 0;
    for (const auto& e : p0rof.eigenvalues) iso += std::size_t(e.multiplicity * e.multiplicity);
    iso += std::size_t(p0rof.kernel_dim * p0rof.kernel_dim);
    split.dim_isotropy = iso;
    split.dim_complement = split.dim_total - split.dim_isotropy;

    // rank of w -> [w, a0c] on a real basis of skew-hermitian r x r matrices
    const std::size_t nbasis = r * r;
    std::vector<Matrix> images;
    images.reserve(nbasis);
    auto push_image = [&](const Matrix& w) { images.push_back(delta(a0c, w)); };
    for (std::size_t i = 0; i < r; ++i) {
        Matrix w(r);
        w(i, i) = cplx{0.0, 1.0};
        push_image(w);
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            Matrix w1(r);
            w1(i, j) = 1.0;
            w1(j, i) = -1.0;
            push_image(w1);
            Matrix w2(r);
            w2(i, j) = cplx{0.0, 1.0};
            w2(j, i) = cplx{0.0, 1.0};
            push_image(w2);
        }

    // real matrix of the map, columns = flattened images
    const std::size_t rows = 2 * r * r;
    const std::size_t big = std::max(rows, nbasis);
    Matrix map(big);
    for (std::size_t c = 0; c < nbasis; ++c)
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                map(2 * (i * r + j), c) = images[c](i, j).real();
                map(2 * (i * r + j) + 1, c) = images[c](i, j).imag();
            }
    double scale = 0.0;
    for (const auto& e : p0rof.eigenvalues) scale = std::max(scale, std::abs(e.value));
    split.range_dim = scale > 0.0 ? numeric_rank(map, 1e-9) : 0;
    return split;
}

} // namespace orbitkit

#endif
