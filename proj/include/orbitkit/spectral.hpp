#ifndef ORBITKIT_SPECTRAL_HPP
#define ORBITKIT_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"
#include "orbitkit/linalg.hpp"

namespace orbitkit {

/// Sentinel for an infinite-dimensional kernel.
inline constexpr long kInfiniteDim = -1;

struct EigenvalueEntry {
    cplx value;
    long multiplicity = 1;
};

/// A normal operator given by its point spectrum.
struct SpectralProfile {
    std::vector<EigenvalueEntry> eigenvalues; // pairwise distinct, nonzero
    long kernel_dim = 0;                      // kInfiniteDim for an infinite kernel
    std::vector<cplx> essential_points;       // declared accumulation points of infinite rank
    double tail_bound = 0.0;                  // operator-norm bound on the truncated tail
    bool compact = false;

    bool infinite_kernel() const { return kernel_dim == kInfiniteDim; }
    long total_multiplicity() const {
        long s = 0;
        for (const auto& e : eigenvalues) s += e.multiplicity;
        return s;
    }
};

/// Partition of {0..dim-1} into blocks: mutually orthogonal coordinate
/// projections summing to the identity.
struct ProjectionFamily {
    std::size_t dim = 0;
    std::vector<std::vector<std::size_t>> blocks;
};

namespace detail {

// Canonical eigenvalue order: by (-|z|, arg z in [0,2pi), Re z).
inline bool canonical_less(const cplx& a, const cplx& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    auto arg2pi = [](const cplx& z) {
        double t = std::arg(z);
        if (t < 0) t += 2.0 * M_PI;
        return t;
    };
    const double aa = arg2pi(a), ab = arg2pi(b);
    if (aa != ab) return aa < ab;
    return a.real() < b.real();
}

} // namespace detail

inline void validate_profile(const SpectralProfile& p) {
    for (const auto& e : p.eigenvalues) {
        if (e.multiplicity < 1)
            throw domain_error("BadMultiplicity", "eigenvalue multiplicity must be >= 1");
        if (e.value == cplx{})
            throw domain_error("ZeroListedAsEigenvalue", "zero belongs in kernel_dim");
    }
    for (std::size_t i = 0; i < p.eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < p.eigenvalues.size(); ++j)
            if (p.eigenvalues[i].value == p.eigenvalues[j].value)
                throw domain_error("DuplicateEigenvalue", "listed eigenvalues must be distinct");
    if (p.kernel_dim < 0 && p.kernel_dim != kInfiniteDim)
        throw domain_error("BadMultiplicity", "kernel_dim must be >= 0 or INFINITE");
    if (p.compact)
        for (const cplx& z : p.essential_points)
            if (z != cplx{})
                throw domain_error("BadEssentialPoint",
                                   "a compact profile accumulates only at 0");
    if (!(p.tail_bound >= 0.0))
        throw domain_error("BadTailBound", "tail_bound must be >= 0");
}

/// Returns the profile with eigenvalues in canonical order.
inline SpectralProfile canonicalize(SpectralProfile p) {
    std::sort(p.eigenvalues.begin(), p.eigenvalues.end(),
              [](const EigenvalueEntry& a, const EigenvalueEntry& b) {
                  return detail::canonical_less(a.value, b.value);
              });
    std::sort(p.essential_points.begin(), p.essential_points.end(), detail::canonical_less);
    return p;
}

/// |lambda| repeated with multiplicity, sorted non-increasing, padded with
/// kernel_dim zeros.
inline std::vector<double> singular_values(const SpectralProfile& p) {
    validate_profile(p);
    if (p.infinite_kernel())
        throw domain_error("InfiniteKernel",
                           "singular_values needs a finite kernel; materialize a truncation");
    std::vector<double> s;
    for (const auto& e : p.eigenvalues)
        s.insert(s.end(), std::size_t(e.multiplicity), std::abs(e.value));
    std::sort(s.begin(), s.end(), std::greater<double>());
    s.insert(s.end(), std::size_t(p.kernel_dim), 0.0);
    return s;
}

/// Diagonal materialization at an explicit finite dimension. Eigenvalue blocks
/// follow the profile's listed order; all trailing indices form the kernel block.
inline std::pair<Matrix, ProjectionFamily> materialize(const SpectralProfile& p,
                                                       std::size_t total_dim) {
    validate_profile(p);
    long needed = p.total_multiplicity();
    if (!p.infinite_kernel()) needed += p.kernel_dim;
    if (long(total_dim) < needed)
        throw domain_error("DimensionTooSmall", "total_dim cannot hold the profile");
    Matrix m(total_dim);
    ProjectionFamily fam;
    fam.dim = total_dim;
    std::size_t idx = 0;
    for (const auto& e : p.eigenvalues) {
        std::vector<std::size_t> block;
        for (long k = 0; k < e.multiplicity; ++k) {
            m(idx, idx) = e.value;
            block.push_back(idx++);
        }
        fam.blocks.push_back(std::move(block));
    }
    if (idx < total_dim) {
        std::vector<std::size_t> kernel_block;
        while (idx < total_dim) kernel_block.push_back(idx++);
        fam.blocks.push_back(std::move(kernel_block));
    }
    return {std::move(m), std::move(fam)};
}

/// Inverse of materialize: eigenvalues of a (numerically) normal matrix,
/// clustered at relative tolerance cluster_tol; values near 0 go to the kernel.
inline SpectralProfile profile_of(const Matrix& x, double cluster_tol = 1e-9) {
    detail::require_normal(x, cluster_tol, "profile_of input");
    EigenDecomposition dec = normal_eigen(x);
    double scale = 0.0;
    for (const cplx& v : dec.values) scale = std::max(scale, std::abs(v));
    const double tol = scale > 0.0 ? cluster_tol * scale : 1e-12;

    std::vector<cplx> vals = dec.values;
    std::sort(vals.begin(), vals.end(), detail::canonical_less);

    SpectralProfile p;
    std::vector<cplx> cluster;
    auto flush = [&]() {
        if (cluster.empty()) return;
        cplx mean{};
        for (const cplx& z : cluster) mean += z;
        mean /= double(cluster.size());
        if (std::abs(mean) <= tol)
            p.kernel_dim += long(cluster.size());
        else
            p.eigenvalues.push_back({mean, long(cluster.size())});
        cluster.clear();
    };
    for (const cplx& z : vals) {
        if (!cluster.empty() && std::abs(z - cluster.back()) > tol) flush();
        cluster.push_back(z);
    }
    flush();
    p.tail_bound = 0.0;
    return canonicalize(p);
}

} // namespace orbitkit

#endif
