#ifndef ORBITKIT_EXPECTATION_HPP
#define ORBITKIT_EXPECTATION_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"
#include "orbitkit/linalg.hpp"
#include "orbitkit/spectral.hpp"

namespace orbitkit {

namespace detail {

inline std::vector<long> block_index_of(const ProjectionFamily& fam) {
    std::vector<long> owner(fam.dim, -1);
    for (std::size_t b = 0; b < fam.blocks.size(); ++b)
        for (std::size_t i : fam.blocks[b]) {
            if (i >= fam.dim || owner[i] != -1)
                throw domain_error("BadProjectionFamily", "blocks must partition the indices");
            owner[i] = long(b);
        }
    for (long o : owner)
        if (o == -1)
            throw domain_error("BadProjectionFamily", "blocks must cover every index");
    return owner;
}

} // namespace detail

/// E(x) = sum_k p_k x p_k: keeps entries whose row and column lie in the same
/// block, zeroes the rest.
inline Matrix conditional_expectation(const Matrix& x, const ProjectionFamily& fam) {
    if (x.dim() != fam.dim)
        throw domain_error("DimensionMismatch", "expectation family dim differs from matrix");
    const std::vector<long> owner = detail::block_index_of(fam);
    Matrix e(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
        for (std::size_t j = 0; j < x.dim(); ++j)
            if (owner[i] == owner[j]) e(i, j) = x(i, j);
    return e;
}

/// x commutes with a iff E(x) = x; the two tests are run side by side and must
/// agree.
inline bool commutant_check(const Matrix& x, const Matrix& a, const ProjectionFamily& fam) {
    if (x.dim() != a.dim() || x.dim() != fam.dim)
        throw domain_error("DimensionMismatch", "commutant_check dims differ");
    const std::vector<long> owner = detail::block_index_of(fam);
    // a must be block-constant diagonal relative to fam
    const double a_scale = std::max(a.frobenius_norm(), 1e-300);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j && std::abs(a(i, j)) > 1e-12 * a_scale)
                throw domain_error("InconsistentFamily", "a must be diagonal");
    for (const auto& block : fam.blocks)
        for (std::size_t i : block)
            if (std::abs(a(i, i) - a(block[0], block[0])) > 1e-12 * a_scale)
                throw domain_error("InconsistentFamily", "a must be constant on each block");

    const double na = operator_norm(a);
    const double nx = operator_norm(x);
    const bool commutes = operator_norm(x * a - a * x) <= 1e-9 * na * nx + 1e-15;
    const bool fixed = operator_norm(conditional_expectation(x, fam) - x) <= 1e-9 * nx + 1e-15;
    if (commutes != fixed)
        throw domain_error("CommutantTestsDisagree",
                           "commutator and expectation tests returned different verdicts");
    return commutes;
}

} // namespace orbitkit

#endif
