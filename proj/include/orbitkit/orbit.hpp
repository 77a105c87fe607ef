#ifndef ORBITKIT_ORBIT_HPP
#define ORBITKIT_ORBIT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"
#include "orbitkit/linalg.hpp"
#include "orbitkit/norms.hpp"
#include "orbitkit/spectral.hpp"

namespace orbitkit {

struct OrbitVerdict {
    bool same_unitary_orbit = false;
    bool in_unitary_orbit_closure = false;
    bool same_groupoid_orbit = false;
    bool in_groupoid_orbit_closure = false;
    std::vector<std::string> reasons;
};

struct PartialIsometryCert {
    Matrix v;
    Matrix initial_proj;
    Matrix final_proj;
    double epsilon = 0.0;
    double certified_bound = 0.0; // 2 * epsilon
    double achieved_error = 0.0;  // ||v a v* - b||
};

struct PartitionCell {
    cplx center;
    std::vector<std::size_t> members; // indices into the canonical eigenvalue list
};

struct PartitionCells {
    std::vector<PartitionCell> cells;
    double diameter_bound = 0.0;
};

/// Finite-rank unitary approximant aligning the leading eigenvalue blocks of a
/// with those of b, with its residual available in any symmetric norm.
struct ApproxUnitary {
    Matrix u;
    std::vector<double> diff_singular_values;   // s(u a u* - b)
    std::vector<double> a_tail_singular_values; // s(a - a p_m)
    std::vector<double> b_tail_singular_values; // s(b - b q_m)

    double error_in(const NormSpec& spec) const { return ideal_norm(diff_singular_values, spec); }
    double guarantee_in(const NormSpec& spec) const {
        return ideal_norm(a_tail_singular_values, spec) + ideal_norm(b_tail_singular_values, spec);
    }
};

namespace detail {

constexpr double kPointTol = 1e-12;

inline bool same_point(const cplx& a, const cplx& b, double scale) {
    return std::abs(a - b) <= kPointTol * std::max(1.0, scale);
}

inline double profile_scale(const SpectralProfile& p) {
    double s = 0.0;
    for (const auto& e : p.eigenvalues) s = std::max(s, std::abs(e.value));
    for (const cplx& z : p.essential_points) s = std::max(s, std::abs(z));
    return s;
}

inline bool point_in(const std::vector<cplx>& set, const cplx& z, double scale) {
    for (const cplx& w : set)
        if (same_point(w, z, scale)) return true;
    return false;
}

inline bool same_point_set(const std::vector<cplx>& a, const std::vector<cplx>& b, double scale) {
    for (const cplx& z : a)
        if (!point_in(b, z, scale)) return false;
    for (const cplx& z : b)
        if (!point_in(a, z, scale)) return false;
    return true;
}

// full spectrum of a profile as a point set: eigenvalues, essential points,
// and 0 when the kernel is nontrivial
inline std::vector<cplx> spectrum_set(const SpectralProfile& p) {
    std::vector<cplx> s;
    for (const auto& e : p.eigenvalues) s.push_back(e.value);
    for (const cplx& z : p.essential_points)
        if (!point_in(s, z, profile_scale(p))) s.push_back(z);
    if (p.kernel_dim != 0 && !point_in(s, cplx{}, profile_scale(p))) s.push_back(cplx{});
    return s;
}

// multiplicity of z as an eigenvalue (kernel_dim for 0); kInfiniteDim possible
inline long point_multiplicity(const SpectralProfile& p, const cplx& z, double scale) {
    if (same_point(z, cplx{}, scale)) return p.kernel_dim;
    for (const auto& e : p.eigenvalues)
        if (same_point(e.value, z, scale)) return e.multiplicity;
    return 0;
}

inline bool same_eigenvalue_multiset(const SpectralProfile& a, const SpectralProfile& b,
                                     double scale) {
    if (a.eigenvalues.size() != b.eigenvalues.size()) return false;
    for (const auto& e : a.eigenvalues) {
        bool found = false;
        for (const auto& f : b.eigenvalues)
            if (same_point(e.value, f.value, scale) && e.multiplicity == f.multiplicity) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

} // namespace detail

/// Decides the four orbit relations from spectral data alone.
inline OrbitVerdict orbit_verdict(const SpectralProfile& a, const SpectralProfile& b) {
    validate_profile(a);
    validate_profile(b);
    if (a.tail_bound != 0.0 || b.tail_bound != 0.0)
        throw domain_error("InexactProfile", "orbit_verdict requires exact profiles");

    const double scale = std::max(detail::profile_scale(a), detail::profile_scale(b));
    OrbitVerdict v;

    const bool eigs_equal = detail::same_eigenvalue_multiset(a, b, scale);
    const bool kernel_equal = a.kernel_dim == b.kernel_dim;
    const bool essential_equal =
        detail::same_point_set(a.essential_points, b.essential_points, scale);

    v.same_unitary_orbit = eigs_equal && kernel_equal && essential_equal;
    v.same_groupoid_orbit = eigs_equal && essential_equal;

    const std::vector<cplx> sa = detail::spectrum_set(a);
    const std::vector<cplx> sb = detail::spectrum_set(b);
    const bool spec_equal = detail::same_point_set(sa, sb, scale);

    // isolated points: spectrum minus declared essential points
    bool isolated_mult_equal = true;
    for (const cplx& z : sa) {
        if (detail::point_in(a.essential_points, z, scale) ||
            detail::point_in(b.essential_points, z, scale))
            continue;
        if (detail::point_multiplicity(a, z, scale) != detail::point_multiplicity(b, z, scale))
            isolated_mult_equal = false;
    }
    v.in_unitary_orbit_closure = spec_equal && isolated_mult_equal;

    // groupoid closure ignores the point 0 and the kernel
    std::vector<cplx> sa0 = sa, sb0 = sb;
    auto drop_zero = [&](std::vector<cplx>& s) {
        s.erase(std::remove_if(s.begin(), s.end(),
                               [&](const cplx& z) { return detail::same_point(z, cplx{}, scale); }),
                s.end());
    };
    drop_zero(sa0);
    drop_zero(sb0);
    const bool spec0_equal = detail::same_point_set(sa0, sb0, scale);
    bool isolated_nonzero_mult_equal = true;
    for (const cplx& z : sa0) {
        if (detail::point_in(a.essential_points, z, scale) ||
            detail::point_in(b.essential_points, z, scale))
            continue;
        if (detail::point_multiplicity(a, z, scale) != detail::point_multiplicity(b, z, scale))
            isolated_nonzero_mult_equal = false;
    }
    v.in_groupoid_orbit_closure = spec0_equal && isolated_nonzero_mult_equal && essential_equal;

    // consistency chain (structural invariants of the verdict)
    v.in_unitary_orbit_closure = v.in_unitary_orbit_closure || v.same_unitary_orbit;
    v.in_groupoid_orbit_closure =
        v.in_groupoid_orbit_closure || v.in_unitary_orbit_closure || v.same_groupoid_orbit;

    if (!spec_equal || !spec0_equal) v.reasons.push_back("SPECTRUM_MISMATCH");
    if (!isolated_mult_equal || !isolated_nonzero_mult_equal)
        v.reasons.push_back("ISOLATED_MULTIPLICITY_MISMATCH");
    if (!kernel_equal) v.reasons.push_back("KERNEL_DIM_MISMATCH");
    if (!essential_equal) v.reasons.push_back("ESSENTIAL_POINTS_MISMATCH");
    if (!eigs_equal) v.reasons.push_back("EIGENVALUE_MULTISET_MISMATCH");
    return v;
}

/// Greedy epsilon-partition of the nonzero eigenvalues in canonical order:
/// a new cell opens when a value is farther than eps/2 from every center.
inline PartitionCells epsilon_partition(const SpectralProfile& profile, double eps) {
    SpectralProfile p = canonicalize(profile);
    validate_profile(p);
    if (p.tail_bound != 0.0)
        throw domain_error("InexactProfile", "epsilon_partition requires an exact profile");
    PartitionCells out;
    out.diameter_bound = eps;
    for (std::size_t i = 0; i < p.eigenvalues.size(); ++i) {
        const cplx z = p.eigenvalues[i].value;
        std::size_t best = out.cells.size();
        double best_dist = 0.0;
        for (std::size_t c = 0; c < out.cells.size(); ++c) {
            const double d = std::abs(z - out.cells[c].center);
            if (best == out.cells.size() || d < best_dist) {
                best = c;
                best_dist = d;
            }
        }
        if (best == out.cells.size() || best_dist > eps / 2.0) {
            out.cells.push_back({z, {i}});
        } else {
            out.cells[best].members.push_back(i);
        }
    }
    return out;
}

namespace detail {

// half the minimum gap between distinct nonzero points of the two spectra
inline double default_eps(const SpectralProfile& a, const SpectralProfile& b) {
    std::vector<cplx> pts;
    for (const auto& e : a.eigenvalues) pts.push_back(e.value);
    for (const auto& e : b.eigenvalues)
        if (!point_in(pts, e.value, profile_scale(b))) pts.push_back(e.value);
    double min_gap = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (double d = std::abs(pts[i] - pts[j]); min_gap < 0.0 || d < min_gap) min_gap = d;
    return min_gap > 0.0 ? min_gap / 2.0 : 1e-9;
}

} // namespace detail

/// Block partial isometry v with v*v = p_a, v v* = p_b matching a- and
/// b-eigenvectors cell by cell; ||v a v* - b|| <= 2 eps by construction.
inline PartialIsometryCert construct_intertwiner(const SpectralProfile& a_in,
                                                 const SpectralProfile& b_in, double eps,
                                                 std::size_t total_dim) {
    SpectralProfile a = canonicalize(a_in);
    SpectralProfile b = canonicalize(b_in);
    OrbitVerdict verdict = orbit_verdict(a, b);
    if (!verdict.in_groupoid_orbit_closure)
        throw domain_error("NotInClosure", "b is not in the groupoid-orbit closure of a");
    if (eps <= 0.0) eps = detail::default_eps(a, b);

    // joint greedy partition over the union of nonzero eigenvalues
    struct JointCell {
        cplx center;
        std::vector<std::size_t> a_idx, b_idx; // matrix indices
    };
    std::vector<JointCell> cells;
    auto place = [&](const cplx& z, std::vector<std::size_t> idx, bool from_a) {
        std::size_t best = cells.size();
        double best_dist = 0.0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double d = std::abs(z - cells[c].center);
            if (best == cells.size() || d < best_dist) {
                best = c;
                best_dist = d;
            }
        }
        if (best == cells.size() || best_dist > eps / 2.0) {
            cells.push_back({z, {}, {}});
            best = cells.size() - 1;
        }
        auto& slot = from_a ? cells[best].a_idx : cells[best].b_idx;
        slot.insert(slot.end(), idx.begin(), idx.end());
    };

    auto [amat, afam] = materialize(a, total_dim);
    auto [bmat, bfam] = materialize(b, total_dim);
    // interleave a and b values in canonical order so cell centers are shared
    struct Pt {
        cplx z;
        std::vector<std::size_t> idx;
        bool from_a;
    };
    std::vector<Pt> pts;
    for (std::size_t k = 0; k < a.eigenvalues.size(); ++k)
        pts.push_back({a.eigenvalues[k].value, afam.blocks[k], true});
    for (std::size_t k = 0; k < b.eigenvalues.size(); ++k)
        pts.push_back({b.eigenvalues[k].value, bfam.blocks[k], false});
    std::stable_sort(pts.begin(), pts.end(),
                     [](const Pt& x, const Pt& y) { return detail::canonical_less(x.z, y.z); });
    for (auto& pt : pts) place(pt.z, pt.idx, pt.from_a);

    Matrix v(total_dim);
    for (const auto& cell : cells) {
        if (cell.a_idx.size() != cell.b_idx.size())
            throw domain_error("CellMassMismatch",
                               "cell multiplicities of a and b differ at this eps");
        for (std::size_t i = 0; i < cell.a_idx.size(); ++i)
            v(cell.b_idx[i], cell.a_idx[i]) = 1.0;
    }

    PartialIsometryCert cert;
    cert.v = v;
    cert.initial_proj = Matrix(total_dim);
    cert.final_proj = Matrix(total_dim);
    for (std::size_t i = 0; i < total_dim; ++i) {
        if (amat(i, i) != cplx{}) cert.initial_proj(i, i) = 1.0;
        if (bmat(i, i) != cplx{}) cert.final_proj(i, i) = 1.0;
    }
    cert.epsilon = eps;
    cert.certified_bound = 2.0 * eps;
    cert.achieved_error = operator_norm(v * amat * v.adjoint() - bmat);
    return cert;
}

/// Permutation unitary (identity plus a finite-rank perturbation) aligning the
/// first m canonical eigenvalue blocks of a with those of b.
inline ApproxUnitary finite_rank_unitary_sequence(const SpectralProfile& a_in,
                                                  const SpectralProfile& b_in, std::size_t m,
                                                  std::size_t total_dim) {
    SpectralProfile a = canonicalize(a_in);
    SpectralProfile b = canonicalize(b_in);
    OrbitVerdict verdict = orbit_verdict(a, b);
    if (!verdict.in_unitary_orbit_closure)
        throw domain_error("NotInClosure", "b is not in the unitary-orbit closure of a");

    auto [amat, afam] = materialize(a, total_dim);
    auto [bmat, bfam] = materialize(b, total_dim);

    const std::size_t blocks = std::min({m, a.eigenvalues.size(), b.eigenvalues.size()});
    std::vector<long> target(total_dim, -1);
    std::vector<bool> taken(total_dim, false);
    for (std::size_t k = 0; k < blocks; ++k) {
        // closure implies matching isolated multiplicities; be defensive anyway
        const std::size_t cnt = std::min(afam.blocks[k].size(), bfam.blocks[k].size());
        for (std::size_t i = 0; i < cnt; ++i) {
            target[afam.blocks[k][i]] = long(bfam.blocks[k][i]);
            taken[bfam.blocks[k][i]] = true;
        }
    }
    std::size_t next_free = 0;
    for (std::size_t i = 0; i < total_dim; ++i) {
        if (target[i] != -1) continue;
        while (taken[next_free]) ++next_free;
        target[i] = long(next_free);
        taken[next_free] = true;
    }
    Matrix u(total_dim);
    for (std::size_t i = 0; i < total_dim; ++i) u(std::size_t(target[i]), i) = 1.0;

    ApproxUnitary out;
    out.u = u;
    Matrix diff = u * amat * u.adjoint() - bmat;
    std::vector<double> ds;
    for (std::size_t i = 0; i < total_dim; ++i) ds.push_back(std::abs(diff(i, i)));
    std::sort(ds.begin(), ds.end(), std::greater<double>());
    out.diff_singular_values = std::move(ds);

    auto tail = [&](const SpectralProfile& p) {
        std::vector<double> t;
        for (std::size_t k = blocks; k < p.eigenvalues.size(); ++k)
            t.insert(t.end(), std::size_t(p.eigenvalues[k].multiplicity),
                     std::abs(p.eigenvalues[k].value));
        std::sort(t.begin(), t.end(), std::greater<double>());
        return t;
    };
    out.a_tail_singular_values = tail(a);
    out.b_tail_singular_values = tail(b);
    return out;
}

namespace detail {

inline std::vector<cplx> lagrange_nodes(const SpectralProfile& p) {
    std::vector<cplx> nodes;
    for (const auto& e : p.eigenvalues) nodes.push_back(e.value);
    if (p.kernel_dim != 0) nodes.push_back(cplx{});
    return nodes;
}

inline double min_node_gap(const std::vector<cplx>& nodes) {
    double g = -1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (double d = std::abs(nodes[i] - nodes[j]); g < 0.0 || d < g) g = d;
    return g < 0.0 ? 1.0 : g;
}

} // namespace detail

/// Coefficients of the Lagrange polynomial f_j with f_j(mu_j) = 1 and 0 at the
/// other nodes (0 appended as a node when the kernel is nontrivial).
inline std::vector<cplx> lagrange_coefficients(const SpectralProfile& p, std::size_t j) {
    validate_profile(p);
    const std::vector<cplx> nodes = detail::lagrange_nodes(p);
    if (j >= p.eigenvalues.size())
        throw domain_error("BadIndex", "eigenvalue index out of range");
    if (detail::min_node_gap(nodes) < 1e-6)
        throw domain_error("SpectrumTooClose", "nodes closer than 1e-6");
    std::vector<cplx> coeff{1.0};
    cplx denom = 1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i == j) continue;
        // multiply by (z - nodes[i])
        std::vector<cplx> next(coeff.size() + 1, cplx{});
        for (std::size_t k = 0; k < coeff.size(); ++k) {
            next[k + 1] += coeff[k];
            next[k] -= coeff[k] * nodes[i];
        }
        coeff = std::move(next);
        denom *= nodes[j] - nodes[i];
    }
    for (cplx& c : coeff) c /= denom;
    return coeff; // coeff[k] multiplies z^k
}

/// Lipschitz bound g_j(t) = sum_k k |alpha_k| t^{k-1} for f_j on the ball of
/// radius t.
inline double lagrange_lipschitz_bound(const SpectralProfile& p, std::size_t j, double t) {
    const std::vector<cplx> coeff = lagrange_coefficients(p, j);
    double g = 0.0;
    for (std::size_t k = 1; k < coeff.size(); ++k)
        g += double(k) * std::abs(coeff[k]) * std::pow(t, double(k - 1));
    return g;
}

/// Evaluates f_j on a normal matrix by Horner's scheme; the approximate j-th
/// spectral projection of x.
inline Matrix lagrange_spectral_projector(const SpectralProfile& p, std::size_t j,
                                          const Matrix& x) {
    const std::vector<cplx> coeff = lagrange_coefficients(p, j);
    detail::require_normal(x, 1e-9, "lagrange_spectral_projector input");

    // spectrum of x must sit within min-gap/4 of the profile's nodes
    const std::vector<cplx> nodes = detail::lagrange_nodes(p);
    const double gap = detail::min_node_gap(nodes);
    SpectralProfile px = profile_of(x);
    std::vector<cplx> xpts;
    for (const auto& e : px.eigenvalues) xpts.push_back(e.value);
    if (px.kernel_dim != 0) xpts.push_back(cplx{});
    for (const cplx& z : xpts) {
        double best = -1.0;
        for (const cplx& w : nodes) best = best < 0.0 ? std::abs(z - w) : std::min(best, std::abs(z - w));
        if (best > gap / 4.0)
            throw domain_error("SpectrumTooClose",
                               "spectrum of x strays farther than min-gap/4 from the nodes");
    }

    const std::size_t n = x.dim();
    Matrix r = Matrix::identity(n) * coeff.back();
    for (std::size_t k = coeff.size() - 1; k-- > 0;)
        r = r * x + Matrix::identity(n) * coeff[k];
    return r;
}

} // namespace orbitkit

#endif
