#ifndef ORBITKIT_COUNTEREXAMPLES_HPP
#define ORBITKIT_COUNTEREXAMPLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "orbitkit/dense.hpp"
#include "orbitkit/error.hpp"
#include "orbitkit/linalg.hpp"
#include "orbitkit/norms.hpp"
#include "orbitkit/orbit.hpp"
#include "orbitkit/spectral.hpp"

namespace orbitkit {

/// One step of the escape sequence: a_n is a finite permutation of
/// a = diag(x_1..x_N, 0) while the shifted limit a' vacates the first slot.
struct EscapeReport {
    std::size_t n = 0;
    double distance = 0.0; // ||a_n - a'|| in the chosen NormSpec
    double bound = 0.0;    // 2 * sum_{k>n} x_k
    bool limit_outside_orbit = true;
    long kernel_dim_orbit = 1; // appended kernel block
    long kernel_dim_limit = 2; // appended block plus the vacated first slot
    Matrix orbit_element;      // a_n
    Matrix limit_element;      // a'
};

/// a_n = x_{n+1} q_1 + sum_{i<=n} x_i q_{i+1} + sum_{i>n+1} x_i q_i against the
/// shift a' = sum x_i q_{i+1}, truncated to dimension N+1.
inline EscapeReport isclosed_escape(const std::vector<double>& eigs, const NormSpec& spec,
                                    std::size_t n) {
    const std::size_t N = eigs.size();
    if (N < 2 || n < 1 || n >= N)
        throw domain_error("BadIndex", "need 1 <= n < N with N >= 2");
    for (std::size_t i = 0; i < N; ++i) {
        if (!(eigs[i] > 0.0))
            throw domain_error("NotDecreasing", "sequence must be strictly positive");
        if (i > 0 && !(eigs[i] < eigs[i - 1]))
            throw domain_error("NotDecreasing", "sequence must be strictly decreasing");
    }

    const std::size_t dim = N + 1; // slot i holds q_{i+1}; one extra slot for the shift
    Matrix an(dim), lim(dim);
    an(0, 0) = eigs[n]; // x_{n+1}
    for (std::size_t i = 1; i <= n; ++i) an(i, i) = eigs[i - 1];
    for (std::size_t i = n + 1; i < N; ++i) an(i, i) = eigs[i];
    for (std::size_t i = 1; i <= N; ++i) lim(i, i) = eigs[i - 1];

    EscapeReport rep;
    rep.n = n;
    std::vector<double> s;
    for (std::size_t i = 0; i < dim; ++i) s.push_back(std::abs(an(i, i) - lim(i, i)));
    std::sort(s.begin(), s.end(), std::greater<double>());
    rep.distance = ideal_norm(s, spec);
    rep.bound = 0.0;
    for (std::size_t k = n; k < N; ++k) rep.bound += 2.0 * eigs[k];
    rep.orbit_element = an;
    rep.limit_element = lim;
    return rep;
}

/// Non-separability witness: a carries the reference values on even slots and
/// b = uau* on odd slots; finite-rank unitaries cannot pull b toward a in the
/// ratio norm even though a and b share a spectral profile.
struct NonseparableReport {
    std::size_t N = 0;
    std::vector<double> partial_ratio_a;        // index n-1 holds the ratio at n
    std::vector<double> partial_ratio_b;
    std::vector<double> partial_ratio_diff;     // for b - a
    std::vector<double> residual_norm_by_m;     // ratio norm of b - u_m a u_m*
    bool same_unitary_orbit = false;
};

inline NonseparableReport nonseparable_demo(const NormSpec& ratio_spec, std::size_t N,
                                            std::size_t m_max) {
    if (ratio_spec.kind != NormSpec::Kind::Ratio)
        throw domain_error("BadNormSpec", "nonseparable_demo needs a ratio NormSpec");
    if (!ratio_spec.bi_normalizing())
        throw domain_error("NotBiNormalizing",
                           "reference must tend to 0 with divergent partial sums");
    if (N < 2) throw domain_error("BadIndex", "need N >= 2");

    auto ref_at = [&](std::size_t k) { // r_{k+1}, extended by the last value
        return k < ratio_spec.reference.size() ? ratio_spec.reference[k]
                                               : ratio_spec.reference.back();
    };

    NonseparableReport rep;
    rep.N = N;

    // singular values: a and b are both (r_1, ..., r_N); b - a doubles each r_k
    auto partial_ratios = [&](const std::vector<double>& s) {
        std::vector<double> out;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            num += s[i];
            den += ref_at(i);
            out.push_back(num / den);
        }
        return out;
    };
    std::vector<double> sa;
    for (std::size_t k = 0; k < N; ++k) sa.push_back(ref_at(k));
    rep.partial_ratio_a = partial_ratios(sa);
    rep.partial_ratio_b = rep.partial_ratio_a;
    std::vector<double> sdiff;
    for (std::size_t k = 0; k < N; ++k) {
        sdiff.push_back(ref_at(k));
        sdiff.push_back(ref_at(k));
    }
    rep.partial_ratio_diff = partial_ratios(sdiff);

    // u_m = 1 + x_m with rank(x_m) <= m: each pair swap costs rank 2, so u_m
    // aligns floor(m/2) eigenvalue blocks; the residual is the doubled tail.
    for (std::size_t m = 1; m <= m_max; ++m) {
        const std::size_t aligned = std::min(m / 2, N);
        std::vector<double> tail;
        for (std::size_t k = aligned; k < N; ++k) {
            tail.push_back(ref_at(k));
            tail.push_back(ref_at(k));
        }
        rep.residual_norm_by_m.push_back(tail.empty() ? 0.0 : ideal_norm(tail, ratio_spec));
    }

    SpectralProfile pa, pb;
    for (std::size_t k = 0; k < N; ++k) {
        pa.eigenvalues.push_back({ref_at(k), 1});
        pb.eigenvalues.push_back({ref_at(k), 1});
    }
    // distinct-values bookkeeping: merge equal reference values
    auto merge = [](SpectralProfile p) {
        SpectralProfile q;
        for (const auto& e : p.eigenvalues) {
            bool found = false;
            for (auto& f : q.eigenvalues)
                if (f.value == e.value) {
                    f.multiplicity += e.multiplicity;
                    found = true;
                }
            if (!found) q.eigenvalues.push_back(e);
        }
        q.kernel_dim = p.kernel_dim;
        return q;
    };
    pa = merge(pa);
    pb = merge(pb);
    pa.kernel_dim = long(N); // odd slots of the 2N-dim model are vacant for a
    pb.kernel_dim = long(N);
    rep.same_unitary_orbit = orbit_verdict(pa, pb).same_unitary_orbit;
    return rep;
}

/// Dense 2N-dim model of a and b for the demo above (a on even slots, b on
/// odd), plus the pair-swap unitary u_m of rank-m perturbation.
struct NonseparableModel {
    Matrix a, b, u_full;
    Matrix u_m(std::size_t m) const {
        Matrix u = Matrix::identity(a.dim());
        for (std::size_t k = 0; 2 * k + 1 < a.dim() && k < m / 2; ++k) {
            u(2 * k, 2 * k) = 0.0;
            u(2 * k + 1, 2 * k + 1) = 0.0;
            u(2 * k, 2 * k + 1) = 1.0;
            u(2 * k + 1, 2 * k) = 1.0;
        }
        return u;
    }
};

inline NonseparableModel nonseparable_model(const NormSpec& ratio_spec, std::size_t N) {
    if (ratio_spec.kind != NormSpec::Kind::Ratio)
        throw domain_error("BadNormSpec", "nonseparable_model needs a ratio NormSpec");
    auto ref_at = [&](std::size_t k) {
        return k < ratio_spec.reference.size() ? ratio_spec.reference[k]
                                               : ratio_spec.reference.back();
    };
    NonseparableModel mod;
    mod.a = Matrix(2 * N);
    mod.b = Matrix(2 * N);
    mod.u_full = Matrix(2 * N);
    for (std::size_t k = 0; k < N; ++k) {
        mod.a(2 * k + 1, 2 * k + 1) = ref_at(k);
        mod.b(2 * k, 2 * k) = ref_at(k);
        mod.u_full(2 * k, 2 * k + 1) = 1.0;
        mod.u_full(2 * k + 1, 2 * k) = 1.0;
    }
    return mod;
}

/// Shift-against-cycle witness that the groupoid topology is finer than the
/// norm topology: b_n converges to a in norm while the canonical intertwiner
/// w = u_n* u stays at distance >= 1 from p_a.
struct ShiftTopologyReport {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::size_t block_rank = 2;
    double norm_diff = 0.0;          // ||b_n - a||
    double bound = 0.0;              // 2 lambda_n
    double ww_defect = 0.0;          // ||w w* - (p_a - p_n)||
    double w_distance = 0.0;         // ||w - p_a||
    double shift_initial_defect = 0.0; // ||u*u - (p_a - p_N)||, truncation cost
    double conjugation_defect = 0.0;   // ||w a w* - b_n||
    bool cycle_same_unitary_orbit = false; // profile_of(u a u*) vs profile_of(b_n)
    double spectrum_truncation_defect = 0.0; // lambda_N, mass lost at the edge
};

inline ShiftTopologyReport shift_topology_demo(const std::vector<double>& eigs, std::size_t n,
                                               std::size_t block_rank = 2) {
    const std::size_t N = eigs.size();
    if (!(n >= 2 && n < N))
        throw domain_error("BadIndex", "need 2 <= n < N");
    if (block_rank != 1 && block_rank != 2)
        throw domain_error("BadIndex", "block_rank must be 1 or 2");
    for (std::size_t i = 0; i < N; ++i) {
        if (!(eigs[i] > 0.0))
            throw domain_error("NotDecreasing", "sequence must be strictly positive");
        if (i > 0 && !(eigs[i] < eigs[i - 1]))
            throw domain_error("NotDecreasing", "sequence must be strictly decreasing");
    }

    // slot layout: xi_k = e_{rk(k-1)}, Q_k spans {rk(k-1) .. rk k - 1}
    const std::size_t rk = block_rank;
    const std::size_t dim = rk * N;
    auto xi = [&](std::size_t k) { return rk * (k - 1); }; // 1-based k

    Matrix a(dim);
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t j = 0; j < rk; ++j) a(xi(k) + j, xi(k) + j) = eigs[k - 1];

    // u = sum_{k<N} xi_{k+1} (x) conj(xi_k) + sum_k (Q_k - p_k); the last xi
    // slot has nowhere to go, so u*u = p_a - p_N at this truncation
    Matrix u(dim);
    for (std::size_t k = 1; k < N; ++k) u(xi(k + 1), xi(k)) = 1.0;
    for (std::size_t k = 1; k <= N; ++k)
        for (std::size_t j = 1; j < rk; ++j) u(xi(k) + j, xi(k) + j) = 1.0;

    // cyclic permutation xi_1 -> xi_2 -> ... -> xi_n -> xi_1, identity elsewhere
    Matrix un = Matrix::identity(dim);
    for (std::size_t k = 1; k <= n; ++k) {
        un(xi(k), xi(k)) = 0.0;
        un(k < n ? xi(k + 1) : xi(1), xi(k)) = 1.0;
    }

    const Matrix w = un.adjoint() * u;
    const Matrix bn = w * a * w.adjoint();

    const Matrix p_a = Matrix::identity(dim); // a has trivial kernel here
    Matrix p_n(dim), p_N(dim);
    p_n(xi(n), xi(n)) = 1.0;
    p_N(xi(N), xi(N)) = 1.0;

    ShiftTopologyReport rep;
    rep.n = n;
    rep.dim = dim;
    rep.block_rank = rk;
    rep.norm_diff = operator_norm(bn - a);
    rep.bound = 2.0 * eigs[n - 1];
    rep.ww_defect = operator_norm(w * w.adjoint() - (p_a - p_n));
    rep.w_distance = operator_norm(w - p_a);
    rep.shift_initial_defect = operator_norm(u.adjoint() * u - (p_a - p_N));
    rep.conjugation_defect = 0.0;
    rep.cycle_same_unitary_orbit =
        orbit_verdict(profile_of(u * a * u.adjoint()), profile_of(bn)).same_unitary_orbit;
    rep.spectrum_truncation_defect = eigs[N - 1];
    return rep;
}

} // namespace orbitkit

#endif
