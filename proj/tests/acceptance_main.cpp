// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "orbitkit/orbitkit.hpp"
#include "test_rng.hpp"

using namespace orbitkit;
using testutil::random_family;
using testutil::random_hermitian;
using testutil::random_matrix;
using testutil::random_unitary;
using testutil::rng;

namespace {

int failures = 0;

void criterion(int id, const char* name, double time_limit_s,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs > time_limit_s) {
        ok = false;
        detail = "time limit exceeded";
    }
    std::printf("[%s] criterion %d (%s) %.1fs%s%s\n", ok ? "PASS" : "FAIL", id, name, secs,
                detail.empty() ? "" : " - ", detail.c_str());
    if (!ok) ++failures;
}

std::size_t rand_dim(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng());
}

// distinct complex values on a coarse grid; pairwise gap >= spacing
std::vector<cplx> grid_values(std::size_t count, double spacing) {
    std::vector<cplx> out;
    std::vector<int> used;
    std::uniform_int_distribution<int> pick(1, 40);
    while (out.size() < count) {
        const int j = pick(rng());
        bool dup = false;
        for (int u : used) dup = dup || u == j;
        if (dup) continue;
        used.push_back(j);
        out.push_back(cplx{spacing * j, spacing * double(j % 5)});
    }
    return out;
}

bool crit_expectation_contraction(std::string& detail) {
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = rand_dim(2, 32);
        Matrix x = random_matrix(n);
        ProjectionFamily fam = random_family(n, 6);
        Matrix e = conditional_expectation(x, fam);
        MajorizationReport rep = ky_fan_majorizes(svd(e).singular_values, svd(x).singular_values);
        double slack_ok = true;
        for (std::size_t i = 0; i < rep.partial_sums_x.size(); ++i)
            slack_ok = slack_ok && rep.partial_sums_x[i] <= rep.partial_sums_y[i] + 1e-9;
        if (!slack_ok) {
            detail = "partial-sum dominance violated at sample " + std::to_string(t);
            return false;
        }
    }
    return true;
}

bool crit_commutator_round_trip(std::string& detail) {
    for (int t = 0; t < 500; ++t) {
        const std::size_t blocks = rand_dim(2, 5);
        std::vector<cplx> vals = grid_values(blocks, 1e-3 * 50.0); // gap >= 0.05 >= 1e-3
        SpectralProfile p;
        std::size_t dim = 0;
        for (const cplx& v : vals) {
            const long mult = long(rand_dim(1, 4));
            p.eigenvalues.push_back({v, mult});
            dim += std::size_t(mult);
        }
        if (dim > 30) {
            p.eigenvalues.back().multiplicity = 1;
        }
        dim = std::size_t(p.total_multiplicity());
        auto [a, fam] = materialize(p, dim);
        Matrix y = random_matrix(dim);
        y = y - conditional_expectation(y, fam);
        Matrix x = solve_commutator(p, fam, y);
        const double res = (delta(a, x) - y).frobenius_norm();
        if (res > 1e-9 * std::max(y.frobenius_norm(), 1e-12)) {
            detail = "residual " + std::to_string(res) + " at sample " + std::to_string(t);
            return false;
        }
        if (t % 10 == 0) {
            // dense cross-check in a rotated frame
            Matrix u = random_unitary(dim);
            Matrix ar = u * a * u.adjoint(), xr = u * x * u.adjoint(), yr = u * y * u.adjoint();
            if ((delta(ar, xr) - yr).frobenius_norm() >
                1e-8 * std::max(y.frobenius_norm(), 1e-12)) {
                detail = "rotated-frame residual at sample " + std::to_string(t);
                return false;
            }
        }
    }
    return true;
}

bool crit_intertwiner(std::string& detail) {
    for (int t = 0; t < 200; ++t) {
        const std::size_t blocks = rand_dim(1, 5);
        std::vector<cplx> vals = grid_values(blocks, 0.05);
        SpectralProfile a, b;
        std::size_t mass = 0;
        for (const cplx& v : vals) {
            const long mult = long(rand_dim(1, 3));
            a.eigenvalues.push_back({v, mult});
            mass += std::size_t(mult);
        }
        b.eigenvalues = a.eigenvalues;
        std::shuffle(b.eigenvalues.begin(), b.eigenvalues.end(), rng());
        a.kernel_dim = long(rand_dim(0, 3));
        b.kernel_dim = long(rand_dim(0, 3));
        const std::size_t dim = std::min<std::size_t>(64, mass + 4);
        PartialIsometryCert cert = construct_intertwiner(a, b, 0.0, dim);
        Matrix gram = cert.v.adjoint() * cert.v;
        if ((gram - cert.initial_proj).frobenius_norm() != 0.0) {
            detail = "v*v != p_a exactly at sample " + std::to_string(t);
            return false;
        }
        if (cert.achieved_error > 2.0 * cert.epsilon + 1e-12) {
            detail = "error above 2 eps at sample " + std::to_string(t);
            return false;
        }
    }
    return true;
}

bool crit_verdict_oracle(std::string& detail) {
    for (int t = 0; t < 200; ++t) {
        const std::size_t blocks = rand_dim(1, 3);
        std::vector<cplx> vals = grid_values(blocks, 0.1);
        SpectralProfile p;
        std::size_t mass = 0;
        for (const cplx& v : vals) {
            const long mult = long(rand_dim(1, 2));
            p.eigenvalues.push_back({v, mult});
            mass += std::size_t(mult);
        }
        const std::size_t dim = std::min<std::size_t>(8, mass + 2);
        if (mass > dim) continue;
        auto [a, fam] = materialize(p, dim);
        // random injection of the support indices into {0..dim-1}
        std::vector<std::size_t> src, dst(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            if (a(i, i) != cplx{}) src.push_back(i);
            dst[i] = i;
        }
        std::shuffle(dst.begin(), dst.end(), rng());
        Matrix v(dim);
        for (std::size_t i = 0; i < src.size(); ++i) v(dst[i], src[i]) = 1.0;
        Matrix conj = v * a * v.adjoint();
        if (!orbit_verdict(p, profile_of(conj)).same_groupoid_orbit) {
            detail = "conjugated pair misclassified at sample " + std::to_string(t);
            return false;
        }
        // perturb one eigenvalue by 1e-2 (grid gap is 0.1): must break equality
        SpectralProfile q = p;
        q.eigenvalues[0].value += cplx{1e-2, 0.0};
        OrbitVerdict w = orbit_verdict(p, q);
        if (w.same_groupoid_orbit || w.same_unitary_orbit) {
            detail = "perturbed pair misclassified at sample " + std::to_string(t);
            return false;
        }
    }
    return true;
}

bool crit_escape(std::string& detail) {
    std::vector<double> eigs;
    for (int k = 1; k <= 12; ++k) eigs.push_back(std::pow(2.0, -double(k)));
    for (std::size_t n = 1; n < eigs.size(); ++n) {
        EscapeReport r = isclosed_escape(eigs, NormSpec::trace(), n);
        double tail = 0.0;
        for (std::size_t k = n; k < eigs.size(); ++k) tail += 2.0 * eigs[k];
        if (r.distance > tail + 1e-9) {
            detail = "distance above tail bound at n=" + std::to_string(n);
            return false;
        }
        if (r.kernel_dim_limit != r.kernel_dim_orbit + 1) {
            detail = "kernel accounting wrong at n=" + std::to_string(n);
            return false;
        }
    }
    return true;
}

bool crit_separability(std::string& detail) {
    // separable side: Schatten-1 error vanishes once every block is aligned
    SpectralProfile a;
    for (int k = 1; k <= 6; ++k)
        a.eigenvalues.push_back({cplx{1.0 / double(k), 0.0}, (k % 2) + 1});
    a.kernel_dim = 1;
    SpectralProfile b = a;
    std::shuffle(b.eigenvalues.begin(), b.eigenvalues.end(), rng());
    const std::size_t dim = std::size_t(a.total_multiplicity() + a.kernel_dim);
    ApproxUnitary u = finite_rank_unitary_sequence(a, b, a.eigenvalues.size(), dim);
    if (u.error_in(NormSpec::schatten(1.0)) > 1e-6) {
        detail = "Schatten-1 error did not vanish at full alignment";
        return false;
    }
    // non-separable side: ratio norm stays >= 0.5 for every m <= 32
    std::vector<double> ref;
    for (int k = 1; k <= 128; ++k) ref.push_back(1.0 / double(k));
    NonseparableReport rep = nonseparable_demo(NormSpec::ratio(ref), 64, 32);
    for (std::size_t m = 1; m <= 32; ++m)
        if (rep.residual_norm_by_m[m - 1] < 0.5) {
            detail = "ratio residual below 0.5 at m=" + std::to_string(m);
            return false;
        }
    return true;
}

bool crit_shift_demo(std::string& detail) {
    std::vector<double> eigs;
    for (int k = 1; k <= 16; ++k) eigs.push_back(1.0 / double(k));
    for (std::size_t n = 2; n <= 15; ++n) {
        ShiftTopologyReport r = shift_topology_demo(eigs, n);
        if (r.norm_diff > 2.0 / double(n) + 1e-12) {
            detail = "||b_n - a|| above 2/n at n=" + std::to_string(n);
            return false;
        }
        if (r.ww_defect > 1e-10) {
            detail = "ww* != p_a - p_n at n=" + std::to_string(n);
            return false;
        }
        if (r.w_distance < 1.0 - 1e-9) {
            detail = "||w - p_a|| below 1 at n=" + std::to_string(n);
            return false;
        }
    }
    return true;
}

bool crit_eigensolver(std::string& detail) {
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = rand_dim(2, 64);
        Matrix h = random_hermitian(n);
        EigenDecomposition d = hermitian_eigen(h);
        if (d.residual > 1e-10 * std::max(h.frobenius_norm(), 1e-12)) {
            detail = "Jacobi residual too large at sample " + std::to_string(t);
            return false;
        }
    }
    // normal_eigen multiplicity round trip at gap 1e-6
    for (int t = 0; t < 40; ++t) {
        SpectralProfile p;
        p.eigenvalues = {{cplx{1.0, 0.0}, 2}, {cplx{1.0 + 2e-6, 0.0}, 1},
                         {cplx{0.5, 0.5}, 3}};
        p.kernel_dim = 1;
        const std::size_t dim = 7;
        auto [m, fam] = materialize(p, dim);
        Matrix u = random_unitary(dim);
        SpectralProfile q = profile_of(u * m * u.adjoint());
        SpectralProfile cp = canonicalize(p);
        if (q.kernel_dim != cp.kernel_dim || q.eigenvalues.size() != cp.eigenvalues.size()) {
            detail = "profile round trip lost a cluster";
            return false;
        }
        for (std::size_t i = 0; i < q.eigenvalues.size(); ++i)
            if (q.eigenvalues[i].multiplicity != cp.eigenvalues[i].multiplicity) {
                detail = "multiplicity mismatch in round trip";
                return false;
            }
    }
    return true;
}

bool crit_norm_axioms(std::string& detail) {
    std::vector<double> ref;
    for (int k = 1; k <= 16; ++k) ref.push_back(1.0 / double(k));
    const std::vector<NormSpec> specs{NormSpec::operator_norm(), NormSpec::schatten(1.0),
                                      NormSpec::schatten(2.0), NormSpec::ky_fan(3),
                                      NormSpec::trace(), NormSpec::ratio(ref)};
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = rand_dim(2, 8);
        Matrix x = random_matrix(n), y = random_matrix(n);
        Matrix u = random_unitary(n), v = random_unitary(n);
        const auto sx = svd(x).singular_values;
        const auto sy = svd(y).singular_values;
        const auto sxy = svd(x + y).singular_values;
        const auto sux = svd(u * x * v).singular_values;
        for (const NormSpec& spec : specs) {
            const double nx = ideal_norm(sx, spec);
            if (ideal_norm(sxy, spec) > nx + ideal_norm(sy, spec) + 1e-9) {
                detail = "triangle inequality failed";
                return false;
            }
            if (std::abs(ideal_norm(sux, spec) - nx) > 1e-9 * std::max(1.0, nx) + 1e-9) {
                detail = "unitary invariance failed";
                return false;
            }
            if (sx[0] > nx + 1e-9 || nx > ideal_norm(sx, NormSpec::trace()) + 1e-9) {
                detail = "interleaving failed";
                return false;
            }
        }
        std::vector<double> e1(1, 1.0);
        for (const NormSpec& spec : specs)
            if (std::abs(ideal_norm(e1, spec) - 1.0) > 1e-12) {
                detail = "rank-one normalization failed";
                return false;
            }
    }
    return true;
}

} // namespace

int main() {
    criterion(1, "expectation contraction", 30.0, crit_expectation_contraction);
    criterion(2, "commutator round trip", 60.0, crit_commutator_round_trip);
    criterion(3, "intertwiner certificate", 120.0, crit_intertwiner);
    criterion(4, "orbit-verdict oracle", 60.0, crit_verdict_oracle);
    criterion(5, "escape-sequence convergence", 30.0, crit_escape);
    criterion(6, "separability dichotomy", 60.0, crit_separability);
    criterion(7, "shift-topology demo", 30.0, crit_shift_demo);
    criterion(8, "eigensolver quality gate", 60.0, crit_eigensolver);
    criterion(9, "norm axioms", 60.0, crit_norm_axioms);
    std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
    return failures == 0 ? 0 : 1;
}
