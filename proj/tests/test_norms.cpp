#include <catch_amalgamated.hpp>

#include <cmath>

#include "orbitkit/orbitkit.hpp"
#include "test_rng.hpp"

using namespace orbitkit;
using testutil::random_matrix;
using testutil::random_unitary;

namespace {

std::vector<double> harmonic_ref(std::size_t n) {
    std::vector<double> r;
    for (std::size_t k = 1; k <= n; ++k) r.push_back(1.0 / double(k));
    return r;
}

} // namespace

TEST_CASE("ideal_norm closed forms on known sequences") {
    const std::vector<double> s{4.0, 3.0, 2.0, 1.0};
    REQUIRE(ideal_norm(s, NormSpec::operator_norm()) == 4.0);
    REQUIRE_THAT(ideal_norm(s, NormSpec::schatten(2.0)),
                 Catch::Matchers::WithinAbs(std::sqrt(30.0), 1e-12));
    REQUIRE(ideal_norm(s, NormSpec::schatten(1.0)) == 10.0);
    REQUIRE(ideal_norm(s, NormSpec::ky_fan(2)) == 7.0);
    REQUIRE(ideal_norm(s, NormSpec::trace()) == 10.0);
    // ratio with reference (1,1,1,1): sup of running averages * n/n = partial sums / n
    NormSpec flat = NormSpec::ratio({1.0, 1.0, 1.0, 1.0});
    REQUIRE(ideal_norm(s, flat) == 4.0); // sup at n=1
}

TEST_CASE("ideal_norm extends a short ratio reference by its last value") {
    NormSpec r = NormSpec::ratio({2.0, 1.0});
    // denominators: 2, 3, 4, 5
    const std::vector<double> s{4.0, 4.0, 4.0, 4.0};
    REQUIRE_THAT(ideal_norm(s, r), Catch::Matchers::WithinAbs(16.0 / 5.0, 1e-12));
}

TEST_CASE("ideal_norm rejects unsorted input") {
    REQUIRE_THROWS_MATCHES(ideal_norm({1.0, 2.0}, NormSpec::trace()), domain_error,
                           Catch::Matchers::Predicate<domain_error>(
                               [](const domain_error& e) { return e.code() == "UnsortedInput"; }));
}

TEST_CASE("NormSpec constructors validate parameters") {
    REQUIRE_THROWS_AS(NormSpec::schatten(0.5), domain_error);
    REQUIRE_THROWS_AS(NormSpec::ky_fan(0), domain_error);
    REQUIRE_THROWS_AS(NormSpec::ratio({}), domain_error);
    REQUIRE_THROWS_AS(NormSpec::ratio({1.0, -1.0}), domain_error);
    REQUIRE_THROWS_AS(NormSpec::ratio({1.0, 2.0}), domain_error);
}

TEST_CASE("ratio reference classification: harmonic yes, geometric no") {
    NormSpec h = NormSpec::ratio(harmonic_ref(64));
    REQUIRE(h.ref_vanishing);
    REQUIRE(h.ref_divergent_sum);
    REQUIRE(h.bi_normalizing());

    std::vector<double> geo;
    for (std::size_t k = 1; k <= 64; ++k) geo.push_back(std::pow(2.0, -double(k)));
    NormSpec g = NormSpec::ratio(geo);
    REQUIRE(g.ref_vanishing);
    REQUIRE_FALSE(g.ref_divergent_sum);
    REQUIRE_FALSE(g.bi_normalizing());

    NormSpec flat = NormSpec::ratio(std::vector<double>(64, 1.0));
    REQUIRE_FALSE(flat.ref_vanishing);
    REQUIRE(flat.ref_divergent_sum);
}

TEST_CASE("ky_fan_majorizes reports dominance and first violation") {
    MajorizationReport ok = ky_fan_majorizes({2.0, 1.0}, {3.0, 1.0});
    REQUIRE(ok.dominated);
    REQUIRE_FALSE(ok.first_violation.has_value());

    MajorizationReport bad = ky_fan_majorizes({3.0, 3.0}, {4.0, 1.0});
    REQUIRE_FALSE(bad.dominated);
    REQUIRE(bad.first_violation == 2); // 6 > 5 at the second partial sum
    REQUIRE(bad.partial_sums_x == std::vector<double>{3.0, 6.0});
    REQUIRE(bad.partial_sums_y == std::vector<double>{4.0, 5.0});
}

TEST_CASE("symmetric norm axioms hold on random samples") {
    std::vector<NormSpec> specs{NormSpec::operator_norm(), NormSpec::schatten(1.0),
                                NormSpec::schatten(2.0), NormSpec::schatten(3.5),
                                NormSpec::ky_fan(2), NormSpec::trace(),
                                NormSpec::ratio(harmonic_ref(16))};
    for (int t = 0; t < 25; ++t) {
        const std::size_t n = 2 + std::size_t(t % 5);
        Matrix x = random_matrix(n), y = random_matrix(n);
        Matrix u = random_unitary(n), v = random_unitary(n);
        std::vector<double> sx = svd(x).singular_values;
        std::vector<double> sy = svd(y).singular_values;
        std::vector<double> sxy = svd(x + y).singular_values;
        std::vector<double> suxv = svd(u * x * v).singular_values;
        for (const NormSpec& spec : specs) {
            const double nx = ideal_norm(sx, spec);
            // triangle inequality
            REQUIRE(ideal_norm(sxy, spec) <= nx + ideal_norm(sy, spec) + 1e-9);
            // unitary invariance
            REQUIRE_THAT(ideal_norm(suxv, spec), Catch::Matchers::WithinAbs(nx, 1e-8));
            // interleaving: operator norm <= J-norm <= trace norm (r_1 = 1 refs)
            REQUIRE(sx[0] <= nx + 1e-9);
            REQUIRE(nx <= ideal_norm(sx, NormSpec::trace()) + 1e-9);
        }
    }
}

TEST_CASE("rank-one normalization") {
    std::vector<double> e1{1.0, 0.0, 0.0};
    for (const NormSpec& spec :
         {NormSpec::operator_norm(), NormSpec::schatten(2.0), NormSpec::ky_fan(3),
          NormSpec::trace(), NormSpec::ratio(harmonic_ref(8))})
        REQUIRE_THAT(ideal_norm(e1, spec), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("maximal_norm partials are monotone and end at the full norm") {
    Matrix x = random_matrix(6);
    for (const NormSpec& spec : {NormSpec::trace(), NormSpec::ky_fan(3), NormSpec::schatten(1.0)}) {
        auto [value, partials] = maximal_norm(x, spec);
        REQUIRE(partials.size() == 6);
        for (std::size_t i = 1; i < partials.size(); ++i)
            REQUIRE(partials[i] >= partials[i - 1] - 1e-12);
        REQUIRE_THAT(value,
                     Catch::Matchers::WithinAbs(ideal_norm(svd(x).singular_values, spec), 1e-9));
    }
}
