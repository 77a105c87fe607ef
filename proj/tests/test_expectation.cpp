#include <catch_amalgamated.hpp>

#include "orbitkit/orbitkit.hpp"
#include "test_rng.hpp"

using namespace orbitkit;
using testutil::random_family;
using testutil::random_matrix;

TEST_CASE("conditional_expectation keeps exactly the in-block entries") {
    ProjectionFamily fam{4, {{0, 1}, {2}, {3}}};
    Matrix x = random_matrix(4);
    Matrix e = conditional_expectation(x, fam);
    REQUIRE(e(0, 1) == x(0, 1));
    REQUIRE(e(1, 0) == x(1, 0));
    REQUIRE(e(2, 2) == x(2, 2));
    REQUIRE(e(0, 2) == cplx{});
    REQUIRE(e(3, 1) == cplx{});
}

TEST_CASE("conditional_expectation is an idempotent trace-preserving contraction") {
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + std::size_t(t % 7);
        ProjectionFamily fam = random_family(n, 4);
        Matrix x = random_matrix(n);
        Matrix e = conditional_expectation(x, fam);
        REQUIRE((conditional_expectation(e, fam) - e).frobenius_norm() <= 1e-14);
        REQUIRE(std::abs(e.trace() - x.trace()) <= 1e-12);
        REQUIRE(e.frobenius_norm() <= x.frobenius_norm() + 1e-12);
        // oracle for the norm-one property: sum of p_k x p_k directly
        Matrix direct(n);
        for (const auto& block : fam.blocks) {
            Matrix p(n);
            for (std::size_t i : block) p(i, i) = 1.0;
            direct = direct + p * x * p;
        }
        REQUIRE((direct - e).frobenius_norm() <= 1e-13);
    }
}

TEST_CASE("expectation output is Ky Fan dominated by the input") {
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2 + std::size_t(t % 6);
        ProjectionFamily fam = random_family(n, 3);
        Matrix x = random_matrix(n);
        Matrix e = conditional_expectation(x, fam);
        MajorizationReport rep =
            ky_fan_majorizes(svd(e).singular_values, svd(x).singular_values);
        REQUIRE(rep.dominated);
    }
}

TEST_CASE("malformed projection families are rejected") {
    Matrix x = random_matrix(3);
    ProjectionFamily overlap{3, {{0, 1}, {1, 2}}};
    REQUIRE_THROWS_MATCHES(conditional_expectation(x, overlap), domain_error,
                           Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                               return e.code() == "BadProjectionFamily";
                           }));
    ProjectionFamily gap{3, {{0}, {2}}};
    REQUIRE_THROWS_AS(conditional_expectation(x, gap), domain_error);
    ProjectionFamily wrong_dim{2, {{0}, {1}}};
    REQUIRE_THROWS_AS(conditional_expectation(x, wrong_dim), domain_error);
}

TEST_CASE("commutant_check agrees with the commutator on both verdicts") {
    ProjectionFamily fam{4, {{0, 1}, {2, 3}}};
    Matrix a(4);
    a(0, 0) = a(1, 1) = 1.0;
    a(2, 2) = a(3, 3) = 2.0;

    Matrix block(4); // block-diagonal x commutes
    block(0, 1) = cplx{1.0, 2.0};
    block(1, 0) = 3.0;
    block(2, 3) = -1.0;
    REQUIRE(commutant_check(block, a, fam));

    Matrix cross(4); // off-block entry does not
    cross(0, 2) = 1.0;
    REQUIRE_FALSE(commutant_check(cross, a, fam));
}

TEST_CASE("commutant_check rejects a family inconsistent with a") {
    ProjectionFamily fam{3, {{0, 1}, {2}}};
    Matrix a(3);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0; // not constant on block {0,1}
    a(2, 2) = 3.0;
    Matrix x = random_matrix(3);
    REQUIRE_THROWS_MATCHES(commutant_check(x, a, fam), domain_error,
                           Catch::Matchers::Predicate<domain_error>([](const domain_error& e) {
                               return e.code() == "InconsistentFamily";
                           }));
}
