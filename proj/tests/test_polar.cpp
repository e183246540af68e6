#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csrank/functional_calculus.hpp"
#include "csrank/polar.hpp"
#include "csrank/error.hpp"
#include "test_util.hpp"

using namespace csrank;
using testutil::random_matrix;
using testutil::unitarity_defect;

TEST_CASE("1x1 polar of -2") {
    ComplexMatrix a(1, 1);
    a(0, 0) = -2.0;
    const auto p = polar(a);
    CHECK(p.partial_isometry(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(p.modulus(0, 0).real() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("zero matrix: both parts zero") {
    const ComplexMatrix a(3, 2);
    const auto p = polar(a);
    CHECK(op_norm(p.partial_isometry) == 0.0);
    CHECK(op_norm(p.modulus) == 0.0);
}

TEST_CASE("full rank 6x2: isometry and reconstruction") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        Rng r = rng.fork(trial);
        const ComplexMatrix a = random_matrix(r, 6, 2);
        const auto p = polar(a);
        CHECK(unitarity_defect(p.partial_isometry) <= 1e-8);
        CHECK(op_norm(a - p.partial_isometry * p.modulus) <= 1e-8 * std::max(1e-300, op_norm(a)));
    }
}

TEST_CASE("reconstruction holds through rank deficiency") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        Rng r = rng.fork(trial);
        // rank-1 tall matrix: outer product
        const ComplexMatrix u = random_matrix(r, 5, 1);
        const ComplexMatrix w = random_matrix(r, 1, 3);
        const ComplexMatrix a = u * w;
        const auto p = polar(a);
        const double nrm = std::max(1e-300, op_norm(a));
        CHECK(op_norm(a - p.partial_isometry * p.modulus) <= 1e-8 * nrm);
        // v* v is a projection
        const ComplexMatrix g = p.partial_isometry.adjoint() * p.partial_isometry;
        CHECK(op_norm(g * g - g) <= 1e-8);
    }
}

TEST_CASE("nonpositive tau is rejected") {
    const ComplexMatrix a = ComplexMatrix::identity(2);
    CHECK_THROWS_AS(polar(a, 0.0), ContractViolation);
    CHECK_THROWS_AS(polar(a, -1.0), ContractViolation);
}

TEST_CASE("right multiplier agrees with the explicit polar route") {
    // v * psi(|a|) computed through polar() must match a * q(|a|)
    Rng rng(19);
    for (int trial = 0; trial < 25; ++trial) {
        Rng r = rng.fork(trial);
        const ComplexMatrix a = random_matrix(r, 6, 3);
        const ScalarProfile psi = ScalarProfile::vanishing_cap_inverse(0.8);
        const auto p = polar(a);
        const ComplexMatrix via_polar = p.partial_isometry * func_calc(p.modulus, psi);
        const ComplexMatrix via_ratio = right_multiplier(a, psi);
        CHECK(op_norm(via_polar - via_ratio) <= 1e-8 * std::max(1.0, op_norm(a)));
    }
}

TEST_CASE("modulus agrees with matrix_abs") {
    Rng rng(23);
    const ComplexMatrix a = random_matrix(rng, 4, 4);
    const auto p = polar(a);
    CHECK(op_norm(p.modulus - matrix_abs(a)) <= 1e-9 * std::max(1.0, op_norm(a)));
}
