#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "csrank/algebra.hpp"
#include "csrank/distance.hpp"
#include "csrank/element.hpp"
#include "csrank/error.hpp"
#include "csrank/functional_calculus.hpp"
#include "csrank/lg.hpp"
#include "csrank/polar.hpp"
#include "csrank/random_elements.hpp"
#include "csrank/tuple.hpp"
#include "csrank/tuple_calculus.hpp"
#include "test_util.hpp"

using namespace csrank;

namespace {

Tuple scalar_tuple(double x) {
    const Algebra c = Algebra::full_matrix(1);
    return Tuple({Element::constant(c, Complex(x, 0.0))});
}

std::shared_ptr<const SimplicialMesh> disk_mesh(std::size_t res) {
    return std::make_shared<SimplicialMesh>(SimplicialMesh::disk(res));
}

std::shared_ptr<const SimplicialMesh> interval_mesh(std::size_t res) {
    return std::make_shared<SimplicialMesh>(SimplicialMesh::interval(res));
}

// Singular values of the stacked fiber, ascending.
std::vector<double> stack_sigmas(const Tuple& a, std::size_t fiber) {
    const ComplexMatrix stack = a.stack_fiber(fiber);
    const EigenDecomposition eig = herm_eig((stack.adjoint() * stack).hermitian_part());
    std::vector<double> out;
    for (double l : eig.eigenvalues) out.push_back(std::sqrt(std::max(l, 0.0)));
    return out;
}

}  // namespace

TEST_CASE("scalar shift lands at the expected point") {
    const Tuple a = scalar_tuple(0.5);
    const Tuple b = scalar_tuple(1.0);
    const Tuple shifted = shift_into_lg(a, b, 0.6);
    CHECK(std::abs(shifted.entry(0).fiber(0)(0, 0) - Complex(1.1, 0.0)) < 1e-12);
    CHECK(is_lg(shifted, 1e-8).member);
}

TEST_CASE("random shifts stay quantitatively invertible") {
    const Algebra m4 = Algebra::full_matrix(4);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Tuple a = random_element(m4, 2, 2 * seed, 1.0);
        const Tuple b = random_lg_member(m4, 2, 2 * seed + 1, 1.0, 1e-8);
        const double d = tuple_dist(a, b);
        const Tuple shifted = shift_into_lg(a, b, d + 0.1);
        const LgCertificate cert = is_lg(shifted, 1e-8);
        CHECK(cert.member);
        // Smallest singular value clears beta - ||a - b|| = 0.1.
        CHECK(cert.sigma_min >= 0.0099);
    }
}

TEST_CASE("shift rejects the boundary and uncertified directions") {
    const Tuple a = scalar_tuple(0.5);
    const Tuple b = scalar_tuple(1.0);
    CHECK_THROWS_AS(shift_into_lg(a, b, 0.5), PreconditionError);
    CHECK_THROWS_AS(shift_into_lg(a, scalar_tuple(0.0), 2.0), CertificateError);
}

TEST_CASE("degenerate scalar section") {
    const Tuple a = scalar_tuple(0.0);
    const Tuple b = scalar_tuple(0.25);
    const Tuple s = section_at_level(a, 0.5, b);
    // beta = 0.375, phi(0) = 2: the section is 0.75 and trivially invertible.
    CHECK(std::abs(s.entry(0).fiber(0)(0, 0) - Complex(0.75, 0.0)) < 1e-10);
    CHECK(is_lg(s, 1e-8).member);
}

TEST_CASE("scalar section above the level reproduces the phase") {
    const Tuple a = scalar_tuple(0.8);
    const Tuple s = section_at_level(a, 0.5, a);
    CHECK(std::abs(s.entry(0).fiber(0)(0, 0) - Complex(1.0, 0.0)) < 1e-10);
}

TEST_CASE("matrix sections agree with the polar oracle above the level") {
    const Algebra m5 = Algebra::full_matrix(5);
    int exercised = 0;
    for (std::uint64_t seed = 0; seed < 60 && exercised < 30; ++seed) {
        const Tuple a = random_element(m5, 2, seed, 1.0);
        if (!is_lg(a, 1e-10).member) continue;
        const std::vector<double> sig = stack_sigmas(a, 0);
        // A level needs clearance on both sides of the singular spectrum.
        double gamma = -1.0, best_gap = 0.05;
        for (std::size_t i = 0; i + 1 < sig.size(); ++i) {
            const double gap = sig[i + 1] - sig[i];
            if (gap > best_gap) {
                best_gap = gap;
                gamma = 0.5 * (sig[i] + sig[i + 1]);
            }
        }
        if (gamma <= 0.0) continue;
        ++exercised;

        const Tuple s = section_at_level(a, gamma, a);
        CHECK(is_lg(s, 1e-10).member);

        // Independent residual: polar direction and spectral projection
        // computed by the dense kernels, not by the section code.
        const ComplexMatrix stack = a.stack_fiber(0);
        const ComplexMatrix absstar =
            func_calc((stack * stack.adjoint()).hermitian_part(), ScalarProfile::sqrt());
        ComplexMatrix high = ComplexMatrix::identity(10) - spectral_proj_leq(absstar, gamma);
        const ComplexMatrix v = polar(stack).partial_isometry;
        ComplexMatrix diff = high * (v - s.stack_fiber(0));
        CHECK(op_norm(diff) <= 1e-7);
    }
    CHECK(exercised >= 30);
}

TEST_CASE("section on the disk matches the phase away from the level") {
    const Algebra disk = Algebra::sampled_field(disk_mesh(64), 1);
    const Tuple a({Element::coordinate(disk)});

    // Vertexwise member close to a: keep z where its modulus clears 0.3,
    // push the rest out radially so every sample has modulus at least 0.3.
    std::vector<ComplexMatrix> fill;
    const auto& mesh = *disk.mesh();
    for (std::size_t p = 0; p < mesh.vertex_count(); ++p) {
        const Complex z = a.entry(0).fiber(p)(0, 0);
        ComplexMatrix f(1, 1);
        if (std::abs(z) >= 0.3)
            f(0, 0) = z;
        else if (std::abs(z) > 0.0)
            f(0, 0) = 0.3 * z / std::abs(z);
        else
            f(0, 0) = Complex(0.3, 0.0);
        fill.push_back(f);
    }
    const Tuple b({Element::from_vertex_values(disk, fill)});
    REQUIRE(tuple_dist(a, b) < 0.5);

    const Tuple s = section_at_level(a, 0.5, b);
    CHECK(is_lg_fiberwise(s, 1e-12).member);
    for (std::size_t p = 0; p < mesh.vertex_count(); ++p) {
        const Complex z = a.entry(0).fiber(p)(0, 0);
        if (std::abs(z) <= 0.5 + 2e-6) continue;  // below or at the level: no claim
        const Complex phase = z / std::abs(z);
        CHECK(std::abs(s.entry(0).fiber(p)(0, 0) - phase) <= 1e-7);
    }
}

TEST_CASE("section preconditions") {
    const Tuple a = scalar_tuple(0.0);
    CHECK_THROWS_AS(section_at_level(a, 0.5, scalar_tuple(0.6)), PreconditionError);
    CHECK_THROWS_AS(section_at_level(a, 0.0, scalar_tuple(0.25)), PreconditionError);
    // Level right on a singular value: no spectral gap.
    const Tuple c = scalar_tuple(0.5);
    CHECK_THROWS_AS(section_at_level(c, 0.5, c), GapError);
}

TEST_CASE("shifted-modulus candidates") {
    const auto [c, bound] = dist_upper_candidate(scalar_tuple(2.0), 0.5);
    CHECK(std::abs(c.entry(0).fiber(0)(0, 0) - Complex(1.5, 0.0)) < 1e-10);
    CHECK(bound == doctest::Approx(0.5).epsilon(1e-10));

    const auto [id, zero] = dist_upper_candidate(scalar_tuple(2.0), 0.0);
    CHECK(std::abs(id.entry(0).fiber(0)(0, 0) - Complex(2.0, 0.0)) < 1e-12);
    CHECK(zero == 0.0);

    CHECK_THROWS_AS(dist_upper_candidate(scalar_tuple(1.0), -0.1), PreconditionError);

    const Algebra m4 = Algebra::full_matrix(4);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Tuple a = random_element(m4, 3, seed, 1.0);
        for (int g = 1; g <= 9; ++g) {
            const double lambda = 0.1 * g * tuple_norm(a);
            CHECK(dist_upper_candidate(a, lambda).second <= lambda + 1e-8);
        }
    }
}

TEST_CASE("matrix distance collapses to zero") {
    const Algebra m3 = Algebra::full_matrix(3);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Tuple a = random_element(m3, 1, seed, 1.0);
        const DistanceCertificate cert = dist_to_lg(a);
        CHECK(cert.lower == 0.0);
        CHECK(cert.upper <= 1e-6);
        CHECK(cert.upper <= tuple_norm(a) + 1e-9);
        REQUIRE(cert.upper_witness.has_value());
        CHECK(is_lg(*cert.upper_witness, 1e-30).member);
        CHECK(std::abs(tuple_dist_upper(a, *cert.upper_witness) - cert.upper) <= 1e-6);
    }
}

TEST_CASE("disk coordinate sits at certified distance one") {
    const Algebra disk = Algebra::sampled_field(disk_mesh(64), 1);
    const Tuple a({Element::coordinate(disk)});
    const DistanceCertificate cert = dist_to_lg(a);
    CHECK(cert.lower_method == LowerMethod::kWinding);
    CHECK(cert.lower >= 0.9);
    CHECK(cert.upper <= 1.0 + 1e-6);
    CHECK(cert.lower <= cert.upper);
    REQUIRE(cert.upper_witness.has_value());
    CHECK(is_lg(*cert.upper_witness, 1e-31).member);
}

TEST_CASE("winding bound tracks the boundary geometry") {
    for (std::size_t res : {32u, 64u, 128u}) {
        const Algebra disk = Algebra::sampled_field(disk_mesh(res), 1);
        const Tuple a({Element::coordinate(disk)});
        const WindingBound wb = winding_lower_bound(a);
        REQUIRE(wb.certified);
        CHECK(wb.winding == 1);
        // Boundary samples sit on the unit circle; the floor loses only the
        // Lipschitz drift across one boundary edge.
        const double chord = 2.0 * std::sin(M_PI / double(res));
        CHECK(wb.lower == doctest::Approx(1.0 - 0.5 * chord).epsilon(1e-9));
        CHECK(wb.lower >= 1.0 - 10.0 / double(res));
    }
}

TEST_CASE("winding bound declines out-of-scope inputs") {
    const Algebra m2 = Algebra::full_matrix(2);
    CHECK(!winding_lower_bound(random_element(m2, 1, 3, 1.0)).certified);

    const Algebra interval = Algebra::sampled_field(interval_mesh(16), 1);
    CHECK(!winding_lower_bound(Tuple({Element::coordinate(interval)})).certified);

    const Algebra disk = Algebra::sampled_field(disk_mesh(32), 1);
    CHECK(!winding_lower_bound(Tuple({Element::one(disk)})).certified);  // winding 0
    CHECK(!winding_lower_bound(random_element(disk, 2, 3, 1.0)).certified);  // pairs
}

TEST_CASE("interval crossing is cheap to repair") {
    const Algebra interval = Algebra::sampled_field(interval_mesh(64), 1);
    const ComplexMatrix half = [] {
        ComplexMatrix m(1, 1);
        m(0, 0) = Complex(-0.5, 0.0);
        return m;
    }();
    const Tuple a({Element::from_affine(interval, half, ComplexMatrix::identity(1),
                                        ComplexMatrix(1, 1))});
    const DistanceCertificate cert = dist_to_lg(a);
    CHECK(cert.lower == 0.0);
    CHECK(cert.upper <= 0.05);
    REQUIRE(cert.upper_witness.has_value());
    CHECK(is_lg(*cert.upper_witness, 1e-30).member);
}

TEST_CASE("distance bounds scale with the tuple") {
    const double t = 3.7;
    const Algebra m4 = Algebra::full_matrix(4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tuple a = random_element(m4, 2, seed, 1.0);
        const DistanceCertificate one = dist_to_lg(a);
        const DistanceCertificate scaled = dist_to_lg(Complex(t, 0.0) * a);
        CHECK(scaled.upper == doctest::Approx(t * one.upper).epsilon(1e-8));
        CHECK(scaled.lower == doctest::Approx(t * one.lower).epsilon(1e-8));
    }
    const Algebra disk = Algebra::sampled_field(disk_mesh(32), 1);
    const Tuple z({Element::coordinate(disk)});
    const DistanceCertificate one = dist_to_lg(z);
    const DistanceCertificate scaled = dist_to_lg(Complex(t, 0.0) * z);
    CHECK(scaled.lower == doctest::Approx(t * one.lower).epsilon(1e-8));
    CHECK(scaled.upper == doctest::Approx(t * one.upper).epsilon(1e-8));
}

TEST_CASE("budget exhaustion degrades to the norm bound") {
    const Algebra m3 = Algebra::full_matrix(3);
    const Tuple a = random_element(m3, 1, 11, 1.0);
    const DistanceCertificate cert = dist_to_lg(a, 0);
    CHECK(cert.lower == 0.0);
    CHECK(cert.upper == doctest::Approx(tuple_norm(a)));
    CHECK(!cert.upper_witness.has_value());
}

TEST_CASE("norm-rescaled witness construction") {
    const Algebra disk = Algebra::sampled_field(disk_mesh(64), 1);
    const Tuple z({Element::coordinate(disk)});

    DistanceCertificate exact;
    exact.lower = 1.0;
    exact.upper = 1.0;
    const Tuple fixed = max_distance_witness(z, exact);
    CHECK(tuple_dist(fixed, z) < 1e-10);  // the rescaling fixes [0, 1]

    DistanceCertificate two;
    two.lower = 2.0;
    two.upper = 2.0;
    const Tuple halved = max_distance_witness(Complex(2.0, 0.0) * z, two);
    CHECK(tuple_dist(halved, z) < 1e-10);

    DistanceCertificate flat;
    CHECK_THROWS_AS(max_distance_witness(z, flat), PreconditionError);
}

TEST_CASE("witness from the computed certificate re-certifies") {
    const Algebra disk = Algebra::sampled_field(disk_mesh(64), 1);
    const Tuple z({Element::coordinate(disk)});
    const DistanceCertificate cert = dist_to_lg(z);
    const Tuple b = max_distance_witness(z, cert);
    const double norm_b = tuple_norm(b);
    CHECK(norm_b >= 0.99);
    CHECK(norm_b <= 1.0 + 1e-9);
    const DistanceCertificate again = dist_to_lg(b);
    CHECK(again.lower_method == LowerMethod::kWinding);
    CHECK(again.lower >= 0.9);
}

TEST_CASE("section success caps the distance upper bound") {
    const Algebra m5 = Algebra::full_matrix(5);
    int exercised = 0;
    for (std::uint64_t seed = 0; seed < 40 && exercised < 20; ++seed) {
        const Tuple a = random_element(m5, 2, seed, 1.0);
        if (!is_lg(a, 1e-10).member) continue;
        const std::vector<double> sig = stack_sigmas(a, 0);
        double gamma = -1.0;
        for (std::size_t i = 0; i + 1 < sig.size(); ++i)
            if (sig[i + 1] - sig[i] > 0.05) gamma = 0.5 * (sig[i] + sig[i + 1]);
        if (gamma <= 0.0) continue;
        ++exercised;
        (void)section_at_level(a, gamma, a);
        CHECK(dist_to_lg(a).upper <= gamma + 1e-6);
    }
    CHECK(exercised >= 20);
}
