#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "csrank/algebra.hpp"
#include "csrank/element.hpp"
#include "csrank/error.hpp"
#include "csrank/lg.hpp"
#include "csrank/random_elements.hpp"
#include "csrank/rng.hpp"
#include "csrank/tuple.hpp"
#include "csrank/tuple_calculus.hpp"
#include "test_util.hpp"

using namespace csrank;

namespace {

std::shared_ptr<const SimplicialMesh> interval_mesh(std::size_t res) {
    return std::make_shared<SimplicialMesh>(SimplicialMesh::interval(res));
}

std::shared_ptr<const SimplicialMesh> disk_mesh(std::size_t res) {
    return std::make_shared<SimplicialMesh>(SimplicialMesh::disk(res));
}

}  // namespace

TEST_CASE("norm of basis-like tuples") {
    const Algebra c = Algebra::full_matrix(1);
    std::vector<ComplexMatrix> one_fiber{ComplexMatrix::identity(1)};
    const Element e1 = Element::from_fibers(c, one_fiber, 0.0);
    const Element e0 = Element::zero(c);
    const Tuple t({e1, e0});
    CHECK(tuple_norm(t) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(tuple_norm(Tuple::zero(c, 3)) == 0.0);
}

TEST_CASE("tuple norm matches the stacked singular value oracle") {
    const Algebra m3 = Algebra::full_matrix(3);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Tuple a = random_element(m3, 2, seed, 1.0);
        ComplexMatrix stacked = a.stack_fiber(0);
        REQUIRE(stacked.rows() == 6);
        REQUIRE(stacked.cols() == 3);
        const double oracle = testutil::power_sigma_max(stacked);
        CHECK(tuple_norm(a) == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("tuple norm is a norm") {
    const Algebra m4 = Algebra::full_matrix(4);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Tuple a = random_element(m4, 3, 3 * seed, 1.0);
        const Tuple b = random_element(m4, 3, 3 * seed + 1, 1.0);
        const double lhs = tuple_norm(a + b);
        CHECK(lhs <= tuple_norm(a) + tuple_norm(b) + 1e-10);
        const Complex c(0.3, -1.2);
        CHECK(tuple_norm(c * a) == doctest::Approx(std::abs(c) * tuple_norm(a)).epsilon(1e-10));
    }
}

TEST_CASE("membership certificate on scalars") {
    const Algebra c = Algebra::full_matrix(1);
    const Tuple unit({Element::one(c)});
    const LgCertificate yes = is_lg(unit, 1e-8);
    CHECK(yes.member);
    CHECK(yes.sigma_min == doctest::Approx(1.0).epsilon(1e-12));

    const Tuple zero({Element::zero(c)});
    CHECK(!is_lg(zero, 1e-8).member);
    CHECK_THROWS_AS(certify_in_lg(zero, 1e-8), CertificateError);
    CHECK_THROWS_AS(is_lg(zero, 0.0), PreconditionError);
}

TEST_CASE("coordinate field on the disk is not left invertible") {
    const Algebra disk = Algebra::sampled_field(disk_mesh(32), 1);
    const Tuple z({Element::coordinate(disk)});
    const LgCertificate cert = is_lg(z, 1e-8);
    CHECK(!cert.member);
    CHECK(cert.sigma_min == doctest::Approx(0.0));  // vanishes at the center vertex
}

TEST_CASE("membership is monotone in the margin") {
    const Algebra m2 = Algebra::full_matrix(2);
    const Algebra interval = Algebra::sampled_field(interval_mesh(64), 1);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        for (const Algebra& algebra : {m2, interval}) {
            const Tuple a = random_element(algebra, 1, seed, 1.0);
            double margin = 4.0;
            bool prev = is_lg(a, margin).member;
            for (int step = 0; step < 12; ++step) {
                margin *= 0.25;
                const bool cur = is_lg(a, margin).member;
                if (prev) CHECK(cur);  // shrinking the margin never loses members
                prev = cur;
            }
        }
    }
}

TEST_CASE("field certificates require clearance over the edge slack") {
    const Algebra interval = Algebra::sampled_field(interval_mesh(16), 1);
    // t - 0.5 + i*eps has vertex sigma_min eps^2; budget 1, max edge 1/16.
    const ComplexMatrix half = ComplexMatrix::diagonal(std::vector<Complex>{Complex(-0.5, 0.0)});
    const ComplexMatrix one = ComplexMatrix::identity(1);
    const ComplexMatrix zero(1, 1);

    auto shifted = [&](double eps) {
        ComplexMatrix c0(1, 1);
        c0(0, 0) = Complex(-0.5, eps);
        return Tuple({Element::from_affine(interval, c0, one, zero)});
    };

    const double slack = 1.0 / 16.0;
    const LgCertificate below = is_lg(shifted(0.8 * slack), 1e-10);
    CHECK(!below.member);
    CHECK(below.margin == doctest::Approx(slack * slack).epsilon(1e-9));

    const LgCertificate above = is_lg(shifted(1.5 * slack), 1e-10);
    CHECK(above.member);
    CHECK(above.sigma_min > above.margin);
}

TEST_CASE("vertexwise certificate ignores the edge slack") {
    const Algebra interval = Algebra::sampled_field(interval_mesh(16), 1);
    const ComplexMatrix one = ComplexMatrix::identity(1);
    const ComplexMatrix zero(1, 1);
    ComplexMatrix c0(1, 1);
    c0(0, 0) = Complex(-0.5, 0.01);  // below the 1/16 slack, nonzero at vertices
    const Tuple a({Element::from_affine(interval, c0, one, zero)});
    CHECK(!is_lg(a, 1e-10).member);
    CHECK(is_lg_fiberwise(a, 1e-10).member);
}

TEST_CASE("random tuples are deterministic per seed") {
    const Algebra m3 = Algebra::full_matrix(3);
    const Tuple a = random_element(m3, 2, 99, 1.0);
    const Tuple b = random_element(m3, 2, 99, 1.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& fa = a.entry(i).fiber(0);
        const auto& fb = b.entry(i).fiber(0);
        for (std::size_t r = 0; r < fa.rows(); ++r) {
            for (std::size_t col = 0; col < fa.cols(); ++col) {
                CHECK(fa(r, col) == fb(r, col));
            }
        }
    }
    CHECK(tuple_norm(random_element(m3, 2, 100, 0.0)) == 0.0);
}

TEST_CASE("random field elements respect their declared budget") {
    const Algebra disk = Algebra::sampled_field(disk_mesh(32), 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tuple a = random_element(disk, 2, seed, 0.7);
        const auto& mesh = *disk.mesh();
        for (const auto& entry : a.entries()) {
            const double budget = entry.lipschitz();
            for (std::size_t j = 0; j < mesh.edge_count(); ++j) {
                const auto& edge = mesh.edges()[j];
                ComplexMatrix diff = entry.fiber(edge[0]);
                diff -= entry.fiber(edge[1]);
                CHECK(diff.frobenius_norm() <=
                      budget * mesh.edge_lengths()[j] * (1.0 + 1e-12) + 1e-15);
            }
        }
    }
}

TEST_CASE("hundred-seed sweep in M_4 stays left invertible") {
    const Algebra m4 = Algebra::full_matrix(4);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Tuple a = random_element(m4, 1, seed, 1.0);
        CHECK(is_lg(a, 1e-8).member);
    }
}

TEST_CASE("gram and abs agree with direct fiber computations") {
    const Algebra m3 = Algebra::full_matrix(3);
    const Tuple a = random_element(m3, 2, 7, 1.0);
    const Element gram = tuple_gram(a);
    ComplexMatrix direct = a.gram_fiber(0);
    ComplexMatrix diff = gram.fiber(0);
    diff -= direct;
    CHECK(diff.max_abs() < 1e-12);

    const Element abs = tuple_abs(a);
    ComplexMatrix sq = abs.fiber(0) * abs.fiber(0);
    sq -= direct;
    CHECK(sq.max_abs() < 1e-9);
}

TEST_CASE("tuple polar reconstructs and is isometric on certified tuples") {
    const Algebra m4 = Algebra::full_matrix(4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Tuple a = random_lg_member(m4, 2, seed, 1.0, 1e-8);
        const TuplePolar parts = tuple_polar(a);
        const Element gram_v = inner(parts.isometry, parts.isometry);
        ComplexMatrix defect = gram_v.fiber(0);
        defect -= ComplexMatrix::identity(4);
        CHECK(defect.max_abs() < 1e-8);

        const Tuple rebuilt = mul_element(parts.isometry, parts.modulus);
        CHECK(tuple_dist(rebuilt, a) < 1e-8 * (1.0 + tuple_norm(a)));
    }
}

TEST_CASE("field polar carries a certified budget when floored") {
    const Algebra interval = Algebra::sampled_field(interval_mesh(32), 1);
    const ComplexMatrix one = ComplexMatrix::identity(1);
    const ComplexMatrix zero(1, 1);
    ComplexMatrix c0(1, 1);
    c0(0, 0) = Complex(-0.5, 0.4);  // |a| >= 0.4 everywhere, slope 1
    const Tuple a({Element::from_affine(interval, c0, one, zero)});
    const TuplePolar parts = tuple_polar(a);
    // Certified bound L/(sigma_floor) with sigma_floor ~ 0.4 - 1/64.
    CHECK(parts.isometry.entry(0).lipschitz() <= 1.0 / (0.4 - 1.0 / 64.0) + 1e-9);
    // Observed slope of the direction field can't beat the certified bound.
    for (std::size_t v = 0; v < interval.fiber_count(); ++v) {
        CHECK(std::abs(parts.isometry.entry(0).fiber(v)(0, 0)) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("right multiplier with identity profile is the identity") {
    const Algebra m2 = Algebra::full_matrix(2);
    const Tuple a = random_element(m2, 2, 5, 1.0);
    const Tuple same = tuple_right_multiplier(a, ScalarProfile::identity());
    CHECK(tuple_dist(a, same) == 0.0);
}

TEST_CASE("right multiplier matches scalar formula on scalar fields") {
    const Algebra disk = Algebra::sampled_field(disk_mesh(16), 1);
    const Tuple z({Element::coordinate(disk)});
    const double gamma = 0.5;
    const Tuple clipped = tuple_right_multiplier(z, ScalarProfile::ramp_clip(gamma));
    const auto& mesh = *disk.mesh();
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const Complex w = z.entry(0).fiber(v)(0, 0);
        const double t = std::abs(w);
        const Complex expected = (t == 0.0) ? Complex(0.0, 0.0)
                                            : w * (std::min(t / gamma, 1.0) / t);
        CHECK(std::abs(clipped.entry(0).fiber(v)(0, 0) - expected) < 1e-12);
    }
    // Sharp plane-map constant: scaled disk projection contracts by 1/gamma.
    CHECK(clipped.entry(0).lipschitz() == doctest::Approx(1.0 / gamma).epsilon(1e-12));
}

TEST_CASE("element inverse tracks the spectral floor") {
    const Algebra interval = Algebra::sampled_field(interval_mesh(32), 1);
    const Element two_plus_t =
        Element::constant(interval, Complex(2.0, 0.0)) + Element::coordinate(interval);
    const Element inv = element_inverse(two_plus_t);
    for (std::size_t v = 0; v < interval.fiber_count(); ++v) {
        const Complex x = two_plus_t.fiber(v)(0, 0);
        CHECK(std::abs(inv.fiber(v)(0, 0) - 1.0 / x) < 1e-12);
    }
    // Floor is 2 - 1/64; budget bounded by L / floor^2.
    CHECK(inv.lipschitz() <= 1.0 / ((2.0 - 1.0 / 64.0) * (2.0 - 1.0 / 64.0)) + 1e-9);

    const Element vanishing = Element::coordinate(interval);
    CHECK_THROWS_AS(element_inverse(vanishing), ContractViolation);
}

TEST_CASE("algebra equality is structural") {
    CHECK(Algebra::full_matrix(3) == Algebra::full_matrix(3));
    CHECK(Algebra::full_matrix(3) != Algebra::full_matrix(2));
    CHECK(Algebra::direct_sum({2, 3}) != Algebra::direct_sum({3, 2}));
    const auto mesh = interval_mesh(16);
    CHECK(Algebra::sampled_field(mesh, 1) == Algebra::sampled_field(mesh, 1));
    CHECK(Algebra::sampled_field(mesh, 1) ==
          Algebra::sampled_field(interval_mesh(16), 1));
    CHECK(Algebra::sampled_field(mesh, 1) != Algebra::sampled_field(interval_mesh(17), 1));
}
