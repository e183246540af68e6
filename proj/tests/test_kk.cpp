#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "csrank/complex_matrix.hpp"
#include "csrank/eig.hpp"
#include "csrank/error.hpp"
#include "csrank/experiment.hpp"
#include "csrank/formula.hpp"
#include "csrank/kk.hpp"
#include "csrank/subalgebra.hpp"

using namespace csrank;

TEST_CASE("a subalgebra against itself is at distance exactly zero") {
    const Subalgebra m2 = Subalgebra::full_matrix(2);
    const KkCertificate cert = kk_distance(m2, m2);
    CHECK(cert.lower == 0.0);
    CHECK(cert.upper == 0.0);

    const Subalgebra mixed = Subalgebra::block_diagonal(3, {2, 1});
    const KkCertificate cert2 = kk_distance(mixed, mixed, 50);
    CHECK(cert2.lower == 0.0);
    CHECK(cert2.upper == 0.0);
}

TEST_CASE("the diagonal sits at certified distance about 1 from all of M_2") {
    const Subalgebra diag = Subalgebra::diagonal(2);
    const Subalgebra full = Subalgebra::full_matrix(2);
    const KkCertificate cert = kk_distance(diag, full, 2000);
    CHECK(cert.lower >= 0.99);
    CHECK(cert.upper <= 1.0 + 1e-12);
    CHECK(cert.lower <= cert.upper);

    // The reported pair reproduces a primal value at least the bound.
    CHECK(op_norm(cert.witness_x) <= 1.0 + 1e-9);
    CHECK(op_norm(cert.witness_x - cert.witness_y) >= cert.lower - 1e-9);
}

TEST_CASE("bounds are symmetric in the two arguments") {
    const Subalgebra diag = Subalgebra::diagonal(2);
    const Subalgebra full = Subalgebra::full_matrix(2);
    const KkCertificate ab = kk_distance(diag, full, 600);
    const KkCertificate ba = kk_distance(full, diag, 600);
    CHECK(std::abs(ab.lower - ba.lower) <= 1e-8);
    CHECK(std::abs(ab.upper - ba.upper) <= 1e-8);

    const Subalgebra moved = perturb_algebra(diag, 0.3, 11);
    const KkCertificate pq = kk_distance(diag, moved, 600);
    const KkCertificate qp = kk_distance(moved, diag, 600);
    CHECK(std::abs(pq.lower - qp.lower) <= 1e-8);
    CHECK(std::abs(pq.upper - qp.upper) <= 1e-8);
}

TEST_CASE("certified lower bounds never decrease with budget") {
    const Subalgebra diag = Subalgebra::diagonal(2);
    const Subalgebra full = Subalgebra::full_matrix(2);
    double previous = -1.0;
    for (std::size_t budget : {10u, 60u, 400u, 2000u, 10000u}) {
        const KkCertificate cert = kk_distance(diag, full, budget);
        CHECK(cert.lower >= previous);
        previous = cert.lower;
    }
    CHECK(previous >= 0.99);
}

TEST_CASE("conjugation perturbations carry a tight upper bound") {
    const Subalgebra base = Subalgebra::block_diagonal(3, {2, 1});
    for (double eps : {0.01, 0.05}) {
        const Subalgebra moved = perturb_algebra(base, eps, 7);
        const KkCertificate cert = kk_distance(base, moved, 400);
        CHECK(cert.upper <= 2.0 * eps + 1e-6);
        CHECK(cert.lower <= cert.upper);
        CHECK(cert.lower >= 0.0);
    }
    for (double eps : {0.05, 0.1, 0.2, 0.35, 0.5}) {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            const Subalgebra moved = perturb_algebra(base, eps, seed);
            const KkCertificate cert = kk_distance(base, moved, 200);
            CHECK(cert.upper <= 2.0 * eps * (1.0 + 1e-3));
        }
    }
}

TEST_CASE("perturbation is deterministic per seed and trivial at zero") {
    const Subalgebra base = Subalgebra::full_matrix(2);
    const Subalgebra a = perturb_algebra(base, 0.2, 31);
    const Subalgebra b = perturb_algebra(base, 0.2, 31);
    REQUIRE(a.dim() == b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        CHECK((a.basis()[i] - b.basis()[i]).max_abs() == 0.0);
    REQUIRE(a.conjugator().has_value());
    CHECK((*a.conjugator() - *b.conjugator()).max_abs() == 0.0);

    const Subalgebra still = perturb_algebra(base, 0.0, 31);
    CHECK(base.same_span(still, 1e-12));
    const KkCertificate cert = kk_distance(base, still, 50);
    CHECK(cert.lower == 0.0);
    CHECK(cert.upper == 0.0);

    const Subalgebra other = perturb_algebra(base, 0.2, 32);
    bool some_entry_differs = false;
    for (std::size_t i = 0; i < a.dim() && !some_entry_differs; ++i)
        some_entry_differs = (a.basis()[i] - other.basis()[i]).max_abs() > 1e-12;
    CHECK(some_entry_differs);
}

TEST_CASE("construction rejects bases that are not orthonormal or not closed") {
    // The identity of M_2 has trace norm sqrt(2): not normalized.
    CHECK_THROWS_AS(Subalgebra(2, {ComplexMatrix::identity(2)}, true), CertificateError);

    // Span of E11 and E12 is not adjoint closed.
    ComplexMatrix e11(2, 2);
    e11(0, 0) = Complex(1.0, 0.0);
    ComplexMatrix e12(2, 2);
    e12(0, 1) = Complex(1.0, 0.0);
    CHECK_THROWS_AS(Subalgebra(2, {e11, e12}, false), CertificateError);

    // from_span normalizes, so the unnormalized identity is accepted there.
    const Subalgebra scalars = Subalgebra::from_span(2, {ComplexMatrix::identity(2)}, true);
    CHECK(scalars.dim() == 1);

    CHECK_THROWS_AS(kk_distance(Subalgebra::full_matrix(2), Subalgebra::full_matrix(3)),
                    PreconditionError);
    CHECK_THROWS_AS(kk_distance(Subalgebra::full_matrix(2), Subalgebra::full_matrix(2), 0),
                    PreconditionError);
}

TEST_CASE("sentence estimates over subalgebras stay near zero for matrix algebras") {
    EvalOptions opts;
    opts.budget = 500;
    opts.starts = 12;
    opts.seed = 5;

    for (const Subalgebra& s :
         {Subalgebra::full_matrix(3), Subalgebra::diagonal(2),
          perturb_algebra(Subalgebra::block_diagonal(4, {2, 2}), 0.05, 9)}) {
        const EvalResult res = eval_formula(s, build_phi_n(1), opts);
        CHECK(res.lower == 0.0);
        CHECK(res.upper <= 0.05);
        CHECK(res.upper_method == "search");
        CHECK(res.witnesses.empty());
        CHECK(res.budget_used >= 1);
        CHECK(res.budget_used <= opts.budget);
    }

    CHECK_THROWS_AS(eval_formula(Subalgebra::full_matrix(2),
                                 parse_formula("sup x:ball1(A^1). norm(x)"), opts),
                    PreconditionError);
    EvalOptions empty = opts;
    empty.budget = 0;
    CHECK_THROWS_AS(eval_formula(Subalgebra::full_matrix(2), build_phi_n(1), empty),
                    PreconditionError);
}

TEST_CASE("estimated rank over subalgebras is 1 for finite dimensional examples") {
    EvalOptions opts;
    opts.budget = 500;
    opts.starts = 12;
    opts.seed = 17;
    for (const Subalgebra& s : {Subalgebra::full_matrix(2), Subalgebra::block_diagonal(3, {2, 1}),
                                perturb_algebra(Subalgebra::diagonal(3), 0.01, 21)}) {
        const SrEstimate est = estimate_sr(s, 3, opts);
        REQUIRE(est.rank.has_value());
        CHECK(*est.rank == 1);
        CHECK(est.trials.size() == 1);
    }
    CHECK_THROWS_AS(estimate_sr(Subalgebra::full_matrix(2), 0, opts), PreconditionError);
}

TEST_CASE("the stability experiment agrees on every standard pair") {
    const std::vector<SrExperimentPair> pairs = standard_experiment_pairs(6, 2, 0.01, 123);
    REQUIRE(pairs.size() == 8);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(pairs[i].kk_upper <= 0.02 + 1e-6);
        CHECK(std::holds_alternative<Subalgebra>(pairs[i].first));
        CHECK(std::holds_alternative<Subalgebra>(pairs[i].second));
    }
    for (std::size_t i = 6; i < 8; ++i) {
        CHECK(pairs[i].kk_upper == 0.0);
        CHECK(std::holds_alternative<Algebra>(pairs[i].first));
    }

    EvalOptions opts;
    opts.budget = 1500;
    opts.starts = 10;
    opts.seed = 2;
    const SrExperimentReport report = sr_stability_experiment(pairs, 3, opts);
    REQUIRE(report.rows.size() == 8);
    CHECK(report.agreements == 8);
    CHECK(report.disagreements == 0);
    for (std::size_t i = 0; i < 6; ++i) {
        REQUIRE(report.rows[i].sr_first.has_value());
        CHECK(*report.rows[i].sr_first == 1);
        CHECK(report.rows[i].agree);
    }
    for (std::size_t i = 6; i < 8; ++i) {
        REQUIRE(report.rows[i].sr_first.has_value());
        CHECK(*report.rows[i].sr_first == 2);
        CHECK(report.rows[i].agree);
    }
}

TEST_CASE("an empty pair list yields an empty report") {
    const SrExperimentReport report = sr_stability_experiment({}, 3);
    CHECK(report.rows.empty());
    CHECK(report.agreements == 0);
    CHECK(report.disagreements == 0);
}
