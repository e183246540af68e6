// Acceptance gate: every shipped guarantee, one pass/fail line each.
// Exit status is the number of failed criteria.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "csrank/algebra.hpp"
#include "csrank/distance.hpp"
#include "csrank/eig.hpp"
#include "csrank/element.hpp"
#include "csrank/experiment.hpp"
#include "csrank/formula.hpp"
#include "csrank/formula_eval.hpp"
#include "csrank/functional_calculus.hpp"
#include "csrank/kk.hpp"
#include "csrank/mesh.hpp"
#include "csrank/polar.hpp"
#include "csrank/rng.hpp"
#include "csrank/sr_estimate.hpp"
#include "csrank/subalgebra.hpp"
#include "csrank/suites.hpp"
#include "csrank/tuple.hpp"
#include "../test_util.hpp"

using namespace csrank;

namespace {

int failures = 0;

void report(const char* label, bool ok, const std::string& detail) {
    std::printf("%s  %-22s %s\n", ok ? "PASS" : "FAIL", label, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Algebra disk_algebra(std::size_t res) {
    auto mesh = std::make_shared<const SimplicialMesh>(SimplicialMesh::disk(res));
    return Algebra::sampled_field(std::move(mesh), 1);
}

Algebra interval_algebra(std::size_t res) {
    auto mesh = std::make_shared<const SimplicialMesh>(SimplicialMesh::interval(res));
    return Algebra::sampled_field(std::move(mesh), 1);
}

// 1. 1000 random shift instances, every output certified left invertible at
//    margin 1e-8, under 60 s.
void criterion_shift() {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = shift_suite(1000, 42);
    const double dt = seconds_since(t0);
    char detail[128];
    std::snprintf(detail, sizeof detail, "%zu/%zu certified, %.1f s", r.passes, r.requested, dt);
    report("shift-suite", r.exercised == 1000 && r.passes == 1000 && dt < 60.0, detail);
}

// 2. 500 gap-safe section instances, residual <= 1e-7 and certified output.
void criterion_section() {
    const SuiteReport r = section_suite(500, 43);
    char detail[128];
    std::snprintf(detail, sizeof detail, "%zu/%zu certified with residual <= 1e-7", r.passes,
                  r.requested);
    report("section-suite", r.exercised == 500 && r.passes == 500, detail);
}

// 3. 500 instances x 9-point level grid: candidates stay within lambda + 1e-8
//    of the input, and a section success at lambda forces upper <= lambda + 1e-6.
void criterion_level_grid() {
    const SuiteReport r = level_grid_suite(500, 44);
    char detail[128];
    std::snprintf(detail, sizeof detail, "%zu/%zu grids clean", r.passes, r.requested);
    report("level-grid", r.exercised == 500 && r.passes == 500, detail);
}

// 4. Coordinate function on the disk at resolutions 32/64/128: certified lower
//    >= 1 - 10/res, upper <= 1 + 1e-6, witness norm in [0.99, 1.0], witness
//    re-certification >= 0.9 at resolution 64, all under 5 min.
void criterion_disk_benchmark() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (std::size_t res : {32u, 64u, 128u}) {
        const Algebra disk = disk_algebra(res);
        const Tuple a({Element::coordinate(disk)});
        const DistanceCertificate cert = dist_to_lg(a, 4000);
        ok = ok && cert.lower >= 1.0 - 10.0 / static_cast<double>(res);
        ok = ok && cert.upper <= 1.0 + 1e-6;
        const Tuple b = max_distance_witness(a, cert);
        const double nb = tuple_norm(b);
        ok = ok && nb >= 0.99 && nb <= 1.0;
        if (res == 64) {
            const DistanceCertificate recert = dist_to_lg(b, 4000);
            ok = ok && recert.lower >= 0.9;
            char buf[64];
            std::snprintf(buf, sizeof buf, "recert@64 %.3f, ", recert.lower);
            detail += buf;
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "res%zu lower %.3f, ", res, cert.lower);
        detail += buf;
    }
    const double dt = seconds_since(t0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", dt);
    report("disk-benchmark", ok && dt < 300.0, detail + buf);
}

// 5. Sentence dichotomy: small on the rank-1 algebras, certified large on the
//    disk at width 1, small again at width 2; no final interval meets
//    [0.15, 0.85].
void criterion_phi_dichotomy() {
    struct Row {
        const char* name;
        Algebra algebra;
        std::size_t width;
        std::uint64_t budget;
    };
    const std::vector<Row> rows = {
        {"phi1(M3)", Algebra::full_matrix(3), 1, 4000},
        {"phi1(interval)", interval_algebra(64), 1, 3000},
        {"phi1(disk64)", disk_algebra(64), 1, 2000},
        {"phi2(disk64)", disk_algebra(64), 2, 2000},
    };
    bool ok = true;
    std::string detail;
    std::vector<EvalResult> finals;
    for (const Row& row : rows) {
        EvalOptions opts;
        opts.budget = row.budget;
        opts.seed = 5;
        const EvalResult res = eval_formula(row.algebra, build_phi_n(row.width), opts);
        finals.push_back(res);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s=[%.3f,%.3f] ", row.name, res.lower, res.upper);
        detail += buf;
    }
    ok = ok && finals[0].upper <= 0.05;
    ok = ok && finals[1].upper <= 0.1;
    ok = ok && finals[2].lower >= 0.9 && finals[2].lower_method == "obstruction";
    ok = ok && finals[3].upper <= 0.1;
    for (const EvalResult& res : finals) ok = ok && (res.upper < 0.15 || res.lower > 0.85);
    report("phi-dichotomy", ok, detail);
}

// 6. Rank estimates: 1 for full matrix algebras k in {2,3,4} and the interval,
//    2 for the disk.
void criterion_rank_estimates() {
    EvalOptions opts;
    opts.budget = 2500;
    opts.seed = 9;
    bool ok = true;
    std::string detail;
    for (std::size_t k : {2u, 3u, 4u}) {
        const SrEstimate est = estimate_sr(Algebra::full_matrix(k), 3, opts);
        ok = ok && est.rank.has_value() && *est.rank == 1;
        detail += "M" + std::to_string(k) + "=" + (est.rank ? std::to_string(*est.rank) : ">3") +
                  " ";
    }
    const SrEstimate interval = estimate_sr(interval_algebra(32), 3, opts);
    ok = ok && interval.rank.has_value() && *interval.rank == 1;
    detail += std::string("interval=") + (interval.rank ? std::to_string(*interval.rank) : ">3") +
              " ";
    opts.budget = 1500;
    const SrEstimate disk = estimate_sr(disk_algebra(32), 3, opts);
    ok = ok && disk.rank.has_value() && *disk.rank == 2;
    detail += std::string("disk=") + (disk.rank ? std::to_string(*disk.rank) : ">3");
    report("rank-estimates", ok, detail);
}

// 7. Subalgebra distances: exact [0,0] on identical spans, >= 0.99 for the
//    diagonal inside M2, conjugation upper <= 2*eps + 1e-6, and a 60-pair
//    perturbation experiment with zero rank disagreements.
void criterion_kk_suite() {
    bool ok = true;
    std::string detail;

    const Subalgebra m2 = Subalgebra::full_matrix(2);
    const KkCertificate self = kk_distance(m2, m2, 200);
    ok = ok && self.lower == 0.0 && self.upper == 0.0;

    const KkCertificate diag = kk_distance(Subalgebra::diagonal(2), m2, 2000);
    ok = ok && diag.lower >= 0.99;
    char buf[96];
    std::snprintf(buf, sizeof buf, "self=[%g,%g] diag=%.3f ", self.lower, self.upper, diag.lower);
    detail += buf;

    const Subalgebra base = Subalgebra::block_diagonal(3, {2, 1});
    for (double eps : {0.01, 0.05}) {
        const Subalgebra moved = perturb_algebra(base, eps, 7);
        const KkCertificate cert = kk_distance(base, moved, 400);
        ok = ok && cert.upper <= 2.0 * eps + 1e-6;
        std::snprintf(buf, sizeof buf, "eps%.2f upper=%.4f ", eps, cert.upper);
        detail += buf;
    }

    const auto pairs = standard_experiment_pairs(50, 10, 0.01, 123);
    EvalOptions opts;
    opts.budget = 1500;
    opts.starts = 10;
    opts.seed = 2;
    const SrExperimentReport rep = sr_stability_experiment(pairs, 3, opts);
    ok = ok && pairs.size() == 60 && rep.agreements == 60 && rep.disagreements == 0;
    std::snprintf(buf, sizeof buf, "experiment %zu/%zu agree", rep.agreements, pairs.size());
    detail += buf;
    report("kk-suite", ok, detail);
}

// 8. Numerics floor: eigensolver residual <= 1e-10 up to k = 32, polar
//    reconstruction <= 1e-8 * ||a|| over 1000 draws.
void criterion_numerics_floor() {
    bool ok = true;
    double worst_eig = 0.0;
    Rng rng(2024);
    for (std::size_t k = 1; k <= 32; ++k) {
        for (int rep = 0; rep < 4; ++rep) {
            const ComplexMatrix h = testutil::random_hermitian(rng, k, 1.0);
            const EigenDecomposition eig = herm_eig(h);
            const double res = testutil::eig_residual(h, eig.eigenvectors, eig.eigenvalues);
            worst_eig = std::max(worst_eig, res);
        }
    }
    ok = ok && worst_eig <= 1e-10;

    double worst_polar = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t rows = 1 + rng.index(8);
        const std::size_t cols = 1 + rng.index(rows);
        const ComplexMatrix a = testutil::random_matrix(rng, rows, cols, 1.0);
        const PolarParts p = polar(a);
        const double scale = std::max(1e-300, op_norm(a));
        worst_polar = std::max(worst_polar, op_norm(a - p.partial_isometry * p.modulus) / scale);
    }
    ok = ok && worst_polar <= 1e-8;
    char detail[96];
    std::snprintf(detail, sizeof detail, "eig residual %.2e, polar residual %.2e", worst_eig,
                  worst_polar);
    report("numerics-floor", ok, detail);
}

// 9. Two identical CLI invocations produce byte-identical reports once the
//    timestamp line is removed.
std::string file_without_timestamp(const std::filesystem::path& path) {
    std::ifstream file(path);
    std::ostringstream out;
    std::string line;
    while (std::getline(file, line))
        if (line.find("timestamp") == std::string::npos) out << line << "\n";
    return out.str();
}

void criterion_cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path();
    const fs::path algebra = dir / "csrank_acceptance_algebra.json";
    {
        std::ofstream f(algebra);
        f << "{\"kind\":\"sum\",\"blocks\":[2,1]}";
    }
    const fs::path out1 = dir / "csrank_acceptance_run1.json";
    const fs::path out2 = dir / "csrank_acceptance_run2.json";
    const std::string base = std::string(CSRANK_BIN) + " dist --algebra " + algebra.string() +
                             " --n 2 --seed 11 --budget 500 --out ";
    const int rc1 = std::system((base + out1.string() + " >/dev/null 2>&1").c_str());
    const int rc2 = std::system((base + out2.string() + " >/dev/null 2>&1").c_str());
    const bool ran = WIFEXITED(rc1) && WEXITSTATUS(rc1) == 0 && WIFEXITED(rc2) &&
                     WEXITSTATUS(rc2) == 0;
    const std::string a = file_without_timestamp(out1);
    const std::string b = file_without_timestamp(out2);
    const bool ok = ran && !a.empty() && a == b;
    report("cli-determinism", ok,
           ok ? "reruns byte-identical modulo timestamp" : "reports differ or run failed");
}

}  // namespace

int main() {
    criterion_shift();
    criterion_section();
    criterion_level_grid();
    criterion_disk_benchmark();
    criterion_phi_dichotomy();
    criterion_rank_estimates();
    criterion_kk_suite();
    criterion_numerics_floor();
    criterion_cli_determinism();
    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
