#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <string>

#include "csrank/error.hpp"
#include "csrank/formula.hpp"
#include "csrank/serialize.hpp"
#include "test_util.hpp"

using namespace csrank;

TEST_CASE("matrices round-trip exactly through their documents") {
    Rng rng(91);
    const ComplexMatrix m = testutil::random_matrix(rng, 3, 2);
    const Json doc = matrix_to_json(m);
    CHECK(doc.at("rows") == 3);
    CHECK(doc.at("cols") == 2);
    const ComplexMatrix back = matrix_from_json(doc);
    CHECK((m - back).max_abs() == 0.0);

    // Text round-trip as well: shortest-form doubles parse back to the bit.
    const ComplexMatrix reparsed = matrix_from_json(Json::parse(doc.dump()));
    CHECK((m - reparsed).max_abs() == 0.0);

    CHECK_THROWS_AS(matrix_from_json(Json::object()), ConfigError);
    Json bad = doc;
    bad["re"] = Json::array({1.0});
    CHECK_THROWS_AS(matrix_from_json(bad), ConfigError);
    bad = doc;
    bad["rows"] = "three";
    CHECK_THROWS_AS(matrix_from_json(bad), ConfigError);
}

TEST_CASE("meshes round-trip through parts and builtin documents") {
    const SimplicialMesh disk = SimplicialMesh::disk(16);
    const SimplicialMesh back = mesh_from_json(mesh_to_json(disk));
    CHECK(back.vertices() == disk.vertices());
    CHECK(back.triangles() == disk.triangles());
    CHECK(back.boundary_cycle() == disk.boundary_cycle());

    Json builtin;
    builtin["builtin"] = "disk";
    builtin["resolution"] = 32;
    CHECK(mesh_from_json(builtin).boundary_cycle().size() ==
          SimplicialMesh::disk(32).boundary_cycle().size());

    builtin["builtin"] = "torus";
    CHECK_THROWS_AS(mesh_from_json(builtin), ConfigError);
    CHECK_THROWS_AS(mesh_from_json(Json::object()), ConfigError);
}

TEST_CASE("algebra documents reproduce equal algebras") {
    const auto disk_mesh = std::make_shared<const SimplicialMesh>(SimplicialMesh::disk(16));
    const auto interval_mesh =
        std::make_shared<const SimplicialMesh>(SimplicialMesh::interval(24));
    const Algebra cases[] = {
        Algebra::full_matrix(3),
        Algebra::direct_sum({2, 1, 3}),
        Algebra::sampled_field(disk_mesh, 2),
        Algebra::sampled_field(interval_mesh, 1),
    };
    for (const Algebra& a : cases) {
        const Algebra back = algebra_from_json(algebra_to_json(a));
        CHECK(back == a);
    }
    Json bad;
    bad["kind"] = "quaternionic";
    CHECK_THROWS_AS(algebra_from_json(bad), ConfigError);
}

TEST_CASE("subalgebra documents validate on ingestion") {
    const Subalgebra moved = perturb_algebra(Subalgebra::block_diagonal(3, {2, 1}), 0.1, 4);
    const Subalgebra back = subalgebra_from_json(subalgebra_to_json(moved));
    CHECK(back.dim() == moved.dim());
    CHECK(back.same_span(moved, 1e-10));
    CHECK(back.contains_unit());

    Json matrix_doc;
    matrix_doc["kind"] = "matrix";
    matrix_doc["dim"] = 2;
    CHECK(subalgebra_from_json(matrix_doc).dim() == 4);

    Json sum_doc;
    sum_doc["kind"] = "sum";
    sum_doc["blocks"] = Json::array({1, 1});
    CHECK(subalgebra_from_json(sum_doc).dim() == 2);

    // An unnormalized basis is a rejected configuration, not a crash.
    Json bad;
    bad["kind"] = "subalgebra";
    bad["ambient"] = 2;
    bad["unit"] = true;
    bad["basis"] = Json::array({matrix_to_json(ComplexMatrix::identity(2))});
    CHECK_THROWS_AS(subalgebra_from_json(bad), ConfigError);
}

TEST_CASE("certificate and report documents carry the stated fields") {
    const Subalgebra diag = Subalgebra::diagonal(2);
    const Subalgebra full = Subalgebra::full_matrix(2);
    const Json kk = kk_to_json(kk_distance(diag, full, 200));
    CHECK(kk.at("lower").get<double>() >= 0.99);
    CHECK(kk.at("upper").get<double>() <= 1.0);
    CHECK(kk.contains("witness_x"));
    CHECK(kk.contains("witness_y"));

    EvalOptions opts;
    opts.budget = 300;
    opts.starts = 8;
    const SrEstimate est = estimate_sr(full, 2, opts);
    const Json sr = sr_to_json(est);
    CHECK(sr.at("rank") == 1);
    CHECK(sr.at("trials").size() == 1);
    CHECK(sr.at("trials").at(0).contains("lower_method"));

    SrExperimentReport report;
    report.rows.push_back(SrExperimentRow{"pair-a", 0.02, 1, 1, 3, true});
    report.rows.push_back(SrExperimentRow{"pair-b", 0.02, 2, std::nullopt, 3, false});
    report.agreements = 1;
    report.disagreements = 1;
    const Json doc = experiment_to_json(report);
    CHECK(doc.at("rows").size() == 2);
    CHECK(doc.at("rows").at(1).at("sr_second").is_null());
    CHECK(doc.at("disagreements") == 1);

    const std::string csv = experiment_to_csv(report);
    CHECK(csv.find("label,kk_upper,sr_first,sr_second,n_max,agree\n") == 0);
    CHECK(csv.find("pair-b,0.02,2,>3,3,false\n") != std::string::npos);
    CHECK(csv.find("total-agreements,,,,,1\n") != std::string::npos);

    const std::string flat = json_to_csv(doc);
    CHECK(flat.find("key,value\n") == 0);
    CHECK(flat.find("rows.0.label,pair-a\n") != std::string::npos);
    CHECK(flat.find("agreements,1\n") != std::string::npos);
}

TEST_CASE("identical inputs render identical bytes") {
    const auto mesh = std::make_shared<const SimplicialMesh>(SimplicialMesh::disk(16));
    const Algebra disk = Algebra::sampled_field(mesh, 1);
    const std::string once = algebra_to_json(disk).dump(2);
    const std::string twice = algebra_to_json(disk).dump(2);
    CHECK(once == twice);
}

TEST_CASE("missing files and broken text are configuration errors") {
    CHECK_THROWS_AS(load_json("/nonexistent/path/algebra.json"), ConfigError);
    CHECK_THROWS_AS(load_algebra("/nonexistent/path/algebra.json"), ConfigError);
}
