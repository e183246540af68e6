// Batch front end: every subcommand runs one library capability from flags,
// emits a reproducible report (version, config, certificates, witnesses) and
// exits 0 on success, 2 on configuration errors, 3 on violated invariants.
#include <CLI11.hpp>

#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "csrank/algebra.hpp"
#include "csrank/distance.hpp"
#include "csrank/element.hpp"
#include "csrank/error.hpp"
#include "csrank/experiment.hpp"
#include "csrank/formula.hpp"
#include "csrank/formula_eval.hpp"
#include "csrank/kk.hpp"
#include "csrank/random_elements.hpp"
#include "csrank/serialize.hpp"
#include "csrank/sr_estimate.hpp"
#include "csrank/subalgebra.hpp"
#include "csrank/suites.hpp"
#include "csrank/tuple.hpp"
#include "csrank/version.hpp"

using namespace csrank;

namespace {

struct Opts {
    std::string algebra_path;
    std::size_t n = 1;
    std::uint64_t seed = 42;
    std::uint64_t budget = 4000;
    std::size_t mesh_res = 64;
    std::string out;
    std::string format = "json";
    double tolerance = 0.0;
    CLI::Option* tolerance_opt = nullptr;
    std::string parse_text;
};

void add_common(CLI::App* sub, Opts& o, std::size_t default_n) {
    o.n = default_n;
    sub->add_option("--algebra", o.algebra_path, "algebra or subalgebra spec file");
    sub->add_option("--n", o.n, "count parameter of the command");
    sub->add_option("--seed", o.seed, "root seed; all randomness derives from it");
    sub->add_option("--budget", o.budget, "search budget");
    sub->add_option("--mesh-res", o.mesh_res,
                    "resolution of the default disk region (when --algebra is omitted)");
    sub->add_option("--out", o.out, "write the report to this path instead of stdout");
    sub->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    o.tolerance_opt = sub->add_option("--tolerance", o.tolerance,
                                      "tolerance override (perturbation size for kk and the "
                                      "experiment)");
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void require_positive(std::uint64_t value, const char* what) {
    if (value == 0) throw ConfigError(std::string(what) + " must be positive");
}

Algebra cli_algebra(const Opts& o) {
    if (!o.algebra_path.empty()) return load_algebra(o.algebra_path);
    try {
        auto mesh = std::make_shared<const SimplicialMesh>(SimplicialMesh::disk(o.mesh_res));
        return Algebra::sampled_field(std::move(mesh), 1);
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("cannot build the default disk region: ") + e.what());
    }
}

// Canonical subject of the distance commands: the coordinate function on a
// sampled field (padded with zeros to length n), a seeded Gaussian tuple on
// matrix algebras.
Tuple subject_tuple(const Algebra& algebra, std::size_t n, std::uint64_t seed) {
    if (algebra.is_field()) {
        std::vector<Element> entries;
        entries.push_back(Element::coordinate(algebra));
        for (std::size_t i = 1; i < n; ++i) entries.push_back(Element::zero(algebra));
        return Tuple(std::move(entries));
    }
    return random_element(algebra, n, seed, 1.0);
}

Json suite_to_json(const SuiteReport& r) {
    Json j;
    j["requested"] = r.requested;
    j["exercised"] = r.exercised;
    j["passes"] = r.passes;
    return j;
}

Json envelope(const std::string& command, Json config, Json result) {
    Json doc;
    doc["version"] = kVersion;
    doc["command"] = command;
    doc["timestamp"] = timestamp_utc();
    doc["config"] = std::move(config);
    doc["result"] = std::move(result);
    return doc;
}

void emit(const Opts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(o.out);
    if (!file) throw ConfigError("cannot write '" + o.out + "'");
    file << text;
}

void emit_report(const Opts& o, const Json& doc) {
    emit(o, o.format == "csv" ? json_to_csv(doc) : doc.dump(2) + "\n");
}

int run_verify_lemmas(const Opts& o) {
    require_positive(o.n, "--n");
    Json config;
    config["instances"] = o.n;
    config["seed"] = o.seed;
    Json result;
    result["shift"] = suite_to_json(shift_suite(o.n, o.seed));
    result["section"] = suite_to_json(section_suite(o.n / 2, o.seed + 1));
    result["level_grid"] = suite_to_json(level_grid_suite(o.n / 2, o.seed + 2));
    emit_report(o, envelope("verify-lemmas", std::move(config), std::move(result)));
    return 0;
}

int run_dist(const Opts& o, bool with_witness) {
    require_positive(o.n, "--n");
    require_positive(o.budget, "--budget");
    const Algebra algebra = cli_algebra(o);
    const Tuple subject = subject_tuple(algebra, o.n, o.seed);
    const DistanceCertificate cert = dist_to_lg(subject, o.budget);

    Json config;
    config["algebra"] = algebra_to_json(algebra);
    config["n"] = o.n;
    config["seed"] = o.seed;
    config["budget"] = o.budget;
    Json result;
    result["subject_norm"] = tuple_norm(subject);
    result["certificate"] = dist_to_json(cert);
    if (!with_witness) {
        result["subject"] = tuple_to_json(subject);
        emit_report(o, envelope("dist", std::move(config), std::move(result)));
        return 0;
    }
    const Tuple witness = max_distance_witness(subject, cert);
    const DistanceCertificate recert = dist_to_lg(witness, o.budget);
    result["witness_norm"] = tuple_norm(witness);
    result["recertified"] = dist_to_json(recert);
    result["witness"] = tuple_to_json(witness);
    emit_report(o, envelope("witness", std::move(config), std::move(result)));
    return 0;
}

int run_phi(const Opts& o) {
    require_positive(o.n, "--n");
    require_positive(o.budget, "--budget");
    const Algebra algebra = cli_algebra(o);
    const FormulaPtr sentence = build_phi_n(o.n);
    EvalOptions eval;
    eval.budget = o.budget;
    eval.seed = o.seed;

    Json config;
    config["algebra"] = algebra_to_json(algebra);
    config["n"] = o.n;
    config["seed"] = o.seed;
    config["budget"] = o.budget;
    Json result;
    result["sentence"] = print_formula(sentence);
    result["evaluation"] = eval_to_json(eval_formula(algebra, sentence, eval));
    emit_report(o, envelope("phi", std::move(config), std::move(result)));
    return 0;
}

int run_sr(const Opts& o) {
    require_positive(o.n, "--n");
    require_positive(o.budget, "--budget");
    const Algebra algebra = cli_algebra(o);
    EvalOptions eval;
    eval.budget = o.budget;
    eval.seed = o.seed;

    Json config;
    config["algebra"] = algebra_to_json(algebra);
    config["n_max"] = o.n;
    config["seed"] = o.seed;
    config["budget"] = o.budget;
    emit_report(o, envelope("sr", std::move(config), sr_to_json(estimate_sr(algebra, o.n, eval))));
    return 0;
}

int run_kk(const Opts& o) {
    require_positive(o.budget, "--budget");
    if (o.algebra_path.empty()) throw ConfigError("kk requires --algebra");
    const Json doc = load_json(o.algebra_path);

    Json config;
    config["seed"] = o.seed;
    config["budget"] = o.budget;
    Json result;
    if (doc.is_object() && doc.contains("kind") && doc.at("kind") == "pair") {
        if (!doc.contains("first") || !doc.contains("second"))
            throw ConfigError("pair document needs 'first' and 'second'");
        const Subalgebra first = subalgebra_from_json(doc.at("first"));
        const Subalgebra second = subalgebra_from_json(doc.at("second"));
        config["mode"] = "pair";
        result["certificate"] = kk_to_json(kk_distance(first, second, o.budget));
    } else {
        const Subalgebra first = subalgebra_from_json(doc);
        const double epsilon = o.tolerance_opt->count() > 0 ? o.tolerance : 0.05;
        if (!(epsilon >= 0.0)) throw ConfigError("--tolerance must be nonnegative");
        const Subalgebra second = perturb_algebra(first, epsilon, o.seed);
        config["mode"] = "perturb";
        config["epsilon"] = epsilon;
        result["certificate"] = kk_to_json(kk_distance(first, second, o.budget));
    }
    emit_report(o, envelope("kk", std::move(config), std::move(result)));
    return 0;
}

int run_experiment(const Opts& o) {
    require_positive(o.budget, "--budget");
    const std::size_t matrix_pairs = o.n;
    const std::size_t disk_pairs =
        matrix_pairs == 0 ? 0 : std::max<std::size_t>(1, matrix_pairs / 5);
    const std::vector<double> epsilons = o.tolerance_opt->count() > 0
                                             ? std::vector<double>{o.tolerance}
                                             : std::vector<double>{0.2, 0.1, 0.05, 0.01};
    for (double e : epsilons)
        if (!(e >= 0.0)) throw ConfigError("--tolerance must be nonnegative");
    constexpr std::size_t kScanLimit = 3;
    EvalOptions eval;
    eval.budget = o.budget;
    eval.seed = o.seed;

    Json config;
    config["matrix_pairs"] = matrix_pairs;
    config["disk_pairs"] = disk_pairs;
    config["epsilons"] = epsilons;
    config["n_max"] = kScanLimit;
    config["seed"] = o.seed;
    config["budget"] = o.budget;

    Json sweep = Json::array();
    std::string csv;
    for (double epsilon : epsilons) {
        const auto pairs = standard_experiment_pairs(matrix_pairs, disk_pairs, epsilon, o.seed);
        const SrExperimentReport report = sr_stability_experiment(pairs, kScanLimit, eval);
        Json point;
        point["epsilon"] = epsilon;
        point["report"] = experiment_to_json(report);
        sweep.push_back(std::move(point));
        csv += "epsilon," + Json(epsilon).dump() + "\n" + experiment_to_csv(report);
    }
    Json result;
    result["sweep"] = std::move(sweep);

    if (o.format == "csv") {
        std::string text = std::string("version,") + kVersion + "\n" +
                           "command,perturb-experiment\n" + "timestamp," + timestamp_utc() + "\n" +
                           csv;
        emit(o, text);
        return 0;
    }
    emit_report(o, envelope("perturb-experiment", std::move(config), std::move(result)));
    return 0;
}

int run_parse(const Opts& o) {
    const FormulaPtr sentence = parse_formula(o.parse_text);
    const std::string canonical = print_formula(sentence);
    Json config;
    config["text"] = o.parse_text;
    Json result;
    result["canonical"] = canonical;
    result["fixed_point"] = print_formula(parse_formula(canonical)) == canonical;
    const ValueRange range = formula_range(sentence);
    Json range_doc;
    range_doc["lo"] = range.lo;
    range_doc["hi"] = range.hi;
    result["range"] = std::move(range_doc);
    const std::optional<std::size_t> width = phi_shape(sentence);
    result["phi_width"] = width ? Json(*width) : Json();
    emit_report(o, envelope("parse", std::move(config), std::move(result)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stable rank workbench: left-invertibility distances, sentence estimates, "
                 "subalgebra perturbations"};
    app.require_subcommand(1);

    Opts verify_o, dist_o, witness_o, phi_o, sr_o, kk_o, exp_o, parse_o;
    CLI::App* verify = app.add_subcommand("verify-lemmas", "run the randomized verification suites");
    add_common(verify, verify_o, 1000);
    CLI::App* dist = app.add_subcommand("dist", "distance-to-left-invertible certificate");
    add_common(dist, dist_o, 1);
    CLI::App* witness = app.add_subcommand("witness", "norm-one maximal-distance witness");
    add_common(witness, witness_o, 1);
    CLI::App* phi = app.add_subcommand("phi", "evaluate the built-in sentence of width n");
    add_common(phi, phi_o, 1);
    CLI::App* sr = app.add_subcommand("sr", "estimate the stable rank up to n");
    add_common(sr, sr_o, 3);
    CLI::App* kk = app.add_subcommand("kk", "unit-ball Hausdorff distance between subalgebras");
    add_common(kk, kk_o, 1);
    CLI::App* experiment =
        app.add_subcommand("perturb-experiment", "rank agreement across perturbation pairs");
    add_common(experiment, exp_o, 50);
    CLI::App* parse = app.add_subcommand("parse", "round-trip a sentence through the grammar");
    add_common(parse, parse_o, 1);
    parse->add_option("text", parse_o.parse_text, "sentence text")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(verify)) return run_verify_lemmas(verify_o);
        if (app.got_subcommand(dist)) return run_dist(dist_o, false);
        if (app.got_subcommand(witness)) return run_dist(witness_o, true);
        if (app.got_subcommand(phi)) return run_phi(phi_o);
        if (app.got_subcommand(sr)) return run_sr(sr_o);
        if (app.got_subcommand(kk)) return run_kk(kk_o);
        if (app.got_subcommand(experiment)) return run_experiment(exp_o);
        if (app.got_subcommand(parse)) return run_parse(parse_o);
        throw ConfigError("no subcommand selected");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ContractViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
