#include "csrank/serialize.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "csrank/error.hpp"

namespace csrank {

namespace {

const Json& need(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key))
        throw ConfigError(std::string("document is missing field '") + key + "'");
    return doc.at(key);
}

[[noreturn]] void malformed(const char* what, const std::exception& e) {
    throw ConfigError(std::string("malformed ") + what + " document: " + e.what());
}

std::string rank_cell(const std::optional<std::size_t>& rank, std::size_t n_max) {
    if (rank) return std::to_string(*rank);
    return ">" + std::to_string(n_max);
}

void flatten(const Json& doc, const std::string& prefix, std::ostringstream& out) {
    if (doc.is_object()) {
        for (const auto& [key, value] : doc.items())
            flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (doc.is_array()) {
        std::size_t i = 0;
        for (const auto& value : doc) flatten(value, prefix + "." + std::to_string(i++), out);
    } else {
        out << prefix << ",";
        if (doc.is_string())
            out << doc.get<std::string>();
        else if (!doc.is_null())
            out << doc.dump();
        out << "\n";
    }
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
    Json doc;
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    Json re = Json::array();
    Json im = Json::array();
    for (const Complex& z : m.data()) {
        re.push_back(z.real());
        im.push_back(z.imag());
    }
    doc["re"] = std::move(re);
    doc["im"] = std::move(im);
    return doc;
}

ComplexMatrix matrix_from_json(const Json& doc) {
    try {
        const std::size_t rows = need(doc, "rows").get<std::size_t>();
        const std::size_t cols = need(doc, "cols").get<std::size_t>();
        const auto& re = need(doc, "re");
        const auto& im = need(doc, "im");
        if (re.size() != rows * cols || im.size() != rows * cols)
            throw ConfigError("matrix document entry arrays do not match rows*cols");
        ComplexMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows * cols; ++i)
            m.data()[i] = Complex(re.at(i).get<double>(), im.at(i).get<double>());
        return m;
    } catch (const Json::exception& e) {
        malformed("matrix", e);
    }
}

Json mesh_to_json(const SimplicialMesh& mesh) {
    Json doc;
    Json vertices = Json::array();
    for (const auto& v : mesh.vertices()) vertices.push_back(Json::array({v[0], v[1]}));
    Json triangles = Json::array();
    for (const auto& t : mesh.triangles()) triangles.push_back(Json::array({t[0], t[1], t[2]}));
    doc["vertices"] = std::move(vertices);
    doc["triangles"] = std::move(triangles);
    doc["boundary"] = mesh.boundary_cycle();
    return doc;
}

SimplicialMesh mesh_from_json(const Json& doc) {
    try {
        if (doc.contains("builtin")) {
            const std::string name = doc.at("builtin").get<std::string>();
            const std::size_t res = need(doc, "resolution").get<std::size_t>();
            if (name == "interval") return SimplicialMesh::interval(res);
            if (name == "disk") return SimplicialMesh::disk(res);
            throw ConfigError("unknown builtin mesh '" + name + "'");
        }
        std::vector<std::array<double, 2>> vertices;
        for (const auto& v : need(doc, "vertices"))
            vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        std::vector<std::array<std::size_t, 3>> triangles;
        for (const auto& t : need(doc, "triangles"))
            triangles.push_back({t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>(),
                                 t.at(2).get<std::size_t>()});
        std::vector<std::size_t> boundary;
        for (const auto& b : need(doc, "boundary")) boundary.push_back(b.get<std::size_t>());
        return SimplicialMesh::from_parts(std::move(vertices), std::move(triangles),
                                          std::move(boundary));
    } catch (const Json::exception& e) {
        malformed("mesh", e);
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("mesh document rejected: ") + e.what());
    }
}

Json element_to_json(const Element& e) {
    Json doc;
    Json fibers = Json::array();
    for (std::size_t i = 0; i < e.algebra().fiber_count(); ++i)
        fibers.push_back(matrix_to_json(e.fiber(i)));
    doc["fibers"] = std::move(fibers);
    doc["lipschitz"] = e.lipschitz();
    return doc;
}

Json tuple_to_json(const Tuple& t) {
    Json doc;
    Json entries = Json::array();
    for (std::size_t i = 0; i < t.size(); ++i) entries.push_back(element_to_json(t.entry(i)));
    doc["entries"] = std::move(entries);
    return doc;
}

Json algebra_to_json(const Algebra& a) {
    Json doc;
    switch (a.kind()) {
        case AlgebraKind::FullMatrix:
            doc["kind"] = "matrix";
            doc["dim"] = a.block_dims().front();
            break;
        case AlgebraKind::DirectSum:
            doc["kind"] = "sum";
            doc["blocks"] = a.block_dims();
            break;
        case AlgebraKind::SampledField:
            doc["kind"] = "field";
            doc["fiber_dim"] = a.block_dims().front();
            if (a.mesh()->two_dimensional()) {
                doc["mesh"] = mesh_to_json(*a.mesh());
            } else {
                Json mesh;
                mesh["builtin"] = "interval";
                mesh["resolution"] = a.mesh()->vertex_count() - 1;
                doc["mesh"] = std::move(mesh);
            }
            break;
    }
    return doc;
}

Algebra algebra_from_json(const Json& doc) {
    try {
        const std::string kind = need(doc, "kind").get<std::string>();
        if (kind == "matrix") return Algebra::full_matrix(need(doc, "dim").get<std::size_t>());
        if (kind == "sum") {
            std::vector<std::size_t> blocks;
            for (const auto& b : need(doc, "blocks")) blocks.push_back(b.get<std::size_t>());
            return Algebra::direct_sum(std::move(blocks));
        }
        if (kind == "field") {
            const std::size_t fiber_dim = need(doc, "fiber_dim").get<std::size_t>();
            auto mesh =
                std::make_shared<const SimplicialMesh>(mesh_from_json(need(doc, "mesh")));
            return Algebra::sampled_field(std::move(mesh), fiber_dim);
        }
        throw ConfigError("unknown algebra kind '" + kind + "'");
    } catch (const Json::exception& e) {
        malformed("algebra", e);
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("algebra document rejected: ") + e.what());
    }
}

Json subalgebra_to_json(const Subalgebra& s) {
    Json doc;
    doc["kind"] = "subalgebra";
    doc["ambient"] = s.ambient_dim();
    doc["unit"] = s.contains_unit();
    Json basis = Json::array();
    for (const auto& b : s.basis()) basis.push_back(matrix_to_json(b));
    doc["basis"] = std::move(basis);
    return doc;
}

Subalgebra subalgebra_from_json(const Json& doc) {
    try {
        const std::string kind = need(doc, "kind").get<std::string>();
        if (kind == "matrix")
            return Subalgebra::full_matrix(need(doc, "dim").get<std::size_t>());
        if (kind == "sum") {
            std::vector<std::size_t> blocks;
            std::size_t total = 0;
            for (const auto& b : need(doc, "blocks")) {
                blocks.push_back(b.get<std::size_t>());
                total += blocks.back();
            }
            return Subalgebra::block_diagonal(total, blocks);
        }
        if (kind == "subalgebra") {
            const std::size_t ambient = need(doc, "ambient").get<std::size_t>();
            const bool unit = need(doc, "unit").get<bool>();
            std::vector<ComplexMatrix> basis;
            for (const auto& b : need(doc, "basis")) basis.push_back(matrix_from_json(b));
            return Subalgebra(ambient, std::move(basis), unit);
        }
        throw ConfigError("unknown subalgebra kind '" + kind + "'");
    } catch (const Json::exception& e) {
        malformed("subalgebra", e);
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("subalgebra document rejected: ") + e.what());
    }
}

Json lg_to_json(const LgCertificate& cert) {
    Json doc;
    doc["member"] = cert.member;
    doc["sigma_min"] = cert.sigma_min;
    doc["margin"] = cert.margin;
    return doc;
}

Json dist_to_json(const DistanceCertificate& cert) {
    Json doc;
    doc["lower"] = cert.lower;
    doc["upper"] = cert.upper;
    doc["lower_method"] = lower_method_name(cert.lower_method);
    doc["upper_witness"] = cert.upper_witness ? tuple_to_json(*cert.upper_witness) : Json();
    return doc;
}

Json eval_to_json(const EvalResult& result) {
    Json doc;
    doc["lower"] = result.lower;
    doc["upper"] = result.upper;
    doc["lower_method"] = result.lower_method;
    doc["upper_method"] = result.upper_method;
    Json witnesses;
    for (const auto& [name, value] : result.witnesses) witnesses[name] = tuple_to_json(value);
    doc["witnesses"] = std::move(witnesses);
    doc["budget_used"] = result.budget_used;
    return doc;
}

Json sr_to_json(const SrEstimate& estimate) {
    Json doc;
    doc["n_max"] = estimate.n_max;
    doc["rank"] = estimate.rank ? Json(*estimate.rank) : Json();
    Json trials = Json::array();
    for (const auto& trial : estimate.trials) trials.push_back(eval_to_json(trial));
    doc["trials"] = std::move(trials);
    return doc;
}

Json kk_to_json(const KkCertificate& cert) {
    Json doc;
    doc["lower"] = cert.lower;
    doc["upper"] = cert.upper;
    doc["witness_x"] = matrix_to_json(cert.witness_x);
    doc["witness_y"] = matrix_to_json(cert.witness_y);
    return doc;
}

Json experiment_to_json(const SrExperimentReport& report) {
    Json doc;
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json r;
        r["label"] = row.label;
        r["kk_upper"] = row.kk_upper;
        r["sr_first"] = row.sr_first ? Json(*row.sr_first) : Json();
        r["sr_second"] = row.sr_second ? Json(*row.sr_second) : Json();
        r["n_max"] = row.n_max;
        r["agree"] = row.agree;
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    doc["agreements"] = report.agreements;
    doc["disagreements"] = report.disagreements;
    return doc;
}

std::string experiment_to_csv(const SrExperimentReport& report) {
    std::ostringstream out;
    out << "label,kk_upper,sr_first,sr_second,n_max,agree\n";
    for (const auto& row : report.rows) {
        out << row.label << "," << Json(row.kk_upper).dump() << ","
            << rank_cell(row.sr_first, row.n_max) << "," << rank_cell(row.sr_second, row.n_max)
            << "," << row.n_max << "," << (row.agree ? "true" : "false") << "\n";
    }
    out << "total-agreements,,,,," << report.agreements << "\n";
    out << "total-disagreements,,,,," << report.disagreements << "\n";
    return out.str();
}

std::string json_to_csv(const Json& doc) {
    std::ostringstream out;
    out << "key,value\n";
    flatten(doc, "", out);
    return out.str();
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
}

Algebra load_algebra(const std::string& path) { return algebra_from_json(load_json(path)); }

Subalgebra load_subalgebra(const std::string& path) {
    return subalgebra_from_json(load_json(path));
}

}  // namespace csrank
