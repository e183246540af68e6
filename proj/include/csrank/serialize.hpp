#pragma once

#include <json.hpp>
#include <string>

#include "csrank/algebra.hpp"
#include "csrank/distance.hpp"
#include "csrank/element.hpp"
#include "csrank/experiment.hpp"
#include "csrank/formula_eval.hpp"
#include "csrank/kk.hpp"
#include "csrank/lg.hpp"
#include "csrank/mesh.hpp"
#include "csrank/sr_estimate.hpp"
#include "csrank/subalgebra.hpp"
#include "csrank/tuple.hpp"

namespace csrank {

// Documents keep insertion order so identical inputs render identical bytes.
using Json = nlohmann::ordered_json;

// Matrices carry rows, cols and row-major re/im arrays.  Doubles render in
// shortest round-trip form, so load(save(m)) reproduces m exactly.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& doc);

// Vertices, triangles and the boundary cycle of a two-dimensional mesh.
Json mesh_to_json(const SimplicialMesh& mesh);
// Accepts either the parts document above or {"builtin": "interval"|"disk",
// "resolution": n}.
SimplicialMesh mesh_from_json(const Json& doc);

Json element_to_json(const Element& e);
Json tuple_to_json(const Tuple& t);

// Kind tag plus parameters: {"kind":"matrix","dim":k},
// {"kind":"sum","blocks":[...]}, or {"kind":"field","fiber_dim":k,"mesh":...}.
// One-dimensional meshes are emitted in builtin form (their edges are not
// recoverable from a parts document).
Json algebra_to_json(const Algebra& a);
Algebra algebra_from_json(const Json& doc);

// {"kind":"subalgebra","ambient":d,"unit":flag,"basis":[...]}; also accepts
// the matrix and sum algebra documents, mapped to the corresponding
// block-diagonal subalgebra.  A basis failing validation is reported as a
// ConfigError: rejecting supplied input is a configuration problem, not a
// broken internal invariant.
Json subalgebra_to_json(const Subalgebra& s);
Subalgebra subalgebra_from_json(const Json& doc);

Json lg_to_json(const LgCertificate& cert);
Json dist_to_json(const DistanceCertificate& cert);
Json eval_to_json(const EvalResult& result);
Json sr_to_json(const SrEstimate& estimate);
Json kk_to_json(const KkCertificate& cert);
Json experiment_to_json(const SrExperimentReport& report);

// Flat rendering of the experiment: one row per pair with label, kk_upper,
// both rank estimates (">n" past the scan limit), n_max and the agreement
// flag, then total rows.
std::string experiment_to_csv(const SrExperimentReport& report);

// Generic flat rendering: dotted key paths to leaf values, one per line.
std::string json_to_csv(const Json& doc);

// File loading with ConfigError on missing files or malformed documents.
Json load_json(const std::string& path);
Algebra load_algebra(const std::string& path);
Subalgebra load_subalgebra(const std::string& path);

}  // namespace csrank
