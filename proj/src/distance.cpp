#include "csrank/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "csrank/eig.hpp"
#include "csrank/error.hpp"
#include "csrank/functional_calculus.hpp"
#include "csrank/lg.hpp"
#include "csrank/mesh.hpp"
#include "csrank/tuple_calculus.hpp"
#include "csrank/winding.hpp"

namespace csrank {

namespace {

// sigma^2 floor for membership checks made on behalf of a certificate; the
// witness only has to be genuinely invertible, not comfortably so.
constexpr double kSearchMargin = 1e-30;
constexpr double kSectionResidualTol = 1e-7;

bool search_member(const Tuple& t) { return is_lg(t, kSearchMargin).member; }

struct SearchState {
    std::uint64_t left;
    bool take(std::uint64_t cost) {
        if (left < cost) return false;
        left -= cost;
        return true;
    }
};

void consider(const Tuple& a, Tuple candidate, double& best, std::optional<Tuple>& witness) {
    if (!candidate.all_finite()) return;
    if (!search_member(candidate)) return;
    const double d = tuple_dist_upper(a, candidate);
    if (d < best) {
        best = d;
        witness = std::move(candidate);
    }
}

}  // namespace

const char* lower_method_name(LowerMethod m) {
    switch (m) {
        case LowerMethod::kTrivialZero: return "trivial-zero";
        case LowerMethod::kWinding: return "winding";
        case LowerMethod::kNormBound: return "norm-bound";
    }
    return "trivial-zero";
}

// Sampled fields run on vertexwise semantics throughout the constructions
// below: distances, membership and residuals are taken fiber by fiber.  The
// between-sample slack would otherwise reject every useful b near a tuple
// that vanishes somewhere, because filling the flat spot forces a steep
// phase slope.
static void certify_member(const Tuple& t, double margin) {
    if (t.algebra().is_field()) {
        if (!is_lg_fiberwise(t, margin).member)
            throw CertificateError("tuple is not invertible at every fiber");
    } else {
        certify_in_lg(t, margin);
    }
}

static double closeness(const Tuple& a, const Tuple& b) {
    return a.algebra().is_field() ? tuple_dist(a, b) : tuple_dist_upper(a, b);
}

Tuple shift_into_lg(const Tuple& a, const Tuple& b, double beta) {
    if (a.size() != b.size() || !(a.algebra() == b.algebra()))
        throw PreconditionError("shift_into_lg: tuples live over different algebras");
    certify_member(b, kSearchMargin);
    const double d = closeness(a, b);
    if (!(beta > d))
        throw PreconditionError("shift_into_lg: beta must exceed ||a - b||, got beta = " +
                                std::to_string(beta) + " vs " + std::to_string(d));
    const Tuple w = tuple_polar(b).isometry;
    Tuple result = a + Complex(beta, 0.0) * w;
    // The shift has smallest singular value at least beta - ||a - b||.
    const double floor = beta - d;
    certify_member(result, std::min(kSearchMargin, 0.25 * floor * floor));
    return result;
}

Tuple section_at_level(const Tuple& a, double gamma, const Tuple& b) {
    if (a.size() != b.size() || !(a.algebra() == b.algebra()))
        throw PreconditionError("section_at_level: tuples live over different algebras");
    if (!(gamma > 0.0)) throw PreconditionError("section_at_level: gamma must be positive");
    certify_member(b, kSearchMargin);
    const double d = closeness(a, b);
    if (!(d < gamma))
        throw PreconditionError("section_at_level: ||a - b|| = " + std::to_string(d) +
                                " must be below gamma = " + std::to_string(gamma));

    const double beta = 0.5 * (d + gamma);
    const Tuple w = tuple_polar(b).isometry;
    const Tuple shifted = a + Complex(beta, 0.0) * w;

    // Middle factor (1 + beta psi(|a|) v* w)^(-1), built without ever forming
    // the polar direction v of a: v psi(|a|) stays inside the algebra as a
    // right multiplication of a.
    const Tuple v_psi = tuple_right_multiplier(a, ScalarProfile::vanishing_cap_inverse(gamma));
    const Element arg = Element::one(a.algebra()) + Complex(beta, 0.0) * inner(v_psi, w);
    // ||beta psi(|a|) v* w|| <= beta/gamma < 1 keeps the inverse bounded.
    const Element middle = element_inverse(arg, 1.0 - beta / gamma);
    const Element phi_abs = element_func_calc(tuple_abs(a), ScalarProfile::cap_inverse(gamma));

    const Tuple s = mul_element(mul_element(shifted, middle), phi_abs);

    const bool field = a.algebra().is_field();
    certify_member(s, kSearchMargin);

    // Agreement check: above the level gamma the section reproduces the polar
    // direction of a.  Fibers where gamma touches the singular spectrum are
    // rejected (matrix algebras) or skipped (sampled fields).
    double residual = 0.0;
    const std::size_t fibers = a.algebra().fiber_count();
    for (std::size_t f = 0; f < fibers; ++f) {
        const ComplexMatrix stack = a.stack_fiber(f);
        const std::size_t rows = stack.rows();
        const std::size_t k = stack.cols();
        const ComplexMatrix outer = (stack * stack.adjoint()).hermitian_part();
        const EigenDecomposition eig = herm_eig(outer);

        bool gap_ok = true;
        double offending = 0.0;
        for (double lambda : eig.eigenvalues) {
            const double sg = std::sqrt(std::max(lambda, 0.0));
            if (std::abs(sg - gamma) < kDefaultGapDelta) {
                gap_ok = false;
                offending = sg;
            }
        }
        if (!gap_ok) {
            if (field) continue;
            throw GapError(offending, gamma,
                           "section_at_level: gamma is not separated from the singular values");
        }

        // (1 - f_gamma) v  and  (1 - f_gamma) s  on the certified subspace.
        ComplexMatrix proj_v(rows, k);
        ComplexMatrix proj(rows, rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const double sg = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
            if (sg <= gamma) continue;
            std::vector<Complex> u(rows);
            for (std::size_t r = 0; r < rows; ++r) u[r] = eig.eigenvectors(r, i);
            std::vector<Complex> vtil(k, Complex(0.0, 0.0));
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t r = 0; r < rows; ++r) vtil[c] += std::conj(stack(r, c)) * u[r];
            for (auto& z : vtil) z /= sg;
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < k; ++c) proj_v(r, c) += u[r] * std::conj(vtil[c]);
                for (std::size_t c = 0; c < rows; ++c) proj(r, c) += u[r] * std::conj(u[c]);
            }
        }
        ComplexMatrix diff = proj_v - proj * s.stack_fiber(f);
        residual = std::max(residual, op_norm(diff));
    }
    if (residual > kSectionResidualTol)
        throw CertificateError("section_at_level: agreement residual " +
                               std::to_string(residual) + " exceeds tolerance");
    return s;
}

std::pair<Tuple, double> dist_upper_candidate(const Tuple& a, double lambda) {
    if (!(lambda >= 0.0))
        throw PreconditionError("dist_upper_candidate: lambda must be nonnegative");
    if (lambda == 0.0) return {a, 0.0};
    Tuple c = tuple_right_multiplier(a, ScalarProfile::pos_part_shift(lambda));
    const double bound = tuple_dist(a, c);
    return {std::move(c), bound};
}

WindingBound winding_lower_bound(const Tuple& a) {
    WindingBound out;
    const Algebra& algebra = a.algebra();
    if (a.size() != 1 || !algebra.is_field()) return out;
    const SimplicialMesh& mesh = *algebra.mesh();
    if (!mesh.two_dimensional()) return out;
    if (algebra.fiber_dim(0) != 1) return out;

    const auto& cycle = mesh.boundary_cycle();
    const std::size_t m = cycle.size();
    if (m < 3) return out;

    const Element& e = a.entry(0);
    const double slope = e.lipschitz();
    std::vector<Complex> samples(m);
    for (std::size_t j = 0; j < m; ++j) samples[j] = e.fiber(cycle[j])(0, 0);

    double floor = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t jn = (j + 1) % m;
        const auto& p = mesh.vertices()[cycle[j]];
        const auto& q = mesh.vertices()[cycle[jn]];
        const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
        const double here = std::abs(samples[j]);
        const double next = std::abs(samples[jn]);
        // The boundary modulus must dominate the possible drift along each
        // edge, otherwise a zero could hide between samples.
        if (!(slope * len < here)) return out;
        const double edge_floor = 0.5 * (here + next - slope * len);
        if (!(edge_floor > 0.0)) return out;
        floor = std::min(floor, edge_floor);
    }

    long turns = 0;
    try {
        turns = winding_number(samples);
    } catch (const ContractViolation&) {
        return out;
    }
    out.winding = turns;
    if (turns == 0) return out;
    out.lower = floor;
    out.certified = true;
    return out;
}

DistanceCertificate dist_to_lg(const Tuple& a, std::uint64_t budget) {
    DistanceCertificate cert;
    const double norm_a = tuple_norm(a);
    // The zero tuple is a limit of members, so the norm is always an upper
    // bound regardless of what the search finds.
    cert.upper = norm_a;
    if (norm_a == 0.0) return cert;

    SearchState state{budget};

    if (state.take(1) && search_member(a)) {
        cert.lower = 0.0;
        cert.upper = 0.0;
        cert.upper_witness = a;
        cert.lower_method = LowerMethod::kNormBound;
        return cert;
    }

    if (state.take(1)) {
        const WindingBound wb = winding_lower_bound(a);
        if (wb.certified) {
            cert.lower = wb.lower;
            cert.lower_method = LowerMethod::kWinding;
        }
    }

    const Algebra& algebra = a.algebra();
    const std::size_t n = a.size();
    double best = std::numeric_limits<double>::infinity();
    std::optional<Tuple> witness;

    // Shifted-modulus candidates on a log grid, snapped away from the
    // singular values so the shift profile is stable.
    std::vector<double> sigmas;
    if (state.take(1)) {
        for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
            const EigenDecomposition eig =
                herm_eig((a.stack_fiber(f).adjoint() * a.stack_fiber(f)).hermitian_part());
            for (double l : eig.eigenvalues) sigmas.push_back(std::sqrt(std::max(l, 0.0)));
        }
    }
    const double snap = 1e-6 * norm_a;
    for (int j = 31; j >= 0; --j) {
        if (!state.take(2)) break;
        double lambda = norm_a * std::pow(10.0, -5.0 * (31.0 - j) / 31.0);
        for (int tries = 0; tries < 8; ++tries) {
            bool close = false;
            for (double s : sigmas)
                if (std::abs(lambda - s) < snap) close = true;
            if (!close) break;
            lambda -= 2.0 * snap;
        }
        if (!(lambda > 0.0)) continue;
        consider(a, dist_upper_candidate(a, lambda).first, best, witness);
    }

    if (algebra.is_field()) {
        // Constant nudges: first on top of a (helps when a is merely grazing
        // zero), then standalone scaled constants as a universal fallback.
        static const double kSteps[] = {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3,
                                        5e-4, 2e-4, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8,
                                        1e-9, 1e-10};
        for (std::size_t slot = 0; slot < n && state.left > 0; ++slot) {
            for (double step : kSteps) {
                for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
                    if (!state.take(1)) break;
                    const double eps = step * norm_a;
                    std::vector<Element> entries = a.entries();
                    entries[slot] += Element::constant(algebra, eps * dir);
                    consider(a, Tuple(std::move(entries)), best, witness);
                }
            }
        }
        for (double step : kSteps) {
            if (!state.take(1)) break;
            std::vector<Element> entries;
            for (std::size_t i = 0; i < n; ++i) entries.push_back(Element::zero(algebra));
            entries[0] = Element::constant(algebra, Complex(step * norm_a, 0.0));
            consider(a, Tuple(std::move(entries)), best, witness);
        }
    } else {
        // Singular value shifts per fiber.
        for (double step : {1e-7, 1e-9}) {
            if (!state.take(1)) break;
            consider(a, tuple_sigma_shift(a, step * norm_a), best, witness);
        }
    }

    // Pull the best witness toward a while it stays certified.
    if (witness) {
        Tuple diff = *witness - a;
        double scale = 1.0;
        for (int step = 0; step < 60; ++step) {
            if (!state.take(1)) break;
            const double next = 0.5 * scale;
            Tuple candidate = a + Complex(next, 0.0) * diff;
            if (!candidate.all_finite() || !search_member(candidate)) break;
            const double d = tuple_dist_upper(a, candidate);
            if (d >= best) break;
            best = d;
            witness = std::move(candidate);
            scale = next;
        }
    }

    // The witness keeps its slot even when the norm bound is marginally
    // tighter, as long as it achieves the reported bound to certificate
    // tolerance.
    if (witness) {
        if (best < cert.upper) {
            cert.upper = best;
            cert.upper_witness = std::move(witness);
        } else if (best <= cert.upper + 1e-9) {
            cert.upper_witness = std::move(witness);
        }
    }
    if (cert.lower > cert.upper)
        throw ContractViolation("dist_to_lg: certified bounds crossed");
    return cert;
}

Tuple max_distance_witness(const Tuple& a, const DistanceCertificate& cert) {
    if (!(cert.lower > 0.0))
        throw PreconditionError("max_distance_witness: needs a positive certified lower bound");
    const double gamma = 0.5 * (cert.lower + cert.upper);
    Tuple b = tuple_right_multiplier(a, ScalarProfile::ramp_clip(gamma));
    double norm_b = tuple_norm(b);
    if (norm_b > 1.0 + 1e-9)
        throw CertificateError("max_distance_witness: norm " + std::to_string(norm_b) +
                               " exceeds 1");
    // Rounding can push the computed norm a few ulps past 1; rescale so the
    // witness lands inside the closed unit ball as measured.
    while (norm_b > 1.0) {
        b *= Complex(1.0 - 4e-16, 0.0);
        norm_b = tuple_norm(b);
    }
    return b;
}

}  // namespace csrank
