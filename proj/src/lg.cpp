#include "csrank/lg.hpp"

#include <algorithm>

#include "csrank/error.hpp"

namespace csrank {

namespace {

LgCertificate check(const Tuple& a, double margin, bool with_slack) {
    if (!(margin > 0.0)) throw PreconditionError("membership margin must be positive");
    double effective = margin;
    if (with_slack && a.algebra().is_field()) {
        const double slack = a.stack_lipschitz() * a.algebra().max_edge();
        effective = std::max(effective, slack * slack);
    }
    LgCertificate cert;
    cert.sigma_min = a.sigma_min_sq();
    cert.margin = effective;
    cert.member = cert.sigma_min > effective;
    return cert;
}

}  // namespace

LgCertificate is_lg(const Tuple& a, double margin) { return check(a, margin, true); }

LgCertificate is_lg_fiberwise(const Tuple& a, double margin) { return check(a, margin, false); }

LgCertificate certify_in_lg(const Tuple& a, double margin) {
    LgCertificate cert = is_lg(a, margin);
    if (!cert.member) {
        throw CertificateError("tuple is not certifiably left invertible at the given margin");
    }
    return cert;
}

}  // namespace csrank
