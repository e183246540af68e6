#pragma once

#include "csrank/tuple.hpp"

namespace csrank {

// Certificate that a tuple is left invertible: the gram matrix a*a is
// invertible with a quantified spectral margin.
struct LgCertificate {
    bool member = false;
    double sigma_min = 0.0;  // smallest eigenvalue of a*a across fibers
    double margin = 0.0;     // effective margin the test ran against
};

// Membership test.  sigma_min must exceed the margin at every fiber.  For
// sampled fields the effective margin is raised to the squared edge slack
// (stack budget times max edge length) so invertibility extends from the
// vertex samples to the whole region; the certificate records the raised
// margin, which keeps the test monotone in the requested margin.
LgCertificate is_lg(const Tuple& a, double margin);

// Vertexwise variant: certifies each fiber separately without the
// between-sample slack.  For matrix algebras it coincides with is_lg.
LgCertificate is_lg_fiberwise(const Tuple& a, double margin);

// is_lg that throws CertificateError instead of returning member = false.
LgCertificate certify_in_lg(const Tuple& a, double margin);

}  // namespace csrank
