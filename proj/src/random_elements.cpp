#include "csrank/random_elements.hpp"

#include <string>
#include <vector>

#include "csrank/error.hpp"
#include "csrank/rng.hpp"

namespace csrank {

namespace {

ComplexMatrix random_matrix(Rng& rng, std::size_t k, double scale) {
    ComplexMatrix m(k, k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) {
            m(r, c) = scale * rng.cgaussian();
        }
    }
    return m;
}

}  // namespace

Tuple random_element(const Algebra& algebra, std::size_t n, std::uint64_t seed, double scale) {
    if (n == 0) throw PreconditionError("tuple needs at least one entry");
    Rng root(seed);
    std::vector<Element> entries;
    entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = root.fork(i);
        if (algebra.is_field()) {
            const std::size_t k = algebra.fiber_dim(0);
            const ComplexMatrix c0 = random_matrix(rng, k, scale);
            const ComplexMatrix c1 = random_matrix(rng, k, scale);
            const ComplexMatrix c2 = random_matrix(rng, k, scale);
            entries.push_back(Element::from_affine(algebra, c0, c1, c2));
        } else {
            std::vector<ComplexMatrix> fibers;
            fibers.reserve(algebra.fiber_count());
            for (std::size_t f = 0; f < algebra.fiber_count(); ++f) {
                fibers.push_back(random_matrix(rng, algebra.fiber_dim(f), scale));
            }
            entries.push_back(Element::from_fibers(algebra, std::move(fibers), 0.0));
        }
    }
    return Tuple(std::move(entries));
}

Tuple random_lg_member(const Algebra& algebra, std::size_t n, std::uint64_t seed, double scale,
                       double margin, int max_tries) {
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        Tuple candidate = random_element(algebra, n, seed + static_cast<std::uint64_t>(attempt),
                                         scale);
        if (is_lg(candidate, margin).member) return candidate;
    }
    throw ContractViolation("no certified member found in " + std::to_string(max_tries) +
                            " random draws");
}

}  // namespace csrank
