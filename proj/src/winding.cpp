#include "csrank/winding.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "csrank/error.hpp"

namespace csrank {

long winding_number(const std::vector<Complex>& loop) {
    if (loop.size() < 2) throw PreconditionError("loop needs at least two samples");
    double total = 0.0;
    for (std::size_t j = 0; j < loop.size(); ++j) {
        const Complex w = loop[j];
        const Complex next = loop[(j + 1) % loop.size()];
        const double modulus = std::abs(w);
        if (modulus == 0.0 || std::abs(next - w) >= modulus) {
            throw UncertifiableLoop(j, "loop step at index " + std::to_string(j) +
                                           " moves at least as far as the sample's modulus");
        }
        total += std::arg(next / w);
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-6) {
        throw ContractViolation("winding sum failed to reach an integer");
    }
    return static_cast<long>(rounded);
}

}  // namespace csrank
