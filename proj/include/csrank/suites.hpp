#pragma once

#include <cstddef>
#include <cstdint>

namespace csrank {

// Outcome of one randomized verification suite.  exercised counts the
// instances that met the suite's generation precondition; passes counts those
// whose checked property held.  A healthy run has
// passes == exercised == requested.
struct SuiteReport {
    std::size_t requested = 0;
    std::size_t exercised = 0;
    std::size_t passes = 0;
};

// Random tuples pushed into the left-invertible set along a certified
// direction at radius ||a - b|| + 0.1; each output must certify with margin
// 1e-8.
SuiteReport shift_suite(std::size_t instances, std::uint64_t seed);

// Certified tuples sectioned at a spectral level with clearance on both
// sides; each section must certify, and its agreement with the polar
// direction above the level is re-verified here with the dense kernels, not
// taken from the section code.
SuiteReport section_suite(std::size_t instances, std::uint64_t seed);

// Shifted-modulus candidates on a 9-point level grid: each candidate stays
// within level + 1e-8 of its source, and whenever a section through the
// certificate witness succeeds at a level, the certified upper distance
// bound lies below level + 1e-6.
SuiteReport level_grid_suite(std::size_t instances, std::uint64_t seed);

}  // namespace csrank
