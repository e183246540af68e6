#pragma once

#include <stdexcept>
#include <string>

namespace csrank {

// Raised when an operation is invoked outside its contract
// (bad dimensions, non-Hermitian input where Hermitian is required, ...).
struct ContractViolation : std::runtime_error {
    explicit ContractViolation(const std::string& what) : std::runtime_error(what) {}
};

// A stated precondition of a documented operation does not hold.
struct PreconditionError : ContractViolation {
    explicit PreconditionError(const std::string& what) : ContractViolation(what) {}
};

// A certificate handed to an operation does not certify what it must.
struct CertificateError : ContractViolation {
    explicit CertificateError(const std::string& what) : ContractViolation(what) {}
};

// A scalar profile was evaluated outside its domain.
struct DomainError : ContractViolation {
    explicit DomainError(const std::string& what) : ContractViolation(what) {}
};

// Spectral projection requested at a level with an eigenvalue closer than delta.
struct GapError : ContractViolation {
    double eigenvalue;
    double level;
    GapError(double eig, double lvl, const std::string& what)
        : ContractViolation(what), eigenvalue(eig), level(lvl) {}
};

// Discrete loop moves too fast for its winding number to be trusted.
struct UncertifiableLoop : ContractViolation {
    std::size_t index;
    UncertifiableLoop(std::size_t idx, const std::string& what)
        : ContractViolation(what), index(idx) {}
};

// Bad user-facing configuration (missing file, nonpositive budget, ...).
// The CLI maps this to exit code 2; everything above maps to exit code 3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csrank
