#include "csrank/profiles.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "csrank/error.hpp"

namespace csrank {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ContractViolation(std::string("profile parameter must be positive: ") + what);
    }
}
}  // namespace

ScalarProfile ScalarProfile::identity() { return {Kind::Identity, 0.0}; }
ScalarProfile ScalarProfile::one() { return {Kind::One, 0.0}; }
ScalarProfile ScalarProfile::sqrt() { return {Kind::Sqrt, 0.0}; }
ScalarProfile ScalarProfile::inv_sqrt() { return {Kind::InvSqrt, 0.0}; }

ScalarProfile ScalarProfile::pos_part_shift(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ContractViolation("pos_part_shift: lambda must be >= 0");
    }
    return {Kind::PosPartShift, lambda};
}

ScalarProfile ScalarProfile::cap_inverse(double gamma) {
    require_positive(gamma, "cap_inverse gamma");
    return {Kind::CapInverse, gamma};
}

ScalarProfile ScalarProfile::vanishing_cap_inverse(double gamma) {
    require_positive(gamma, "vanishing_cap_inverse gamma");
    return {Kind::VanishingCapInverse, gamma};
}

ScalarProfile ScalarProfile::ramp_clip(double gamma) {
    require_positive(gamma, "ramp_clip gamma");
    return {Kind::RampClip, gamma};
}

ScalarProfile ScalarProfile::normalized_direction(double eps) {
    require_positive(eps, "normalized_direction eps");
    return {Kind::NormalizedDirection, eps};
}

double ScalarProfile::operator()(double t) const {
    if (t < 0.0 && t > -1e-14) t = 0.0;  // tolerate spectral roundoff
    if (t < 0.0) throw DomainError("profile evaluated at negative t");
    const double g = param_;
    switch (kind_) {
        case Kind::Identity:
            return t;
        case Kind::One:
            return 1.0;
        case Kind::Sqrt:
            return std::sqrt(t);
        case Kind::InvSqrt:
            if (t <= 0.0) throw DomainError("inv_sqrt undefined at t = 0");
            return 1.0 / std::sqrt(t);
        case Kind::PosPartShift:
            return t > g ? t - g : 0.0;
        case Kind::CapInverse:
            return t <= g ? 1.0 / g : 1.0 / t;
        case Kind::VanishingCapInverse:
            return t <= g ? t / (g * g) : 1.0 / t;
        case Kind::RampClip:
            return t >= g ? 1.0 : t / g;
        case Kind::NormalizedDirection:
            return t / std::max(t, g);
    }
    throw ContractViolation("profile: unknown kind");
}

bool ScalarProfile::ratio_bounded_at_zero() const {
    switch (kind_) {
        case Kind::Identity:
        case Kind::PosPartShift:
        case Kind::VanishingCapInverse:
        case Kind::RampClip:
        case Kind::NormalizedDirection:
            return true;
        default:
            return false;
    }
}

double ScalarProfile::ratio(double t) const {
    if (t < 0.0 && t > -1e-14) t = 0.0;
    if (t < 0.0) throw DomainError("profile ratio evaluated at negative t");
    const double g = param_;
    switch (kind_) {
        case Kind::Identity:
            return 1.0;
        case Kind::PosPartShift:
            if (g == 0.0) return 1.0;
            return t > g ? (t - g) / t : 0.0;
        case Kind::VanishingCapInverse:
            return t <= g ? 1.0 / (g * g) : 1.0 / (t * t);
        case Kind::RampClip:
            return t <= g ? 1.0 / g : 1.0 / t;
        case Kind::NormalizedDirection:
            return 1.0 / std::max(t, g);
        default:
            throw DomainError("profile ratio unbounded at zero: " + name());
    }
}

double ScalarProfile::lipschitz_on(double hi, double lo) const {
    const double g = param_;
    switch (kind_) {
        case Kind::Identity:
            return 1.0;
        case Kind::One:
            return 0.0;
        case Kind::Sqrt:
            return lo > 0.0 ? 0.5 / std::sqrt(lo) : kInf;
        case Kind::InvSqrt:
            return lo > 0.0 ? 0.5 / (lo * std::sqrt(lo)) : kInf;
        case Kind::PosPartShift:
            return 1.0;
        case Kind::CapInverse:
            if (hi <= g) return 0.0;
            return 1.0 / (std::max(g, lo) * std::max(g, lo));
        case Kind::VanishingCapInverse:
            return 1.0 / (g * g);
        case Kind::RampClip:
            return 1.0 / g;
        case Kind::NormalizedDirection:
            return 1.0 / g;
    }
    throw ContractViolation("profile: unknown kind");
}

double ScalarProfile::ratio_lipschitz_on(double hi) const {
    (void)hi;
    const double g = param_;
    switch (kind_) {
        case Kind::Identity:
            return 0.0;
        case Kind::PosPartShift:
            return g > 0.0 ? 1.0 / g : 0.0;
        case Kind::VanishingCapInverse:
            return 2.0 / (g * g * g);
        case Kind::RampClip:
            return 1.0 / (g * g);
        case Kind::NormalizedDirection:
            return 1.0 / (g * g);
        default:
            return kInf;
    }
}

double ScalarProfile::plane_map_lipschitz() const {
    const double g = param_;
    switch (kind_) {
        case Kind::Identity:
            return 1.0;
        case Kind::PosPartShift:
            return 1.0;  // soft threshold (prox of g*|.|) is nonexpansive
        case Kind::VanishingCapInverse:
            return 1.0 / (g * g);  // linear below g, plane inversion above
        case Kind::RampClip:
            return 1.0 / g;  // 1/g times metric projection onto |w| <= g
        case Kind::NormalizedDirection:
            return 1.0 / g;  // projection onto unit disk after scaling by 1/g
        default:
            return kInf;
    }
}

double ScalarProfile::sup_on(double hi) const {
    const double g = param_;
    switch (kind_) {
        case Kind::Identity:
            return hi;
        case Kind::One:
            return 1.0;
        case Kind::Sqrt:
            return std::sqrt(hi);
        case Kind::InvSqrt:
            return kInf;
        case Kind::PosPartShift:
            return hi > g ? hi - g : 0.0;
        case Kind::CapInverse:
            return 1.0 / g;
        case Kind::VanishingCapInverse:
            return hi >= g ? 1.0 / g : hi / (g * g);
        case Kind::RampClip:
            return hi >= g ? 1.0 : hi / g;
        case Kind::NormalizedDirection:
            return hi >= g ? 1.0 : hi / g;
    }
    throw ContractViolation("profile: unknown kind");
}

double ScalarProfile::ratio_sup_on(double hi) const {
    const double g = param_;
    switch (kind_) {
        case Kind::Identity:
            return 1.0;
        case Kind::PosPartShift:
            if (g == 0.0) return 1.0;
            return hi > g ? (hi - g) / hi : 0.0;
        case Kind::VanishingCapInverse:
            return 1.0 / (g * g);
        case Kind::RampClip:
            return 1.0 / g;
        case Kind::NormalizedDirection:
            return 1.0 / g;
        default:
            return kInf;
    }
}

std::string ScalarProfile::name() const {
    const char* base = "";
    bool with_param = true;
    switch (kind_) {
        case Kind::Identity:
            base = "identity";
            with_param = false;
            break;
        case Kind::One:
            base = "one";
            with_param = false;
            break;
        case Kind::Sqrt:
            base = "sqrt";
            with_param = false;
            break;
        case Kind::InvSqrt:
            base = "inv_sqrt";
            with_param = false;
            break;
        case Kind::PosPartShift:
            base = "pos_part_shift";
            break;
        case Kind::CapInverse:
            base = "cap_inverse";
            break;
        case Kind::VanishingCapInverse:
            base = "vanishing_cap_inverse";
            break;
        case Kind::RampClip:
            base = "ramp_clip";
            break;
        case Kind::NormalizedDirection:
            base = "normalized_direction";
            break;
    }
    if (!with_param) return base;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s(%.9g)", base, param_);
    return buf;
}

}  // namespace csrank
