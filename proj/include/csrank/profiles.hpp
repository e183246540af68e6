#pragma once

#include <string>

namespace csrank {

// Closed-form scalar profiles used in functional calculus.  Keeping the set
// closed (no user lambdas) makes every spectral computation auditable: a
// profile is a named shape plus one parameter.
//
//   identity                 t
//   one                      1
//   sqrt                     sqrt(t)
//   inv_sqrt                 t^(-1/2)            (domain t > 0)
//   pos_part_shift(l)        max(t - l, 0)
//   cap_inverse(g)           min(1/g, 1/t)       (value 1/g at t = 0)
//   vanishing_cap_inverse(g) min(t/g^2, 1/t)     (value 0 at t = 0)
//   ramp_clip(g)             min(t/g, 1)
//   normalized_direction(e)  t / max(t, e)
//
// For profiles psi with psi(0) = 0 the ratio q(t) = psi(t)/t extends
// continuously to t = 0; right-multiplier calculus relies on that extension.
class ScalarProfile {
public:
    enum class Kind {
        Identity,
        One,
        Sqrt,
        InvSqrt,
        PosPartShift,
        CapInverse,
        VanishingCapInverse,
        RampClip,
        NormalizedDirection,
    };

    static ScalarProfile identity();
    static ScalarProfile one();
    static ScalarProfile sqrt();
    static ScalarProfile inv_sqrt();
    static ScalarProfile pos_part_shift(double lambda);
    static ScalarProfile cap_inverse(double gamma);
    static ScalarProfile vanishing_cap_inverse(double gamma);
    static ScalarProfile ramp_clip(double gamma);
    static ScalarProfile normalized_direction(double eps);

    // Value at t >= 0.  DomainError if the profile is undefined there.
    double operator()(double t) const;

    // Whether q(t) = f(t)/t stays bounded as t -> 0+.
    bool ratio_bounded_at_zero() const;

    // q(t) = f(t)/t with its continuous extension at t = 0.
    double ratio(double t) const;

    // Lipschitz constant of the profile on [lo, hi] (may be +inf).
    double lipschitz_on(double hi, double lo = 0.0) const;

    // Lipschitz constant of q on [0, hi].
    double ratio_lipschitz_on(double hi) const;

    // Global Lipschitz constant on C of the plane map w -> w * q(|w|).
    // Only meaningful for ratio-bounded profiles; +inf otherwise.
    double plane_map_lipschitz() const;

    // max of f on [0, hi]
    double sup_on(double hi) const;

    // max of q on [0, hi]
    double ratio_sup_on(double hi) const;

    Kind kind() const { return kind_; }
    double param() const { return param_; }
    std::string name() const;

private:
    ScalarProfile(Kind k, double p) : kind_(k), param_(p) {}
    Kind kind_;
    double param_;
};

}  // namespace csrank
