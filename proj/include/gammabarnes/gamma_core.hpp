#pragma once
#include <span>
#include <utility>
#include <vector>

#include "gammabarnes/errors.hpp"
#include "gammabarnes/field_point.hpp"

namespace gammabarnes {

// Classification tolerance: arguments closer than this to a lattice pole/zero
// are treated as exactly singular.
inline constexpr double kPoleTol = 1e-9;

enum class Kind { FINITE, ZERO, POLE };

// Value of a Gamma-type expression with its singularity structure made
// explicit. order > 0 for ZERO and POLE; value is 0 exactly for ZERO and
// NaN-flagged for POLE.
struct GammaValue {
    cxd value{0.0, 0.0};
    Kind kind = Kind::FINITE;
    int order = 0;

    bool finite() const { return kind == Kind::FINITE; }
};

// Principal-branch log Gamma. Relative accuracy ~1e-14 away from poles for
// |z| up to ~1e3. Throws PoleError within kPoleTol of a nonpositive integer.
cxd log_gamma(cxd z);

namespace detail {
// Unchecked kernel (no pole guard); used by inner quadrature loops.
cxd log_gamma_unchecked(cxd z);
// Additive fault-injection nudge for the self-test; 0 in normal operation.
double& log_gamma_nudge();
} // namespace detail

// Complex-field Gamma function of one field point:
//   bgamma(u) = Gamma(u_hol) / Gamma(1 - u_anti),
// with poles (u_hol nonpositive integer), zeros (1 - u_anti nonpositive
// integer), and balanced pole/zero collisions resolved to their finite limit.
GammaValue bgamma(const FieldPoint& u);

enum class PmMode { PLUS_MINUS, FULL };

// Product of field Gammas over sign combinations of b (PLUS_MINUS: a+b, a-b;
// FULL: all four of +-a +-b). Singular factors compose by order bookkeeping;
// a net-zero order product is resolved to its finite limit along a
// perturbation of a.nu.
GammaValue bgamma_pm(const FieldPoint& a, const FieldPoint& b, PmMode mode);

namespace detail {
// Product of bgamma factors where column i moves with rate[i] * eps on its nu
// when taking limits of balanced singular products. The workhorse behind
// bgamma_pm, S_prop and D_prop.
GammaValue bgamma_product(std::span<const FieldPoint> cols, std::span<const double> rates);
} // namespace detail

} // namespace gammabarnes
