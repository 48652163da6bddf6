#pragma once
#include <optional>
#include <string>
#include <vector>

#include "gammabarnes/mb_quadrature.hpp"
#include "gammabarnes/propagators.hpp"

namespace gammabarnes {

enum class IdentityTag {
    GUSTAFSON_I,
    GUSTAFSON_II,
    REDUCED_I,
    REDUCED_I_GAMMA,
    REDUCED_II,
    REDUCED_II_GAMMA,
    CHAIN_S,
    STAR_TRIANGLE_S,
    CHAIN_D,
    STAR_TRIANGLE_D,
    DUAL_QUANTIZED_I,
    DUAL_QUANTIZED_II,
    ZETA_POLE,
};

enum class ParityVariant { NONE, V1A, V1B, V2A, V2B };

struct IdentityKind {
    IdentityTag tag = IdentityTag::GUSTAFSON_I;
    int N = 1;
    LatticeSector sector = LatticeSector::INTEGER;
    ParityVariant parity_variant = ParityVariant::NONE; // STAR_TRIANGLE_D only
};

const char* tag_name(IdentityTag tag);
const char* variant_name(ParityVariant v);

// Sampled parameters. Which lists are populated depends on the tag:
// z/w columns for the integral families, alpha + points for the propagator
// identities, zeta for the pole-approach family.
struct IdentityParams {
    std::vector<Column> z;
    std::vector<Column> w;
    std::vector<Index> alpha;
    std::vector<FieldPoint> points;
    double zeta = 0.0;
};

enum class Strategy { QUADRATURE, DETERMINANT, BOTH };

struct IdentityCase {
    IdentityKind kind;
    IdentityParams params;
    MeasureSpec spec;
    Strategy strategy = Strategy::QUADRATURE;
    double tolerance = 1e-6;
    unsigned seed = 0;
};

struct VerificationReport {
    ValueWithError lhs;
    ValueWithError rhs;
    double residual = 0.0; // relative when |rhs| > 1e-10, absolute otherwise
    bool passed = false;
    std::string case_digest;
    double wall_time = 0.0;
};

// Deterministic parameter sampling: same (kind, seed) always yields the same
// params; sum constraints are solved exactly on the last parameter; decay
// margin >= 0.1 and contour margin >= 0.05 are enforced by bounded resampling.
IdentityParams sample_params(const IdentityKind& kind, unsigned seed);

// Case assembly with the default MeasureSpec, strategy and tolerance for the
// kind (1e-6 one-fold quadrature, 1e-4 two-fold, 1e-5 determinant).
IdentityCase make_case(const IdentityKind& kind, unsigned seed);

bool check_constraints(const IdentityCase& c);

VerificationReport eval_gustafson(const IdentityCase& c);
VerificationReport eval_reduced(const IdentityCase& c);
VerificationReport eval_star_triangle(const IdentityCase& c);
VerificationReport eval_dual_quantized(const IdentityCase& c);

// Pole-approach extrapolation: evaluates the one-fold integral along
// zeta = 1 + eps, fits the simple-pole model, extrapolates (1 - zeta) * I to
// eps -> 0 and compares with the constrained-point product. Throws FitError
// when the pole model explains less than 99% of the variance.
VerificationReport zeta_pole_check(const IdentityCase& c, std::span<const double> eps_seq);

// Dispatch on tag (ZETA_POLE uses the default eps sequence).
VerificationReport verify_case(const IdentityCase& c);

// Spec-shaped convenience wrapper for the decay exponent of a case's
// integral family.
double decay_exponent_for(const IdentityCase& c);

inline constexpr double kDefaultZetaEps[4] = {0.2, 0.1, 0.05, 0.025};

} // namespace gammabarnes
