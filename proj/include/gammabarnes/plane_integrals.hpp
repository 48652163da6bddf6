#pragma once
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gammabarnes/identity_suite.hpp"
#include "gammabarnes/propagators.hpp"

namespace gammabarnes {

using Rational = boost::multiprecision::cpp_rational;

enum class PlaneMethod { POLAR_GRID, QMC };

// Plane integration plan. Singular behavior must be declared up front:
// |u - center_j|^(-local_exponents[j]) near each center and an overall
// |u|^(-tail_exponent) envelope at infinity (per integration variable).
struct PlaneScheme {
    PlaneMethod method = PlaneMethod::QMC;
    double R_max = 20.0;
    long long cells_or_samples = 1000000;
    std::vector<PlanePoint> singularity_centers;
    std::vector<double> local_exponents;
    double tail_exponent = 4.0;
    unsigned seed = 7;
};

// k-fold integral over C^k with the plain Lebesgue measure d^2u per variable.
// POLAR_GRID (k = 1 only): graded polar meshes around each center, the
// remainder by per-ray interval subtraction, the exterior through the
// inversion u -> 1/u. QMC (any k <= 3): scrambled Halton points weighted by an
// importance mixture of center balls, a covering disk and a power-law tail.
ValueWithError integrate_c2(const std::function<cxd(std::span<const PlanePoint>)>& f, int k,
                            const PlaneScheme& scheme);

enum class PlaneKind { CHAIN_C, STAR_TRIANGLE_C, LF, LF1, DF_DUALITY };

const char* plane_kind_name(PlaneKind kind);

// Parameters of the plane identities: exponent indices (twice_m even so the
// power functions are single-valued) and external points. n/m give the fold
// split of the two-sided duality relation; LF uses N = points - 1 folds and
// LF1 uses N - 1.
struct PlaneParams {
    std::vector<Index> alpha;
    std::vector<PlanePoint> points;
    int n = 1;
    int m = 0;
};

// Scheme with centers, local exponents and tail envelope derived from the
// parameters of the given identity (left-hand integrand).
PlaneScheme make_plane_scheme(PlaneKind kind, const PlaneParams& params, PlaneMethod method,
                              long long budget);

// Evaluates the identity: integral(s) against the closed form, or for the
// two-sided duality the left integral against prefactor times right integral.
VerificationReport eval_classical(PlaneKind kind, const PlaneParams& params,
                                  const PlaneScheme& scheme, double tolerance = 1e-3);

struct QuasiclassicalReport {
    std::vector<double> L;
    std::vector<double> deviation; // relative, against the plane closed form
    double fitted_exponent = 0.0;  // slope of log dev vs log L
    bool monotone = false;
};

// Scaling check of the lattice relations toward their plane limits: evaluates
// the chain or star-triangle lattice integral at external points L*z, applies
// the L^(2<alpha>) propagator scalings and the 1/L^2 measure factor, and
// compares with the plane closed form for each L.
QuasiclassicalReport quasiclassical_check(PlaneKind identity, std::span<const double> L_list);

// Partial-fraction summation identity in exact rational arithmetic:
//   sum_k prod_i(b_i - t_k) / (t_k prod_{j != k}(t_j - t_k)) = prod b / prod t - 1.
// Returns both sides; they must be identical.
std::pair<Rational, Rational> milne_partial_fraction_check(std::span<const Rational> t,
                                                           std::span<const Rational> b);

// Substitutes p_j = prod_k(u_k + t_j) / prod_{k != j}(t_j - t_k) into the
// moment system sum_j p_j t_j^(k-1) = 0 (k <= n), sum_j p_j t_j^n = 1 and
// returns the largest absolute residual (exactly zero in rational form).
Rational df_linear_system_check(std::span<const Rational> t, std::span<const Rational> u);
double df_linear_system_check(std::span<const double> t, std::span<const double> u);

} // namespace gammabarnes
