#pragma once
#include <functional>
#include <span>
#include <vector>

#include "gammabarnes/errors.hpp"
#include "gammabarnes/field_point.hpp"
#include "gammabarnes/gamma_core.hpp"

namespace gammabarnes {

enum class LatticeSector { INTEGER, HALF_INTEGER };

// Discretization of the lattice measure Du: sum over discrete lines |n| <=
// n_max (n integer or half-integer by sector) and Gauss-Legendre panels over
// the contour segment nu = it, |t| <= t_max. The trailing fields steer the
// power-law continuation of the discarded lattice tail used by the internal
// engine; defaults are tuned for the identity suite.
struct MeasureSpec {
    LatticeSector sector = LatticeSector::INTEGER;
    int n_max = 48;
    double t_max = 48.0;
    int panels = 64;
    int nodes_per_panel = 16;

    double ladder_factor = 1.35; // multiplicative spacing of anchor lines
    double ladder_top = 8.0;     // anchors up to ladder_top * (2 n_max)
    int fit_terms = 6;           // power-law terms fitted per parity class
    double fit_window = 0.55;    // fit uses lines with |2n| >= window * 2 n_max
};

struct ValueWithError {
    cxd value{0.0, 0.0};
    double tail_bound = 0.0;
    double quad_error = 0.0;
};

// One column of a field-Gamma product. tw stores 2*[col]; hol = tw/4 + nu.
struct Column {
    double tw = 0.0;
    cxd nu{0.0, 0.0};

    cxd hol() const { return 0.25 * tw + nu; }
    cxd anti() const { return -0.25 * tw + nu; }
    cxd cont() const { return nu; }          // <col>
    double disc() const { return 0.5 * tw; } // [col]

    Column operator+(const Column& o) const { return {tw + o.tw, nu + o.nu}; }
    Column operator-(const Column& o) const { return {tw - o.tw, nu - o.nu}; }
    Column operator-() const { return {-tw, -nu}; }
};

inline Column to_column(const FieldPoint& u) { return {static_cast<double>(u.twice_n), u.nu}; }
inline Column to_column(const Index& a) { return {static_cast<double>(a.twice_m), a.sigma}; }

cxd log_bgamma(const Column& c);
cxd bgamma_value(const Column& c);
cxd bgamma_product_value(std::span<const Column> cols);

// Structured integrand on the lattice:
//   f(u) = constant * phase(n) * u^mono_a * (-ubar)^mono_b * ||u||^(2 norm2_pow)
//          * prod_z bGamma(zc - u) * prod_w bGamma(u + wc)
// phase(n) = exp(i pi phase_c n): an exact sign when phase_c * n is integer,
// a complex half-lattice phase otherwise.
struct LatticeIntegrand {
    std::vector<Column> zc;
    std::vector<Column> wc;
    int phase_c = 0;
    int mono_a = 0;
    int mono_b = 0;
    int norm2_pow = 0;
    cxd constant{1.0, 0.0};

    cxd s_exponent() const;                    // |f| ~ t^Re(s) along a line
    double margin() const;                     // min Re<col>, pole distance
    std::vector<double> t_features() const;    // contour positions of near poles
    void eval(double tw, std::span<const double> t, std::span<cxd> out) const;
    cxd eval_one(double tw, double t) const;
};

// Full lattice integral of a structured integrand: adaptive panels on each
// line, exponential-map t tails, and power-law + Hurwitz-zeta continuation of
// the line sum beyond n_max. This is the engine behind the identity suite.
ValueWithError integrate_lattice(const LatticeIntegrand& f, const MeasureSpec& spec);

// Black-box lattice integral, truncated to the spec box:
//   value = sum_{|n| <= n_max} (1/2pi) int_{-t_max}^{t_max} f(n/2 + it) dt.
// decay is the caller-known exponent (|f| <~ ||u||^(-2 decay)); the discarded
// region is reported through tail_bound from a fitted power-law bound.
ValueWithError integrate_du(const std::function<cxd(const FieldPoint&)>& f,
                            const MeasureSpec& spec, double decay);

// Tensor-product N-fold version (N <= 3) over N copies of the 1-fold node
// set. The integrand is evaluated as given; the caller applies 1/N!.
ValueWithError integrate_du_multi(const std::function<cxd(std::span<const FieldPoint>)>& f,
                                  int N, const MeasureSpec& spec);

// Default evaluation budget for integrate_du_multi; override with the
// GAMMABARNES_BUDGET environment variable.
double evaluation_budget();

enum class IntegralType { TYPE_I, TYPE_II };

// Absolute-convergence exponent of the two integral families:
// TYPE_I: 1 - sum Re(x_j + y_j); TYPE_II: 1 - sum Re(x_j) (y ignored).
double decay_exponent(IntegralType type, std::span<const cxd> x, std::span<const cxd> y);

// Distance from the contour Re nu = 0 to the nearest surviving pole of the
// column product, scanning lattice lines |n| <= spec.n_max. A pole of
// bGamma(zc - u) or bGamma(u + wc) on a line is cancelled when the paired
// denominator Gamma is itself singular there; cancellation is decided
// exactly from the twice-integer bookkeeping.
double contour_margin(std::span<const Column> zc, std::span<const Column> wc,
                      const MeasureSpec& spec);

inline constexpr double kMarginTol = 1e-3;

} // namespace gammabarnes
