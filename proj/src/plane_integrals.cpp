#include "gammabarnes/plane_integrals.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "gammabarnes/errors.hpp"
#include "gammabarnes/numerics.hpp"

namespace gammabarnes {
namespace {

constexpr double kPi = std::numbers::pi;

// ------------------------------------------------------------------ powers
// [x]^(-alpha) = x^(-hol) xbar^(-anti), |x| clamped away from 0 so quadrature
// nodes that graze a singular center stay finite (the measure there is tiny).
cxd pw(cxd x, cxd hol, cxd anti) {
    double r = std::max(std::abs(x), 1e-30);
    cxd e = -(hol + anti) * std::log(r) - cxd(0.0, 1.0) * (hol - anti) * std::arg(x);
    return std::exp(e);
}

cxd pw(cxd x, const Index& a) { return pw(x, a.hol(), a.anti()); }

Index one_minus(const Index& a) { return {-a.twice_m, 1.0 - a.sigma}; }
Index sum_minus_one(const Index& a, const Index& b) {
    return {a.twice_m + b.twice_m, a.sigma + b.sigma - 1.0};
}

cxd bgr(const Index& a) { return std::exp(log_bgamma(to_column(a))); }

double sigma_sum(std::span<const Index> alphas) {
    double s = 0.0;
    for (const Index& a : alphas) s += a.sigma.real();
    return s;
}

void require_even_indices(std::span<const Index> alphas) {
    for (const Index& a : alphas)
        if (a.twice_m % 2 != 0)
            throw ConstraintError("plane exponents need even twice_m for single-valued powers");
}

// --------------------------------------------------------- scrambled Halton
// One digit permutation per base; the implicit tail of zero digits all maps
// to perm[0], summed in closed form so points stay strictly inside (0, 1).
class ScrambledHalton {
  public:
    ScrambledHalton(int dims, std::uint64_t seed) {
        static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        if (dims < 1 || dims > 12)
            throw BudgetError("scrambled Halton supports 1..12 dimensions");
        for (int d = 0; d < dims; ++d) {
            int b = kPrimes[d];
            std::vector<int> p(b);
            std::iota(p.begin(), p.end(), 0);
            std::mt19937_64 g(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(d + 1)));
            std::shuffle(p.begin(), p.end(), g);
            perms_.push_back(std::move(p));
            bases_.push_back(b);
        }
    }

    void next(std::span<double> out) {
        ++index_;
        for (std::size_t d = 0; d < bases_.size(); ++d) {
            const int b = bases_[d];
            const auto& p = perms_[d];
            double inv = 1.0 / b, invi = inv, x = 0.0;
            std::uint64_t n = index_;
            while (n != 0) {
                x += p[n % b] * invi;
                n /= b;
                invi *= inv;
            }
            x += p[0] * invi * b / (b - 1.0);
            out[d] = std::min(x, 1.0 - 1e-16);
        }
    }

  private:
    std::vector<std::vector<int>> perms_;
    std::vector<int> bases_;
    std::uint64_t index_ = 0;
};

// -------------------------------------------------------- importance mixture
// Power-law balls at the singular centers, a covering disk, and a power-law
// outer tail with density ~ r^(-2-delta). Maps [0,1)^3 to C.
class PlaneMixture {
  public:
    PlaneMixture(std::vector<cxd> centers, std::vector<double> exps, double delta)
        : centers_(std::move(centers)), exps_(std::move(exps)), delta_(delta) {
        double rc = 0.0;
        for (cxd c : centers_) rc = std::max(rc, std::abs(c));
        R_disk_ = rc + 3.0;
        const std::size_t K = centers_.size();
        if (K > 0) weights_.assign(K, 0.55 / static_cast<double>(K));
        weights_.push_back(K > 0 ? 0.25 : 0.70);
        weights_.push_back(K > 0 ? 0.20 : 0.30);
        edges_.resize(weights_.size());
        std::partial_sum(weights_.begin(), weights_.end(), edges_.begin());
    }

    cxd sample(double v0, double v1, double v2) const {
        const std::size_t K = centers_.size();
        const cxd dir = std::polar(1.0, 2.0 * kPi * v2);
        const double vr = std::max(v1, 1e-12);
        std::size_t comp = static_cast<std::size_t>(
            std::upper_bound(edges_.begin(), edges_.end(), v0) - edges_.begin());
        comp = std::min(comp, K + 1);
        if (comp < K) {
            const double beta = 2.0 - exps_[comp];
            const double r = std::max(kRLoc * std::pow(vr, 1.0 / beta), 1e-12);
            return centers_[comp] + r * dir;
        }
        if (comp == K) return R_disk_ * std::sqrt(vr) * dir;
        const double r = R_disk_ * std::pow(1.0 - std::min(v1, 1.0 - 1e-12), -1.0 / delta_);
        return r * dir;
    }

    double density(cxd u) const {
        const std::size_t K = centers_.size();
        double dens = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            const double d = std::abs(u - centers_[j]);
            if (d < kRLoc) {
                const double beta = 2.0 - exps_[j];
                dens += weights_[j] * beta / (2.0 * kPi * std::pow(kRLoc, beta)) *
                        std::pow(std::max(d, 1e-30), -exps_[j]);
            }
        }
        const double r = std::abs(u);
        if (r < R_disk_)
            dens += weights_[K] / (kPi * R_disk_ * R_disk_);
        else
            dens += weights_[K + 1] * delta_ * std::pow(R_disk_, delta_) / (2.0 * kPi) *
                    std::pow(r, -2.0 - delta_);
        return dens;
    }

  private:
    static constexpr double kRLoc = 1.5;
    std::vector<cxd> centers_;
    std::vector<double> exps_;
    double delta_ = 1.0;
    double R_disk_ = 3.0;
    std::vector<double> weights_;
    std::vector<double> edges_;
};

void validate_scheme(const PlaneScheme& s, int k) {
    if (k < 1) throw ConstraintError("integrate_c2: fold count must be >= 1");
    if (s.singularity_centers.size() != s.local_exponents.size())
        throw ConstraintError("integrate_c2: one local exponent per singular center");
    for (double e : s.local_exponents)
        if (e >= 2.0)
            throw NonIntegrableError("integrate_c2: local exponent >= 2 is not integrable");
    if (s.tail_exponent <= 2.0)
        throw NonIntegrableError("integrate_c2: tail exponent <= 2 diverges at infinity");
    double rc = 0.0;
    for (const PlanePoint& c : s.singularity_centers) rc = std::max(rc, std::abs(c.z));
    if (s.R_max < rc + 2.0)
        throw ConstraintError("integrate_c2: R_max must exceed the farthest center by 2");
    if (s.cells_or_samples <= 0) throw BudgetError("integrate_c2: empty evaluation budget");
    if (s.method == PlaneMethod::QMC) {
        if (k > 3) throw BudgetError("integrate_c2: QMC supports at most 3 folds");
        if (s.tail_exponent < 2.55)
            throw CutoffError("integrate_c2: tail decay below the QMC importance threshold");
    } else {
        if (k != 1)
            throw ConstraintError("integrate_c2: the polar grid is single-fold; use QMC above");
        if (s.tail_exponent < 2.1)
            throw CutoffError("integrate_c2: tail decay too slow for the inversion map");
    }
}

using PlaneFn = std::function<cxd(std::span<const PlanePoint>)>;

// Randomized-QMC estimate: 8 independently scrambled Halton streams, value is
// the mean of the per-stream means and quad_error their standard error.
ValueWithError qmc_c2(const PlaneFn& f, int k, const PlaneScheme& s) {
    std::vector<cxd> centers;
    centers.reserve(s.singularity_centers.size());
    for (const PlanePoint& c : s.singularity_centers) centers.push_back(c.z);
    const double delta = std::max(s.tail_exponent - 2.4, 0.15);
    const PlaneMixture mix(centers, s.local_exponents, delta);

    constexpr int kStreams = 8;
    const long long per = std::max<long long>(1, s.cells_or_samples / kStreams);
    const int dims = 3 * k;
    std::vector<cxd> means(kStreams);
    std::vector<double> v(dims);
    std::vector<PlanePoint> u(k);
    for (int r = 0; r < kStreams; ++r) {
        const std::uint64_t sd = static_cast<std::uint64_t>(s.seed) * 0x100000001b3ULL +
                                 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1);
        ScrambledHalton hal(dims, sd);
        cxd acc{0.0, 0.0};
        for (long long i = 0; i < per; ++i) {
            hal.next(v);
            double q = 1.0;
            for (int j = 0; j < k; ++j) {
                u[j].z = mix.sample(v[3 * j], v[3 * j + 1], v[3 * j + 2]);
                q *= mix.density(u[j].z);
            }
            const cxd val = f(u) / q;
            if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
                throw NaNError("integrate_c2: non-finite integrand sample");
            acc += val;
        }
        means[r] = acc / static_cast<double>(per);
    }
    cxd mean{0.0, 0.0};
    for (cxd m : means) mean += m;
    mean /= static_cast<double>(kStreams);
    double var = 0.0;
    for (cxd m : means) var += std::norm(m - mean);
    const double stderr_est = std::sqrt(var / (kStreams * (kStreams - 1.0)));
    return {mean, 0.0, stderr_est};
}

// One deterministic polar pass at a given node-count scale. Regions: graded
// polar patches around each center, ray segments between the excised disks up
// to R_max, and the exterior mapped in by u -> 1/u with grading matched to the
// declared tail exponent.
cxd polar_pass(const PlaneFn& f, const PlaneScheme& s, double scale) {
    const std::size_t K = s.singularity_centers.size();
    const double budget = static_cast<double>(s.cells_or_samples) * scale * scale;
    std::vector<PlanePoint> pt(1);
    cxd total{0.0, 0.0};

    std::vector<double> rl(K, 1.0);
    for (std::size_t j = 0; j < K; ++j) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < K; ++i)
            if (i != j)
                dmin = std::min(dmin,
                                std::abs(s.singularity_centers[i].z - s.singularity_centers[j].z));
        if (K > 1) rl[j] = std::min(1.0, 0.45 * dmin);
    }

    // center patches, 35% of the budget
    for (std::size_t j = 0; j < K; ++j) {
        const double mj = 0.35 * budget / static_cast<double>(K);
        const int nphi = std::clamp(static_cast<int>(std::lround(std::sqrt(1.5 * mj))), 16, 512);
        const int nr = std::max(6, static_cast<int>(mj / nphi));
        const double g = std::max(2.0, 2.0 / (2.0 - s.local_exponents[j]));
        const GLRule& gl = gauss_legendre(nr);
        const cxd cj = s.singularity_centers[j].z;
        for (int it = 0; it < nr; ++it) {
            const double t = 0.5 * (gl.x[it] + 1.0);
            const double wt = 0.5 * gl.w[it];
            const double r = rl[j] * std::pow(t, g);
            const double jac = wt * rl[j] * g * std::pow(t, g - 1.0) * r * (2.0 * kPi / nphi);
            cxd ring{0.0, 0.0};
            for (int ip = 0; ip < nphi; ++ip) {
                pt[0].z = cj + r * std::polar(1.0, 2.0 * kPi * (ip + 0.5) / nphi);
                ring += f(pt);
            }
            total += jac * ring;
        }
    }

    // ray segments between the excised disks, 50% of the budget
    {
        const double mm = 0.50 * budget;
        const int nphi = std::clamp(static_cast<int>(std::lround(std::sqrt(mm))), 32, 1024);
        const int nr = std::max(8, static_cast<int>(mm / (nphi * (static_cast<double>(K) + 1.0))));
        const GLRule& gl = gauss_legendre(nr);
        std::vector<std::pair<double, double>> blocked;
        for (int ip = 0; ip < nphi; ++ip) {
            const double phi = 2.0 * kPi * (ip + 0.5) / nphi;
            const cxd dir = std::polar(1.0, phi);
            blocked.clear();
            for (std::size_t j = 0; j < K; ++j) {
                const cxd cj = s.singularity_centers[j].z;
                const double p = (std::conj(dir) * cj).real();
                const double disc = p * p - (std::norm(cj) - rl[j] * rl[j]);
                if (disc <= 0.0) continue;
                const double lo = std::max(0.0, p - std::sqrt(disc));
                const double hi = std::min(s.R_max, p + std::sqrt(disc));
                if (hi > lo) blocked.emplace_back(lo, hi);
            }
            std::sort(blocked.begin(), blocked.end());
            double cursor = 0.0;
            cxd ray{0.0, 0.0};
            auto add_segment = [&](double a, double b) {
                if (b - a < 1e-14) return;
                for (int it = 0; it < nr; ++it) {
                    const double r = a + 0.5 * (b - a) * (gl.x[it] + 1.0);
                    pt[0].z = r * dir;
                    ray += 0.5 * (b - a) * gl.w[it] * r * f(pt);
                }
            };
            for (const auto& [lo, hi] : blocked) {
                add_segment(cursor, std::max(cursor, lo));
                cursor = std::max(cursor, hi);
            }
            add_segment(cursor, s.R_max);
            total += (2.0 * kPi / nphi) * ray;
        }
    }

    // exterior via inversion, 15% of the budget
    {
        const double mt = 0.15 * budget;
        const int nphi = std::clamp(static_cast<int>(std::lround(std::sqrt(1.5 * mt))), 16, 512);
        const int nr = std::max(6, static_cast<int>(mt / nphi));
        const double g = std::max(2.0, 2.0 / (s.tail_exponent - 2.0));
        const double rho0 = 1.0 / s.R_max;
        const GLRule& gl = gauss_legendre(nr);
        for (int it = 0; it < nr; ++it) {
            const double t = 0.5 * (gl.x[it] + 1.0);
            const double wt = 0.5 * gl.w[it];
            const double rho = rho0 * std::pow(t, g);
            const double jac =
                wt * rho0 * g * std::pow(t, g - 1.0) * rho * (2.0 * kPi / nphi) / std::pow(rho, 4);
            cxd ring{0.0, 0.0};
            for (int ip = 0; ip < nphi; ++ip) {
                const cxd v = rho * std::polar(1.0, 2.0 * kPi * (ip + 0.5) / nphi);
                pt[0].z = 1.0 / v;
                ring += f(pt);
            }
            total += jac * ring;
        }
    }
    return total;
}

ValueWithError polar_c2(const PlaneFn& f, const PlaneScheme& s) {
    const cxd full = polar_pass(f, s, 1.0);
    const cxd coarse = polar_pass(f, s, 0.5);
    if (!std::isfinite(full.real()) || !std::isfinite(full.imag()))
        throw NaNError("integrate_c2: non-finite polar quadrature");
    return {full, 0.0, std::abs(full - coarse)};
}

double factorial(int n) {
    double v = 1.0;
    for (int i = 2; i <= n; ++i) v *= i;
    return v;
}

// (-1)^(sum_k k [alpha_{k+1}]), k = 1..count, with [alpha] = twice_m / 2.
double ordering_phase(std::span<const Index> alphas, int count) {
    long long e = 0;
    for (int k = 1; k <= count; ++k) e += static_cast<long long>(k) * (alphas[k].twice_m / 2);
    return parity_sign(e);
}

cxd gamma_ratio(std::span<const Index> alphas, int folds) {
    // prod_k bGamma(1 - alpha_k) / bGamma(folds + 1 - sum alpha)
    cxd logs{0.0, 0.0};
    int tw = 0;
    cxd sig{0.0, 0.0};
    for (const Index& a : alphas) {
        logs += log_bgamma(to_column(one_minus(a)));
        tw += a.twice_m;
        sig += a.sigma;
    }
    logs -= log_bgamma(to_column(Index{-tw, static_cast<double>(folds + 1) - sig}));
    return std::exp(logs);
}

cxd chain_closed(std::span<const Index> a, std::span<const PlanePoint> z) {
    return gamma_ratio(a, 1) * pw(z[0].z - z[1].z, sum_minus_one(a[0], a[1]));
}

cxd star_closed(std::span<const Index> a, std::span<const PlanePoint> z) {
    cxd v = bgr(one_minus(a[0])) * bgr(one_minus(a[1])) * bgr(one_minus(a[2]));
    v *= pw(z[1].z - z[2].z, one_minus(a[0]));
    v *= pw(z[2].z - z[0].z, one_minus(a[1]));
    v *= pw(z[0].z - z[1].z, one_minus(a[2]));
    return v;
}

cxd lf_closed(std::span<const Index> a, std::span<const PlanePoint> z, bool constrained) {
    // N-fold limit form; the constrained variant has one fold fewer and no
    // Gamma denominator (it needs sum alpha = N).
    const int N = static_cast<int>(a.size()) - 1;
    cxd v = std::pow(kPi, constrained ? N - 1 : N) * ordering_phase(a, N);
    if (constrained) {
        for (const Index& ak : a) v *= bgr(one_minus(ak));
    } else {
        v *= gamma_ratio(a, N);
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = i + 1; k < a.size(); ++k)
            v *= pw(z[i].z - z[k].z, sum_minus_one(a[i], a[k]));
    return v;
}

cxd df_prefactor(std::span<const Index> a, std::span<const PlanePoint> z, int n, int m) {
    cxd v = ordering_phase(a, n + m) * gamma_ratio(a, n);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            v *= pw(z[j].z - z[i].z, sum_minus_one(a[i], a[j]));
    return v;
}

// Vandermonde-dressed product integrands shared by the limit forms and the
// duality sides. sign = +1 evaluates prod [u_i - z_m]^(-alpha_m), sign = -1
// the reflected ordering prod [z_m - u_i]^(-alpha_m).
PlaneFn product_integrand(std::vector<Index> alphas, std::vector<PlanePoint> zs, double prefac,
                          double sign) {
    return [alphas = std::move(alphas), zs = std::move(zs), prefac,
            sign](std::span<const PlanePoint> u) -> cxd {
        cxd val{prefac, 0.0};
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = i + 1; j < u.size(); ++j) val *= std::norm(u[i].z - u[j].z);
        for (const PlanePoint& ui : u)
            for (std::size_t m = 0; m < alphas.size(); ++m)
                val *= pw(sign > 0 ? ui.z - zs[m].z : zs[m].z - ui.z, alphas[m]);
        return val;
    };
}

std::string plane_digest(PlaneKind kind, const PlaneParams& p, const PlaneScheme& s) {
    std::string d = plane_kind_name(kind);
    d += "|P=" + std::to_string(p.alpha.size());
    if (kind == PlaneKind::DF_DUALITY)
        d += "|n=" + std::to_string(p.n) + "|m=" + std::to_string(p.m);
    d += s.method == PlaneMethod::QMC ? "|qmc" : "|polar";
    d += "|seed=" + std::to_string(s.seed);
    return d;
}

} // namespace

const char* plane_kind_name(PlaneKind kind) {
    switch (kind) {
    case PlaneKind::CHAIN_C: return "CHAIN_C";
    case PlaneKind::STAR_TRIANGLE_C: return "STAR_TRIANGLE_C";
    case PlaneKind::LF: return "LF";
    case PlaneKind::LF1: return "LF1";
    case PlaneKind::DF_DUALITY: return "DF_DUALITY";
    }
    return "?";
}

ValueWithError integrate_c2(const PlaneFn& f, int k, const PlaneScheme& scheme) {
    validate_scheme(scheme, k);
    return scheme.method == PlaneMethod::QMC ? qmc_c2(f, k, scheme) : polar_c2(f, scheme);
}

PlaneScheme make_plane_scheme(PlaneKind kind, const PlaneParams& p, PlaneMethod method,
                              long long budget) {
    PlaneScheme s;
    s.method = method;
    s.cells_or_samples = budget;
    s.singularity_centers = p.points;
    s.local_exponents.clear();
    for (const Index& a : p.alpha) s.local_exponents.push_back(2.0 * a.sigma.real());
    const double ssum = sigma_sum(p.alpha);
    const int P = static_cast<int>(p.alpha.size());
    switch (kind) {
    case PlaneKind::CHAIN_C:
    case PlaneKind::STAR_TRIANGLE_C: s.tail_exponent = 2.0 * ssum; break;
    case PlaneKind::LF: s.tail_exponent = 2.0 * ssum - 2.0 * (P - 2); break;
    case PlaneKind::LF1: s.tail_exponent = 2.0 * ssum - 2.0 * (P - 3); break;
    case PlaneKind::DF_DUALITY: s.tail_exponent = 2.0 * ssum - 2.0 * (p.n - 1); break;
    }
    double rc = 0.0;
    for (const PlanePoint& c : p.points) rc = std::max(rc, std::abs(c.z));
    s.R_max = std::max(8.0, rc + 6.0);
    return s;
}

VerificationReport eval_classical(PlaneKind kind, const PlaneParams& params,
                                  const PlaneScheme& scheme, double tolerance) {
    const auto t0 = std::chrono::steady_clock::now();
    require_even_indices(params.alpha);
    if (params.alpha.size() != params.points.size())
        throw ConstraintError("eval_classical: one exponent per external point");

    VerificationReport rep;
    rep.case_digest = plane_digest(kind, params, scheme);
    std::span<const Index> a(params.alpha);
    std::span<const PlanePoint> z(params.points);

    switch (kind) {
    case PlaneKind::CHAIN_C: {
        if (a.size() != 2) throw ConstraintError("chain needs exactly two exponents");
        if (a[0].sigma.real() + a[1].sigma.real() <= 1.0)
            throw ConstraintError("chain needs Re<alpha1 + alpha2> > 1 to converge at infinity");
        const auto a0 = a[0], a1 = a[1];
        const cxd z0 = z[0].z, z1 = z[1].z;
        const PlaneFn f = [a0, a1, z0, z1](std::span<const PlanePoint> u) {
            return pw(z0 - u[0].z, a0) * pw(u[0].z - z1, a1) / kPi;
        };
        rep.lhs = integrate_c2(f, 1, scheme);
        rep.rhs = {chain_closed(a, z), 0.0, 0.0};
        break;
    }
    case PlaneKind::STAR_TRIANGLE_C: {
        if (a.size() != 3) throw ConstraintError("star-triangle needs exactly three exponents");
        int tw = 0;
        cxd sig{0.0, 0.0};
        for (const Index& ak : a) {
            tw += ak.twice_m;
            sig += ak.sigma;
        }
        if (tw != 0 || std::abs(sig - 2.0) > 1e-12)
            throw ConstraintError("star-triangle needs sum alpha = sum alphabar = 2");
        rep.lhs = integrate_c2(
            product_integrand({a.begin(), a.end()}, {z.begin(), z.end()}, 1.0 / kPi, -1.0), 1,
            scheme);
        rep.rhs = {star_closed(a, z), 0.0, 0.0};
        break;
    }
    case PlaneKind::LF:
    case PlaneKind::LF1: {
        const int N = static_cast<int>(a.size()) - 1;
        const int folds = kind == PlaneKind::LF ? N : N - 1;
        if (folds < 1) throw ConstraintError("limit form needs at least one integration fold");
        if (kind == PlaneKind::LF1) {
            int tw = 0;
            cxd sig{0.0, 0.0};
            for (const Index& ak : a) {
                tw += ak.twice_m;
                sig += ak.sigma;
            }
            if (tw != 0 || std::abs(sig - static_cast<double>(N)) > 1e-12)
                throw ConstraintError("constrained limit form needs sum alpha = N on both parts");
        }
        rep.lhs = integrate_c2(product_integrand({a.begin(), a.end()}, {z.begin(), z.end()},
                                                 1.0 / factorial(folds), -1.0),
                               folds, scheme);
        rep.rhs = {lf_closed(a, z, kind == PlaneKind::LF1), 0.0, 0.0};
        break;
    }
    case PlaneKind::DF_DUALITY: {
        const int n = params.n, m = params.m;
        if (n < 1 || m < 0 || n + m > 2)
            throw ConstraintError("duality sides are limited to n >= 1, m >= 0, n + m <= 2");
        if (static_cast<int>(a.size()) != n + m + 1)
            throw ConstraintError("duality needs n + m + 1 exponents");
        rep.lhs = integrate_c2(
            product_integrand({a.begin(), a.end()}, {z.begin(), z.end()},
                              1.0 / (std::pow(kPi, n) * factorial(n)), 1.0),
            n, scheme);
        const cxd pref = df_prefactor(a, z, n, m);
        if (m == 0) {
            rep.rhs = {pref, 0.0, 0.0};
        } else {
            std::vector<Index> dual;
            dual.reserve(a.size());
            for (const Index& ak : a) dual.push_back(one_minus(ak));
            PlaneScheme ds = scheme;
            ds.local_exponents.clear();
            double et = 0.0;
            for (const Index& dk : dual) {
                ds.local_exponents.push_back(2.0 * dk.sigma.real());
                et += 2.0 * dk.sigma.real();
            }
            ds.tail_exponent = et - 2.0 * (m - 1);
            ds.seed = scheme.seed + 1;
            const ValueWithError ri = integrate_c2(
                product_integrand(std::move(dual), {z.begin(), z.end()},
                                  1.0 / (std::pow(kPi, m) * factorial(m)), 1.0),
                m, ds);
            rep.rhs = {pref * ri.value, std::abs(pref) * ri.tail_bound,
                       std::abs(pref) * ri.quad_error};
        }
        break;
    }
    }

    const double denom = std::abs(rep.rhs.value);
    rep.residual = denom > 1e-10 ? std::abs(rep.lhs.value - rep.rhs.value) / denom
                                 : std::abs(rep.lhs.value - rep.rhs.value);
    rep.passed = rep.residual <= tolerance;
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

QuasiclassicalReport quasiclassical_check(PlaneKind identity, std::span<const double> L_list) {
    struct Leg {
        Index a;
        cxd z;
    };
    std::vector<Leg> legs;
    cxd plane;
    if (identity == PlaneKind::CHAIN_C) {
        legs = {{Index{4, 0.72}, cxd(0.25, 0.30)}, {Index{0, 0.67}, cxd(-0.50, -0.20)}};
        const Index a[] = {legs[0].a, legs[1].a};
        const PlanePoint z[] = {{legs[0].z}, {legs[1].z}};
        plane = chain_closed(a, z);
    } else if (identity == PlaneKind::STAR_TRIANGLE_C) {
        legs = {{Index{4, 0.72}, cxd(0.25, 0.30)},
                {Index{-4, 0.67}, cxd(-0.50, 0.10)},
                {Index{0, 0.61}, cxd(0.50, -0.35)}};
        const Index a[] = {legs[0].a, legs[1].a, legs[2].a};
        const PlanePoint z[] = {{legs[0].z}, {legs[1].z}, {legs[2].z}};
        plane = star_closed(a, z);
    } else {
        throw ConstraintError("quasiclassical scaling covers the chain and star-triangle kinds");
    }

    double ssum = 0.0;
    for (const Leg& leg : legs) ssum += leg.a.sigma.real();

    QuasiclassicalReport rep;
    if (L_list.size() < 2)
        throw ConstraintError("quasiclassical check needs at least two scales to fit a slope");
    for (double L : L_list) {
        const long long iL = std::llround(L);
        if (iL < 2 || iL % 2 != 0 || std::abs(L - static_cast<double>(iL)) > 1e-12)
            throw ConstraintError("quasiclassical scales must be even integers");
        LatticeIntegrand f;
        f.phase_c = static_cast<int>(legs.size());
        double cst = 1.0;
        for (const Leg& leg : legs) {
            const long long tw = std::llround(4.0 * L * leg.z.real());
            const Column Z{static_cast<double>(tw), cxd(0.0, L * leg.z.imag())};
            const Column hs = to_column(half_shift(leg.a));
            f.zc.push_back(hs + Z);
            f.wc.push_back(hs - Z);
            const long long q = leg.a.twice_m + 2 * tw;
            if (q % 4 != 0)
                throw ConstraintError("quasiclassical leg parity broken: [alpha/2 + Z] not integer");
            cst *= parity_sign(q / 4);
        }
        f.constant = cst;
        MeasureSpec spec;
        spec.sector = LatticeSector::INTEGER;
        spec.ladder_top = 6.0;
        if (identity == PlaneKind::CHAIN_C) {
            spec.n_max = static_cast<int>(48 + 2 * iL);
            spec.t_max = 48.0 + 1.2 * L;
        } else {
            spec.n_max = static_cast<int>(48 + 3 * iL);
            spec.t_max = 48.0 + 2.0 * L;
        }
        spec.panels = static_cast<int>(64 + iL);
        const ValueWithError v = integrate_lattice(f, spec);
        const cxd scaled = std::pow(L, 2.0 * ssum - 2.0) * v.value;
        rep.L.push_back(L);
        rep.deviation.push_back(std::abs(scaled - plane) / std::abs(plane));
    }

    std::vector<double> lx(rep.L.size()), ly(rep.L.size());
    for (std::size_t i = 0; i < rep.L.size(); ++i) {
        lx[i] = std::log(rep.L[i]);
        ly[i] = std::log(std::max(rep.deviation[i], 1e-300));
    }
    rep.fitted_exponent = linear_fit(lx, ly).b;
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.deviation.size(); ++i)
        if (rep.deviation[i] >= rep.deviation[i - 1]) rep.monotone = false;
    return rep;
}

std::pair<Rational, Rational> milne_partial_fraction_check(std::span<const Rational> t,
                                                           std::span<const Rational> b) {
    const std::size_t N = t.size();
    if (N == 0 || b.size() != N)
        throw DegenerateError("partial-fraction check needs matching nonempty lists");
    for (std::size_t i = 0; i < N; ++i) {
        if (t[i] == 0) throw DegenerateError("partial-fraction nodes must be nonzero");
        for (std::size_t j = i + 1; j < N; ++j)
            if (t[i] == t[j]) throw DegenerateError("partial-fraction nodes must be distinct");
    }
    Rational lhs = 0;
    for (std::size_t k = 0; k < N; ++k) {
        Rational num = 1;
        for (std::size_t i = 0; i < N; ++i) num *= b[i] - t[k];
        Rational den = t[k];
        for (std::size_t j = 0; j < N; ++j)
            if (j != k) den *= t[j] - t[k];
        lhs += num / den;
    }
    Rational rhs = 1;
    for (std::size_t i = 0; i < N; ++i) rhs *= b[i] / t[i];
    rhs -= 1;
    return {lhs, rhs};
}

namespace {

template <typename T> T df_residual(std::span<const T> t, std::span<const T> u) {
    const std::size_t P = t.size();
    const std::size_t m = u.size();
    if (P < m + 1) throw DegenerateError("moment system needs at least m + 1 nodes");
    for (std::size_t i = 0; i < P; ++i)
        for (std::size_t j = i + 1; j < P; ++j)
            if (t[i] == t[j]) throw DegenerateError("moment-system nodes must be distinct");
    const int n = static_cast<int>(P) - static_cast<int>(m) - 1;

    std::vector<T> p(P);
    for (std::size_t j = 0; j < P; ++j) {
        T num = 1;
        for (std::size_t k = 0; k < m; ++k) num *= u[k] + t[j];
        T den = 1;
        for (std::size_t k = 0; k < P; ++k)
            if (k != j) den *= t[j] - t[k];
        p[j] = num / den;
    }

    using std::abs;
    T worst = 0;
    std::vector<T> powv(P, T(1));
    for (int s = 0; s <= n; ++s) {
        T acc = 0;
        for (std::size_t j = 0; j < P; ++j) acc += p[j] * powv[j];
        if (s == n) acc -= 1;
        if (abs(acc) > worst) worst = abs(acc);
        for (std::size_t j = 0; j < P; ++j) powv[j] *= t[j];
    }
    return worst;
}

} // namespace

Rational df_linear_system_check(std::span<const Rational> t, std::span<const Rational> u) {
    return df_residual<Rational>(t, u);
}

double df_linear_system_check(std::span<const double> t, std::span<const double> u) {
    return df_residual<double>(t, u);
}

} // namespace gammabarnes
