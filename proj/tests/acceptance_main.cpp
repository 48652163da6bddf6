// Acceptance gate: one numbered check per invocation (argv[1] = 1..13, or
// "all"). Each check prints a single PASS/FAIL line with its wall time and the
// worst observed deviation; the process exits 0 only if every requested check
// passes, including its runtime budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gammabarnes/cli_report.hpp"
#include "gammabarnes/gamma_core.hpp"
#include "gammabarnes/identity_suite.hpp"
#include "gammabarnes/plane_integrals.hpp"
#include "gammabarnes/propagators.hpp"
#include "gammabarnes/residue_engine.hpp"

using namespace gammabarnes;

namespace {

using Clock = std::chrono::steady_clock;

struct Rng {
    std::mt19937_64 g;
    explicit Rng(unsigned seed) : g(seed) {}
    double uni(double a, double b) { return a + (b - a) * ((g() >> 11) * 0x1.0p-53); }
    int iuni(int a, int b) {
        return a + static_cast<int>(g() % static_cast<unsigned long long>(b - a + 1));
    }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(iuni(0, static_cast<int>(v.size()) - 1))];
    }
};

struct Outcome {
    bool ok = true;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

double rel_diff(cxd a, cxd b) {
    double m = std::max(std::abs(a), std::abs(b));
    return m > 0.0 ? std::abs(a - b) / m : 0.0;
}

// distance of the real part to the nearest integer, inflated by the imaginary
// offset; used to keep sampled points away from Gamma poles and zeros
double int_dist(cxd c) { return std::hypot(c.real() - std::round(c.real()), c.imag()); }

IdentityKind kind_of(IdentityTag tag, int N, LatticeSector sec,
                     ParityVariant v = ParityVariant::NONE) {
    return IdentityKind{tag, N, sec, v};
}

// ---- 1: functional relations of the field Gamma ----------------------------

Outcome criterion_1() {
    Rng rng(2026);
    double worst = 0.0;
    int made = 0;
    while (made < 10000) {
        // integer discrete part (the constant-phase relations live on n in Z),
        // |twice_n| <= 8, nu in the +-5 box, kept away from poles
        const int tn = 2 * rng.iuni(-4, 4);
        const cxd nu{rng.uni(-5.0, 5.0), rng.uni(-5.0, 5.0)};
        const FieldPoint u{tn, nu};
        if (int_dist(u.hol()) < 0.05 || int_dist(u.anti()) < 0.05) continue;
        ++made;

        const cxd gu = bgamma(u).value;
        const cxd phase{parity_sign(tn / 2), 0.0};
        const FieldPoint refl{-tn, 1.0 - nu};
        // reflection product equals the parity phase
        worst = std::max(worst, std::abs(gu * bgamma(refl).value - phase));
        // holomorphic/antiholomorphic swap carries the same phase
        worst = std::max(worst, rel_diff(gu, phase * bgamma(FieldPoint{-tn, nu}).value));
        // unit shift: bGamma(u+1) = -u ubar bGamma(u)
        worst = std::max(worst, rel_diff(bgamma(FieldPoint{tn, nu + 1.0}).value, norm_sq(u) * gu));
        // negation: bGamma(1-u) = ||u||^2 bGamma(-u)
        worst = std::max(worst, rel_diff(bgamma(refl).value, norm_sq(u) * bgamma(-u).value));
    }
    Outcome o;
    o.ok = worst <= 1e-11;
    o.detail = "10000 points, 4 relations, worst deviation " + fmt(worst);
    return o;
}

// ---- 2..4: Gustafson lattice integrals --------------------------------------

Outcome run_cases(const std::vector<IdentityCase>& cases, double tol, const char* label) {
    double worst = 0.0;
    int fails = 0;
    for (const IdentityCase& c : cases) {
        VerificationReport r = verify_case(c);
        worst = std::max(worst, r.residual);
        if (!r.passed || r.residual > tol) ++fails;
    }
    Outcome o;
    o.ok = fails == 0;
    o.detail = std::string(label) + ": " + std::to_string(cases.size()) + " cases, worst residual " +
               fmt(worst) + (fails ? ", " + std::to_string(fails) + " failed" : "");
    return o;
}

Outcome criterion_2() {
    std::vector<IdentityCase> cs;
    for (unsigned seed = 1; seed <= 50; ++seed)
        cs.push_back(make_case(kind_of(IdentityTag::GUSTAFSON_I, 1, LatticeSector::INTEGER), seed));
    return run_cases(cs, 1e-6, "type-I N=1 quadrature vs closed form");
}

Outcome criterion_3() {
    std::vector<IdentityCase> cs;
    for (LatticeSector sec : {LatticeSector::INTEGER, LatticeSector::HALF_INTEGER})
        for (unsigned seed = 1; seed <= 25; ++seed) {
            IdentityCase c = make_case(kind_of(IdentityTag::GUSTAFSON_II, 1, sec), seed);
            c.strategy = Strategy::BOTH; // quadrature plus the kappa-signed determinant
            cs.push_back(c);
        }
    return run_cases(cs, 1e-6, "type-II N=1 both sectors, quadrature and determinant");
}

Outcome criterion_4() {
    std::vector<IdentityCase> det;
    for (unsigned seed = 1; seed <= 10; ++seed)
        det.push_back(make_case(kind_of(IdentityTag::GUSTAFSON_I, 2, LatticeSector::INTEGER), seed));
    Outcome a = run_cases(det, 1e-5, "type-I N=2 determinant");
    if (!a.ok) return a;

    // cross-check the determinant against the direct two-fold quadrature; the
    // agreement gate inside the evaluator compares them within combined error
    // bars, and the looser tolerance reflects the coarse two-fold grid
    double worst = 0.0;
    int fails = 0;
    for (unsigned seed = 1; seed <= 3; ++seed) {
        IdentityCase c = make_case(kind_of(IdentityTag::GUSTAFSON_I, 2, LatticeSector::INTEGER), seed);
        c.strategy = Strategy::BOTH;
        c.tolerance = 2e-3;
        VerificationReport r = verify_case(c);
        worst = std::max(worst, r.residual);
        if (!r.passed) ++fails;
    }
    Outcome o;
    o.ok = fails == 0;
    o.detail = a.detail + "; 3 two-fold cross-checks, worst residual " + fmt(worst) +
               (fails ? ", " + std::to_string(fails) + " failed" : "");
    return o;
}

// ---- 5: residue machinery ----------------------------------------------------

Outcome criterion_5() {
    Outcome o;
    double worst_q = 0.0;
    for (int N : {1, 2})
        for (unsigned seed = 1; seed <= 10; ++seed) {
            IdentityCase c = make_case(kind_of(IdentityTag::GUSTAFSON_I, N, LatticeSector::INTEGER), seed);
            for (int i = 1; i <= N; ++i)
                for (int k = 1; k <= N; ++k) {
                    cxd a = mellin_moment(i, k, c.params.z, c.params.w, MomentMethod::QUADRATURE);
                    cxd b = mellin_moment(i, k, c.params.z, c.params.w, MomentMethod::RESIDUE_SERIES);
                    worst_q = std::max(worst_q, std::abs(a - b) / std::max(1.0, std::abs(a)));
                }
        }
    if (worst_q > 1e-8) {
        o.ok = false;
        o.detail = "moment cross-method deviation " + fmt(worst_q) + " exceeds 1e-8";
        return o;
    }

    Rng rng(501);
    double worst_m = 0.0;
    const std::vector<std::vector<int>> perms1 = {{0, 1}, {1, 0}};
    const std::vector<std::vector<int>> perms2 = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int s = 0; s < 10; ++s) {
        std::vector<cxd> al, be;
        for (int i = 0; i < 2; ++i) al.push_back({rng.uni(-0.40, -0.15), rng.uni(-0.10, 0.10)});
        for (int i = 0; i < 2; ++i) be.push_back({rng.uni(-0.40, -0.15), rng.uni(-0.10, 0.10)});
        auto [lhs, rhs] = milne_gauss_check(al, be, perms1[s % 2], 4000);
        worst_m = std::max(worst_m, rel_diff(lhs, rhs));
    }
    for (int s = 0; s < 4; ++s) {
        std::vector<cxd> al, be;
        for (int i = 0; i < 3; ++i) al.push_back({rng.uni(-0.48, -0.30), rng.uni(-0.06, 0.06)});
        for (int i = 0; i < 3; ++i) be.push_back({rng.uni(-0.48, -0.30), rng.uni(-0.06, 0.06)});
        auto [lhs, rhs] = milne_gauss_check(al, be, perms2[s % 4], 700);
        worst_m = std::max(worst_m, rel_diff(lhs, rhs));
    }
    if (worst_m > 1e-5) {
        o.ok = false;
        o.detail = "Milne summation deviation " + fmt(worst_m) + " exceeds 1e-5";
        return o;
    }

    const std::vector<double> tws{-2.0, 0.0, 2.0};
    auto draw_cols = [&](int count) {
        std::vector<Column> v;
        for (int i = 0; i < count; ++i)
            v.push_back({rng.pick(tws), cxd{rng.uni(0.05, 0.45), rng.uni(-0.5, 0.5)}});
        return v;
    };
    double worst_r = 0.0, worst_t = 0.0;
    for (int N : {1, 2})
        for (int s = 0; s < 10; ++s) {
            auto z = draw_cols(N + 1);
            auto w = draw_cols(N + 1);
            auto [lhs, rhs] = r_n(z, w, N);
            worst_r = std::max(worst_r, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
            worst_t = std::max(worst_t, std::abs(t_n(draw_cols(2 * N + 2), N) - 1.0));
        }
    o.ok = worst_r <= 1e-8 && worst_t <= 1e-8;
    o.detail = "moments " + fmt(worst_q) + ", Milne " + fmt(worst_m) + ", sine sums " +
               fmt(worst_r) + "/" + fmt(worst_t);
    return o;
}

// ---- 6: reduced one-fold families -------------------------------------------

Outcome criterion_6() {
    std::vector<IdentityCase> cs;
    for (IdentityTag tag : {IdentityTag::REDUCED_I, IdentityTag::REDUCED_I_GAMMA})
        for (unsigned seed = 1; seed <= 20; ++seed)
            cs.push_back(make_case(kind_of(tag, 2, LatticeSector::INTEGER), seed));
    // the type-II reductions carry the sector sign, so split their samples
    for (IdentityTag tag : {IdentityTag::REDUCED_II, IdentityTag::REDUCED_II_GAMMA})
        for (LatticeSector sec : {LatticeSector::INTEGER, LatticeSector::HALF_INTEGER})
            for (unsigned seed = 1; seed <= 10; ++seed)
                cs.push_back(make_case(kind_of(tag, 2, sec), seed));
    return run_cases(cs, 1e-6, "reduced families at N=2");
}

// ---- 7: propagator identities with parity/reality subchecks ------------------

IdentityCase reality_sample(ParityVariant v, unsigned seed) {
    IdentityCase c = make_case(kind_of(IdentityTag::STAR_TRIANGLE_D, 1, LatticeSector::INTEGER, v),
                               seed);
    Rng rng(9000u + seed + (v == ParityVariant::V1B ? 100u : 0u));
    const double s1 = rng.uni(0.55, 0.75), s2 = rng.uni(0.55, 0.75);
    c.params.alpha = {Index{0, cxd(s1, 0.0)}, Index{0, cxd(s2, 0.0)},
                      Index{0, cxd(2.0 - s1 - s2, 0.0)}};
    const std::vector<int> even{-2, 0, 2}, odd{-3, -1, 1, 3};
    c.params.points.clear();
    for (int i = 0; i < 3; ++i)
        c.params.points.push_back(
            {v == ParityVariant::V1A ? rng.pick(even) : rng.pick(odd),
             cxd{0.0, rng.uni(-0.45, 0.45)}});
    return c;
}

Outcome criterion_7() {
    std::vector<IdentityCase> cs;
    for (IdentityTag tag : {IdentityTag::CHAIN_S, IdentityTag::STAR_TRIANGLE_S})
        for (unsigned seed = 1; seed <= 10; ++seed)
            cs.push_back(make_case(kind_of(tag, 1, LatticeSector::INTEGER), seed));
    for (LatticeSector sec : {LatticeSector::INTEGER, LatticeSector::HALF_INTEGER})
        for (unsigned seed = 1; seed <= 5; ++seed)
            cs.push_back(make_case(kind_of(IdentityTag::CHAIN_D, 1, sec), seed));
    for (ParityVariant v : {ParityVariant::V2A, ParityVariant::V2B})
        for (unsigned seed = 1; seed <= 10; ++seed)
            cs.push_back(make_case(kind_of(IdentityTag::STAR_TRIANGLE_D, 1,
                                           LatticeSector::INTEGER, v), seed));
    Outcome base = run_cases(cs, 1e-6, "chain/star propagator identities");
    if (!base.ok) return base;

    // real positive-parity samples: all exponents real in (0,1) with sum 2 and
    // purely imaginary continuous parts, where the reflection-symmetric
    // propagator must be real, positive on the even classes and negative on
    // the odd ones, and both sides of the identity real of a common sign
    double worst_res = 0.0, worst_im = 0.0;
    int fails = 0;
    for (ParityVariant v : {ParityVariant::V1A, ParityVariant::V1B}) {
        const bool negative = v == ParityVariant::V1B;
        for (unsigned seed = 1; seed <= 10; ++seed) {
            IdentityCase c = reality_sample(v, seed);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = i + 1; j < 3; ++j)
                    for (const Index& a : c.params.alpha) {
                        GammaValue d = D_prop(c.params.points[i], c.params.points[j], a);
                        if (d.kind != Kind::FINITE) { ++fails; continue; }
                        const double im_rel =
                            std::abs(d.value.imag()) / std::max(1.0, std::abs(d.value));
                        worst_im = std::max(worst_im, im_rel);
                        if (im_rel > 1e-12) ++fails;
                        if (negative ? d.value.real() >= 0.0 : d.value.real() <= 0.0) ++fails;
                    }
            VerificationReport r = verify_case(c);
            worst_res = std::max(worst_res, r.residual);
            if (!r.passed || r.residual > 1e-6) ++fails;
            for (cxd side : {r.lhs.value, r.rhs.value}) {
                const double im_rel = std::abs(side.imag()) / std::max(1.0, std::abs(side));
                worst_im = std::max(worst_im, im_rel);
                if (im_rel > 1e-12) ++fails;
            }
            if (r.lhs.value.real() * r.rhs.value.real() <= 0.0) ++fails;
        }
    }
    Outcome o;
    o.ok = fails == 0;
    o.detail = base.detail + "; reality samples worst residual " + fmt(worst_res) +
               ", worst imaginary part " + fmt(worst_im) +
               (fails ? ", " + std::to_string(fails) + " violations" : "");
    return o;
}

// ---- 8: pole-approach extrapolation ------------------------------------------

Outcome criterion_8() {
    std::vector<IdentityCase> cs;
    for (unsigned seed = 1; seed <= 3; ++seed)
        cs.push_back(make_case(kind_of(IdentityTag::ZETA_POLE, 1, LatticeSector::INTEGER), seed));
    return run_cases(cs, 1e-3, "pole-residue extrapolation");
}

// ---- 9: quasiclassical scaling ------------------------------------------------

Outcome criterion_9() {
    const std::vector<double> Ls{16.0, 32.0, 64.0, 128.0};
    Outcome o;
    std::string parts;
    for (PlaneKind k : {PlaneKind::CHAIN_C, PlaneKind::STAR_TRIANGLE_C}) {
        QuasiclassicalReport rep = quasiclassical_check(k, Ls);
        if (!parts.empty()) parts += ", ";
        parts += std::string(plane_kind_name(k)) + " exponent " + fmt(rep.fitted_exponent) +
                 " (deviation " + fmt(rep.deviation.front()) + " -> " + fmt(rep.deviation.back()) +
                 ")";
        if (!(rep.fitted_exponent <= -0.8)) o.ok = false;
    }
    o.detail = "L in {16,32,64,128}: " + parts;
    return o;
}

// ---- 10: plane integrals and two-sided duality --------------------------------

Outcome criterion_10() {
    PlaneParams chain;
    chain.alpha = {Index{2, cxd(0.72, 0.0)}, Index{0, cxd(0.67, 0.0)}};
    chain.points = {PlanePoint{cxd(0.3, 0.4)}, PlanePoint{cxd(-0.5, -0.2)}};

    PlaneParams star;
    star.alpha = {Index{2, cxd(0.70, 0.0)}, Index{-2, cxd(0.62, 0.0)}, Index{0, cxd(0.68, 0.0)}};
    star.points = {PlanePoint{cxd(0.4, 0.3)}, PlanePoint{cxd(-0.6, 0.1)}, PlanePoint{cxd(0.2, -0.5)}};

    const long long budget = 10000000;
    double worst_c = 0.0;
    int fails = 0;
    for (auto [kind, p] : {std::pair{PlaneKind::CHAIN_C, &chain},
                           std::pair{PlaneKind::STAR_TRIANGLE_C, &star}}) {
        PlaneScheme s = make_plane_scheme(kind, *p, PlaneMethod::QMC, budget);
        VerificationReport r = eval_classical(kind, *p, s, 1e-3);
        worst_c = std::max(worst_c, r.residual);
        if (!r.passed) ++fails;
    }

    // two-sided duality at (n,m) = (1,0), (1,1) and (2,0)
    PlaneParams d10 = chain;
    d10.n = 1; d10.m = 0;
    PlaneParams d11;
    d11.alpha = {Index{2, cxd(0.55, 0.0)}, Index{-2, cxd(0.52, 0.0)}, Index{4, cxd(0.48, 0.0)}};
    d11.points = {PlanePoint{cxd(0.45, 0.25)}, PlanePoint{cxd(-0.55, 0.15)},
                  PlanePoint{cxd(0.05, -0.55)}};
    d11.n = 1; d11.m = 1;
    PlaneParams d20;
    d20.alpha = {Index{2, cxd(0.85, 0.0)}, Index{-2, cxd(0.80, 0.0)}, Index{0, cxd(0.75, 0.0)}};
    d20.points = d11.points;
    d20.n = 2; d20.m = 0;

    double worst_d = 0.0;
    for (const PlaneParams* p : {&d10, &d11, &d20}) {
        PlaneScheme s = make_plane_scheme(PlaneKind::DF_DUALITY, *p, PlaneMethod::QMC, budget);
        VerificationReport r = eval_classical(PlaneKind::DF_DUALITY, *p, s, 1e-2);
        worst_d = std::max(worst_d, r.residual);
        if (!r.passed) ++fails;
    }
    Outcome o;
    o.ok = fails == 0;
    o.detail = "chain/star residual " + fmt(worst_c) + ", duality residual " + fmt(worst_d) +
               (fails ? ", " + std::to_string(fails) + " failed" : "");
    return o;
}

// ---- 11: exact rational summation identities ----------------------------------

Outcome criterion_11() {
    Rng rng(4242);
    auto draw_distinct = [&](int count, bool nonzero) {
        std::vector<Rational> out;
        std::set<Rational> seen;
        while (static_cast<int>(out.size()) < count) {
            int num = rng.iuni(-9, 9);
            if (nonzero && num == 0) continue;
            Rational r(num, rng.iuni(1, 4));
            if (seen.insert(r).second) out.push_back(r);
        }
        return out;
    };
    int bad = 0;
    for (int s = 0; s < 50; ++s) {
        int n = rng.iuni(1, 5);
        auto t = draw_distinct(n, true);
        auto b = draw_distinct(n, false);
        auto [lhs, rhs] = milne_partial_fraction_check(t, b);
        if (lhs != rhs) ++bad;
    }
    for (int s = 0; s < 50; ++s) {
        int n = rng.iuni(1, 5);
        auto t = draw_distinct(n, false);
        auto u = draw_distinct(rng.iuni(0, n - 1), false);
        if (df_linear_system_check(t, u) != 0) ++bad;
    }
    Outcome o;
    o.ok = bad == 0;
    o.detail = "100 rational instances up to 5 nodes, " +
               (bad ? std::to_string(bad) + " nonzero residuals" : std::string("all exactly zero"));
    return o;
}

// ---- 12: quantized two-sided duals --------------------------------------------

Outcome criterion_12() {
    std::vector<IdentityCase> cs;
    for (IdentityTag tag : {IdentityTag::DUAL_QUANTIZED_I, IdentityTag::DUAL_QUANTIZED_II})
        for (LatticeSector sec : {LatticeSector::INTEGER, LatticeSector::HALF_INTEGER})
            for (unsigned seed = 1; seed <= 5; ++seed)
                cs.push_back(make_case(kind_of(tag, 1, sec), seed));
    return run_cases(cs, 1e-4, "quantized duals, both types and sectors");
}

// ---- 13: byte-deterministic reporting -----------------------------------------

Outcome criterion_13() {
    SuiteConfig cfg;
    cfg.global_seed = 5;
    unsigned seed = 1;
    for (IdentityKind k : {kind_of(IdentityTag::CHAIN_S, 1, LatticeSector::INTEGER),
                           kind_of(IdentityTag::STAR_TRIANGLE_S, 1, LatticeSector::INTEGER),
                           kind_of(IdentityTag::CHAIN_D, 1, LatticeSector::HALF_INTEGER),
                           kind_of(IdentityTag::STAR_TRIANGLE_D, 1, LatticeSector::INTEGER,
                                   ParityVariant::V1A),
                           kind_of(IdentityTag::GUSTAFSON_I, 1, LatticeSector::INTEGER),
                           kind_of(IdentityTag::GUSTAFSON_II, 1, LatticeSector::HALF_INTEGER),
                           kind_of(IdentityTag::REDUCED_I, 2, LatticeSector::INTEGER),
                           kind_of(IdentityTag::REDUCED_II_GAMMA, 2, LatticeSector::INTEGER),
                           kind_of(IdentityTag::DUAL_QUANTIZED_I, 1, LatticeSector::INTEGER),
                           kind_of(IdentityTag::ZETA_POLE, 1, LatticeSector::INTEGER)})
        cfg.cases.push_back(make_case(k, seed++));

    int rc[3];
    std::string outs[3];
    for (int run = 0; run < 3; ++run) {
        cfg.worker_count = run == 1 ? 2 : 1; // thread count must not leak into the bytes
        std::ostringstream out, diag;
        rc[run] = cmd_verify(cfg, out, diag);
        outs[run] = out.str();
    }
    Outcome o;
    o.ok = rc[0] == 0 && rc[1] == 0 && rc[2] == 0 && outs[0] == outs[1] && outs[0] == outs[2] &&
           !outs[0].empty();
    o.detail = std::to_string(cfg.cases.size()) + " cases, 3 runs (1/2/1 workers), " +
               (outs[0] == outs[1] && outs[0] == outs[2] ? "byte-identical output"
                                                         : "OUTPUT DIFFERS") +
               ", exit codes " + std::to_string(rc[0]) + "/" + std::to_string(rc[1]) + "/" +
               std::to_string(rc[2]);
    return o;
}

struct Entry {
    int id;
    double time_limit; // seconds; 0 = no stated budget
    Outcome (*fn)();
};

const Entry kEntries[] = {
    {1, 5.0, criterion_1},     {2, 120.0, criterion_2}, {3, 120.0, criterion_3},
    {4, 1200.0, criterion_4},  {5, 300.0, criterion_5}, {6, 300.0, criterion_6},
    {7, 600.0, criterion_7},   {8, 120.0, criterion_8}, {9, 900.0, criterion_9},
    {10, 1800.0, criterion_10}, {11, 1.0, criterion_11}, {12, 600.0, criterion_12},
    {13, 0.0, criterion_13},
};

int run_entry(const Entry& e) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = e.fn();
    } catch (const std::exception& ex) {
        o.ok = false;
        o.detail = std::string("unhandled error: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = e.time_limit <= 0.0 || secs <= e.time_limit;
    const bool pass = o.ok && in_time;
    std::string overrun;
    if (!in_time)
        overrun = ", over the " + std::to_string(static_cast<int>(e.time_limit)) + " s budget";
    std::printf("criterion %2d: %s  %s (%.1f s%s)\n", e.id, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs, overrun.c_str());
    std::fflush(stdout);
    return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <1..13|all>\n");
        return 1;
    }
    if (std::strcmp(argv[1], "all") == 0) {
        int bad = 0;
        for (const Entry& e : kEntries) bad += run_entry(e);
        return bad ? 1 : 0;
    }
    const int id = std::atoi(argv[1]);
    for (const Entry& e : kEntries)
        if (e.id == id) return run_entry(e);
    std::fprintf(stderr, "unknown criterion '%s'\n", argv[1]);
    return 1;
}
