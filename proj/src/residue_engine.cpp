#include "gammabarnes/residue_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gammabarnes/numerics.hpp"

namespace gammabarnes {

namespace {
using detail::log_gamma_unchecked;

cxd sinpi(cxd x) { return std::sin(M_PI * x); }

cxd ipow(cxd b, int e) {
    cxd r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// Fit t_p ~ sum_j c_j p^(s-j) on the tail of the computed terms and return the
// analytically continued remainder sum_{p > P} of the model. err_out receives
// an uncertainty for that remainder: model-order sensitivity plus the relative
// misfit on the fitting window scaled by the remainder itself.
cxd power_tail(std::span<const cxd> terms, int P_fit, cxd s, double* err_out = nullptr,
               int J = 5) {
    int P = static_cast<int>(terms.size()) - 1;
    int m = P - P_fit + 1;
    std::vector<cxd> B(m * J), rhs(m);
    std::vector<double> wt(m);
    for (int r = 0; r < m; ++r)
        wt[r] = 1.0 / std::max(std::abs(terms[P_fit + r]), 1e-300);
    for (int r = 0; r < m; ++r) {
        double lp = std::log(static_cast<double>(P_fit + r));
        for (int j = 0; j < J; ++j) B[r * J + j] = std::exp((s - cxd(j, 0.0)) * lp) * wt[r];
        rhs[r] = terms[P_fit + r] * wt[r];
    }
    auto continued = [&](int terms_used) {
        std::vector<cxd> Bj(m * terms_used);
        for (int r = 0; r < m; ++r)
            for (int j = 0; j < terms_used; ++j) Bj[r * terms_used + j] = B[r * J + j];
        std::vector<cxd> coef = qr_lstsq(Bj, rhs, m, terms_used);
        cxd t{0.0, 0.0};
        for (int j = 0; j < terms_used; ++j)
            t += coef[j] * hurwitz_zeta(-(s - cxd(j, 0.0)), P + 1.0);
        double mis = 0.0;
        for (int r = 0; r < m; ++r) {
            cxd fit{0.0, 0.0};
            for (int j = 0; j < terms_used; ++j) fit += Bj[r * terms_used + j] * coef[j];
            mis = std::max(mis, std::abs(fit - rhs[r])); // rows are unit-normalized
        }
        return std::pair{t, mis};
    };
    auto [tail, mis] = continued(J);
    if (err_out) {
        auto [tail_lo, mis_lo] = continued(J - 1);
        (void)mis_lo;
        *err_out = std::abs(tail - tail_lo) + mis * std::abs(tail);
    }
    return tail;
}

// sum_p weight(p) * prod_m (num_m)_p / (den_m)_p with weight (-w0 - p)^kpow
// (hol side) or (w0 + p)^kpow (anti side).
cxd hyper_sum(bool hol_side, cxd w0, int kpow, std::span<const cxd> num,
              std::span<const cxd> den, int P, double* tail_abs) {
    std::vector<cxd> terms(P + 1);
    cxd T{1.0, 0.0};
    for (int p = 0; p <= P; ++p) {
        cxd wgt = hol_side ? ipow(-w0 - cxd(p, 0.0), kpow) : ipow(w0 + cxd(p, 0.0), kpow);
        terms[p] = wgt * T;
        cxd r{1.0, 0.0};
        for (size_t m = 0; m < num.size(); ++m)
            r *= (num[m] + cxd(p, 0.0)) / (den[m] + cxd(p, 0.0));
        T *= r;
    }
    cxd s{static_cast<double>(kpow), 0.0};
    for (const auto& a : num) s += a;
    for (const auto& b : den) s -= b;
    double err = 0.0;
    cxd tail = power_tail(terms, static_cast<int>(P * 0.7), s, &err);
    if (tail_abs) *tail_abs = err;
    return pairwise_sum(terms) + tail;
}

cxd moment_series(int i, int k, std::span<const Column> z, std::span<const Column> w, int P,
                  double* tail_est) {
    int N = static_cast<int>(z.size()) - 1;
    cxd acc{0.0, 0.0};
    double worst_tail = 0.0;
    for (int j = 0; j <= N; ++j) {
        long long twj = std::llround(w[j].tw);
        if (twj % 2 != 0)
            throw SectorMismatch("mellin_moment residue series requires integer-sector w");
        double pref = parity_sign(static_cast<long long>(N + 1) * (twj / 2));
        cxd lg{0.0, 0.0};
        for (int m = 0; m <= N; ++m)
            lg += log_gamma_unchecked(z[m].hol() + w[j].hol()) -
                  log_gamma_unchecked(1.0 - z[m].anti() - w[j].anti());
        for (int m = 0; m <= N; ++m) {
            if (m == j) continue;
            lg += log_gamma_unchecked(w[m].hol() - w[j].hol()) -
                  log_gamma_unchecked(1.0 - w[m].anti() + w[j].anti());
        }
        std::vector<cxd> num_h(N + 1), den_h(N + 1), num_a(N + 1), den_a(N + 1);
        for (int m = 0; m <= N; ++m) {
            num_h[m] = z[m].hol() + w[j].hol();
            den_h[m] = 1.0 - w[m].hol() + w[j].hol();
            num_a[m] = z[m].anti() + w[j].anti();
            den_a[m] = 1.0 - w[m].anti() + w[j].anti();
        }
        double th = 0.0, ta = 0.0;
        cxd Hi = hyper_sum(true, w[j].hol(), i - 1, num_h, den_h, P, &th);
        cxd Ak = hyper_sum(false, w[j].anti(), k - 1, num_a, den_a, P, &ta);
        acc += pref * std::exp(lg) * Hi * Ak;
        worst_tail = std::max(worst_tail, std::abs(std::exp(lg)) *
                                              (th * std::abs(Ak) + ta * std::abs(Hi)));
    }
    if (tail_est) *tail_est = worst_tail;
    return acc;
}

} // namespace

cxd pochhammer(cxd a, int p) {
    cxd r{1.0, 0.0};
    for (int j = 0; j < p; ++j) r *= a + cxd(j, 0.0);
    return r;
}

cxd mellin_moment(int i, int k, std::span<const Column> z, std::span<const Column> w,
                  MomentMethod method, int P_max, double* tail_est) {
    int N = static_cast<int>(z.size()) - 1;
    if (method == MomentMethod::QUADRATURE) {
        LatticeIntegrand f;
        f.zc.assign(z.begin(), z.end());
        f.wc.assign(w.begin(), w.end());
        f.phase_c = N + 1;
        f.mono_a = i - 1;
        f.mono_b = k - 1;
        if (f.s_exponent().real() >= -1.0)
            throw DivergentError("mellin_moment: type-I moment integral diverges");
        ValueWithError v = integrate_lattice(f, MeasureSpec{});
        if (tail_est) *tail_est = v.tail_bound;
        return v.value;
    }
    // Residue-series preconditions: holomorphic and antiholomorphic sums of
    // the parameters must stay below 1 for the closed-contour expansion.
    cxd sh{0.0, 0.0}, sa{0.0, 0.0};
    for (const auto& c : z) { sh += c.hol(); sa += c.anti(); }
    for (const auto& c : w) { sh += c.hol(); sa += c.anti(); }
    if (sh.real() >= 1.0 || sa.real() >= 1.0)
        throw DivergentError("mellin_moment: residue series conditions violated");
    double tail = 0.0;
    cxd v = moment_series(i, k, z, w, P_max, &tail);
    if (tail_est) *tail_est = tail;
    if (tail > 0.1 * std::abs(v) + 1e-300)
        throw TruncationError("mellin_moment: residue series tail estimate too large");
    return v;
}

MomentMatrix moment_matrix(std::span<const Column> z, std::span<const Column> w, int N,
                           MomentMethod method, int P_max) {
    MomentMatrix M;
    M.N = N;
    M.method = method;
    M.entries.resize(N * N);
    for (int i = 1; i <= N; ++i)
        for (int k = 1; k <= N; ++k)
            M.entries[(i - 1) * N + (k - 1)] = mellin_moment(i, k, z, w, method, P_max);
    return M;
}

cxd det_q(std::span<const Column> z, std::span<const Column> w, int N, MomentMethod method,
          int P_max) {
    MomentMatrix M = moment_matrix(z, w, N, method, P_max);
    return lu_det(M.entries, N);
}

double kappa_n(int N, LatticeSector sector) {
    if (sector == LatticeSector::INTEGER) return 1.0;
    return parity_sign(static_cast<long long>(N) * (N + 1) / 2);
}

cxd det_q_tilde(std::span<const Column> z, int N, LatticeSector sector) {
    MeasureSpec spec;
    spec.sector = sector;
    std::vector<cxd> entries(N * N);
    for (int i = 1; i <= N; ++i)
        for (int k = 1; k <= N; ++k) {
            LatticeIntegrand f;
            f.zc.assign(z.begin(), z.end());
            f.wc.assign(z.begin(), z.end());
            f.mono_a = 2 * i - 1;
            f.mono_b = 2 * k - 1;
            f.constant = cxd(2.0, 0.0);
            if (f.s_exponent().real() >= -1.0)
                throw DivergentError("det_q_tilde: type-II moment integral diverges");
            entries[(i - 1) * N + (k - 1)] = integrate_lattice(f, spec).value;
        }
    return kappa_n(N, sector) * lu_det(entries, N);
}

std::pair<cxd, cxd> milne_gauss_check(std::span<const cxd> alpha, std::span<const cxd> beta,
                                      std::span<const int> sigma, int P_max) {
    int N = static_cast<int>(alpha.size()) - 1;
    cxd sum_ab{0.0, 0.0};
    for (const auto& a : alpha) sum_ab += a;
    for (const auto& b : beta) sum_ab += b;
    if (sum_ab.real() >= 1.0)
        throw TruncationError("milne_gauss_check: series does not converge");

    std::vector<cxd> a_s(N);
    for (int kk = 0; kk < N; ++kk) a_s[kk] = alpha[sigma[kk]];

    auto term_ratio = [&](cxd anchor, int p) {
        cxd r{1.0, 0.0};
        for (int i = 0; i <= N; ++i)
            r *= (beta[i] + anchor + cxd(p, 0.0)) / (1.0 - alpha[i] + anchor + cxd(p, 0.0));
        return r;
    };

    cxd lhs{0.0, 0.0};
    if (N == 1) {
        std::vector<cxd> T(P_max + 1);
        T[0] = cxd(1.0, 0.0);
        for (int p = 0; p < P_max; ++p) T[p + 1] = T[p] * term_ratio(a_s[0], p);
        lhs = pairwise_sum(T);
    } else if (N == 2) {
        std::vector<cxd> t1(P_max + 1), t2(P_max + 1);
        t1[0] = t2[0] = cxd(1.0, 0.0);
        for (int p = 0; p < P_max; ++p) {
            t1[p + 1] = t1[p] * term_ratio(a_s[0], p);
            t2[p + 1] = t2[p] * term_ratio(a_s[1], p);
        }
        std::vector<cxd> rows(P_max + 1);
        std::vector<cxd> row(P_max + 1);
        for (int p1 = 0; p1 <= P_max; ++p1) {
            for (int p2 = 0; p2 <= P_max; ++p2)
                row[p2] = t1[p1] * t2[p2] * ((a_s[0] + cxd(p1, 0.0)) - (a_s[1] + cxd(p2, 0.0)));
            rows[p1] = pairwise_sum(row);
        }
        lhs = pairwise_sum(rows);
    } else {
        throw Error("milne_gauss_check: N > 2 not supported");
    }

    cxd lg = log_gamma_unchecked(1.0 - sum_ab);
    for (int i = 0; i < N; ++i)
        lg += log_gamma_unchecked(1.0 + alpha[sigma[i]] - alpha[sigma[N]]);
    for (int i = 0; i <= N; ++i)
        lg -= log_gamma_unchecked(1.0 - beta[i] - alpha[sigma[N]]);
    cxd van{1.0, 0.0};
    for (int k = 0; k < N; ++k)
        for (int m = k + 1; m < N; ++m) van *= alpha[sigma[k]] - alpha[sigma[m]];
    return {lhs, van * std::exp(lg)};
}

std::pair<cxd, cxd> r_n(std::span<const Column> z, std::span<const Column> w, int N) {
    std::vector<cxd> zh(N + 1), wh(N + 1), wa(N + 1);
    for (int i = 0; i <= N; ++i) {
        zh[i] = z[i].hol();
        wh[i] = w[i].hol();
        wa[i] = w[i].anti();
    }
    for (int j = 0; j <= N; ++j)
        for (int k = j + 1; k <= N; ++k)
            if (std::abs(sinpi(wh[j] - wh[k])) < 1e-12)
                throw DegenerateError("r_n: coincident w parameters (mod 1)");

    std::vector<int> sig(N + 1);
    for (int i = 0; i <= N; ++i) sig[i] = i;
    cxd tot{0.0, 0.0};
    do {
        cxd num{1.0, 0.0};
        for (int k = 0; k <= N; ++k) num *= sinpi(zh[sig[k]] + wh[sig[N]]);
        cxd den{1.0, 0.0};
        for (int k = 0; k < N; ++k) den *= sinpi(wh[sig[N]] - wh[sig[k]]);
        long long ph = 0;
        for (int s = 0; s < N; ++s)
            ph += static_cast<long long>(N + 1) * (std::llround(w[sig[s]].tw) / 2);
        cxd rat{1.0, 0.0};
        for (int k = 0; k < N; ++k)
            for (int j = k + 1; j < N; ++j)
                rat *= sinpi(wa[sig[j]] - wa[sig[k]]) / sinpi(wh[sig[j]] - wh[sig[k]]);
        tot += num / den * parity_sign(ph) * rat;
    } while (std::next_permutation(sig.begin(), sig.end()));

    cxd S{0.0, 0.0};
    for (int i = 0; i <= N; ++i) S += zh[i] + wh[i];
    double fact = 1.0;
    for (int i = 2; i <= N; ++i) fact *= i;
    return {tot, fact * sinpi(S)};
}

cxd t_n(std::span<const Column> z, int N) {
    int n2 = static_cast<int>(z.size());
    std::vector<cxd> zh(n2);
    for (int i = 0; i < n2; ++i) zh[i] = z[i].hol();
    for (int i = 0; i < n2; ++i)
        for (int j = i + 1; j < n2; ++j)
            if (std::abs(sinpi(zh[i] - zh[j])) < 1e-12 || std::abs(sinpi(zh[i] + zh[j])) < 1e-12)
                throw DegenerateError("t_n: degenerate z parameters (mod 1)");

    double fact = 1.0;
    for (int i = 2; i <= N; ++i) fact *= i;
    cxd pref = parity_sign(N) / (std::pow(2.0, N) * fact);
    for (int i = 0; i < n2; ++i)
        for (int j = i + 1; j < n2; ++j) pref *= sinpi(zh[i] + zh[j]);
    cxd S{0.0, 0.0};
    for (const auto& v : zh) S += v;
    pref /= sinpi(S);

    // Sum over injective maps pi: {1..N} -> {1..2N+2}, enumerated as ordered
    // tuples of distinct indices.
    cxd tot{0.0, 0.0};
    std::vector<int> pi(N);
    std::function<void(int)> rec = [&](int depth) {
        if (depth == N) {
            cxd num{1.0, 0.0};
            for (int a = 0; a < N; ++a)
                for (int b = a + 1; b < N; ++b) {
                    cxd f = sinpi(zh[pi[a]] + zh[pi[b]]) * sinpi(zh[pi[a]] - zh[pi[b]]);
                    num *= f * f;
                }
            for (int j = 0; j < N; ++j) num *= sinpi(2.0 * zh[pi[j]]);
            cxd den{1.0, 0.0};
            for (int j = 0; j < N; ++j)
                for (int i = 0; i < n2; ++i) {
                    if (i == pi[j]) continue;
                    den *= sinpi(zh[i] + zh[pi[j]]) * sinpi(zh[i] - zh[pi[j]]);
                }
            tot += num / den;
            return;
        }
        for (int i = 0; i < n2; ++i) {
            bool used = false;
            for (int d = 0; d < depth; ++d) used |= (pi[d] == i);
            if (used) continue;
            pi[depth] = i;
            rec(depth + 1);
        }
    };
    rec(0);
    return pref * tot;
}

} // namespace gammabarnes
