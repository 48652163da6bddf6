#include "gammabarnes/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gammabarnes {

const GLRule& gauss_legendre(int n) {
    static std::map<int, GLRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; standard
    // three-term recurrence gives P_n and P'_n.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one clean-up step after convergence
                p0 = 1.0; p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return cache.emplace(n, std::move(r)).first->second;
}

namespace {

template <class T>
T pairwise_impl(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s = v[0];
        for (size_t i = 1; i < v.size(); ++i) s += v[i];
        return s;
    }
    size_t h = v.size() / 2;
    return pairwise_impl(v.first(h)) + pairwise_impl(v.subspan(h));
}

} // namespace

cxd pairwise_sum(std::span<const cxd> v) { return pairwise_impl(v); }
double pairwise_sum(std::span<const double> v) { return pairwise_impl(v); }

cxd lu_det(std::span<const cxd> a, int n) {
    std::vector<cxd> m(a.begin(), a.end());
    cxd det{1.0, 0.0};
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(m[c * n + c]);
        for (int r = c + 1; r < n; ++r) {
            double v = std::abs(m[r * n + c]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) return {0.0, 0.0};
        if (piv != c) {
            for (int k = c; k < n; ++k) std::swap(m[piv * n + k], m[c * n + k]);
            det = -det;
        }
        det *= m[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            cxd f = m[r * n + c] / m[c * n + c];
            for (int k = c + 1; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
        }
    }
    return det;
}

std::vector<cxd> lu_solve(std::vector<cxd> m, std::vector<cxd> b, int n) {
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(m[c * n + c]);
        for (int r = c + 1; r < n; ++r) {
            double v = std::abs(m[r * n + c]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (piv != c) {
            for (int k = c; k < n; ++k) std::swap(m[piv * n + k], m[c * n + k]);
            std::swap(b[piv], b[c]);
        }
        for (int r = c + 1; r < n; ++r) {
            cxd f = m[r * n + c] / m[c * n + c];
            for (int k = c + 1; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<cxd> x(n);
    for (int r = n - 1; r >= 0; --r) {
        cxd s = b[r];
        for (int k = r + 1; k < n; ++k) s -= m[r * n + k] * x[k];
        x[r] = s / m[r * n + r];
    }
    return x;
}

std::vector<cxd> qr_lstsq(std::span<const cxd> a, std::span<const cxd> b, int m, int n) {
    std::vector<cxd> A(a.begin(), a.end());
    std::vector<cxd> y(b.begin(), b.end());
    // Householder triangularization applied to [A | y].
    for (int c = 0; c < n; ++c) {
        double nrm = 0.0;
        for (int r = c; r < m; ++r) nrm += std::norm(A[r * n + c]);
        nrm = std::sqrt(nrm);
        if (nrm == 0.0) throw std::runtime_error("qr_lstsq: rank deficient");
        cxd pivot = A[c * n + c];
        cxd phase = (std::abs(pivot) > 0.0) ? pivot / std::abs(pivot) : cxd(1.0, 0.0);
        cxd alpha = -phase * nrm;
        // v = x - alpha e_c, applied as P = I - 2 v v^H / |v|^2
        std::vector<cxd> v(m - c);
        v[0] = pivot - alpha;
        for (int r = c + 1; r < m; ++r) v[r - c] = A[r * n + c];
        double vnrm = 0.0;
        for (auto& t : v) vnrm += std::norm(t);
        if (vnrm == 0.0) continue;
        for (int k = c; k < n; ++k) {
            cxd dot{0.0, 0.0};
            for (int r = c; r < m; ++r) dot += std::conj(v[r - c]) * A[r * n + k];
            cxd f = 2.0 * dot / vnrm;
            for (int r = c; r < m; ++r) A[r * n + k] -= f * v[r - c];
        }
        cxd dot{0.0, 0.0};
        for (int r = c; r < m; ++r) dot += std::conj(v[r - c]) * y[r];
        cxd f = 2.0 * dot / vnrm;
        for (int r = c; r < m; ++r) y[r] -= f * v[r - c];
    }
    std::vector<cxd> x(n);
    for (int r = n - 1; r >= 0; --r) {
        cxd s = y[r];
        for (int k = r + 1; k < n; ++k) s -= A[r * n + k] * x[k];
        x[r] = s / A[r * n + r];
    }
    return x;
}

cxd hurwitz_zeta(cxd s, double a) {
    if (a <= 0.0) throw std::invalid_argument("hurwitz_zeta: a must be positive");
    // Euler-Maclaurin: shift a upward until the tail expansion converges fast.
    static const double kB2j[10] = {
        1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0,
        -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0,
    };
    int M = 0;
    while (a + M < 18.0) ++M;
    cxd head{0.0, 0.0};
    for (int k = 0; k < M; ++k) head += std::exp(-s * std::log(a + k));
    double A = a + M;
    cxd lA = std::log(A);
    cxd tail = std::exp((1.0 - s) * lA) / (s - 1.0) + 0.5 * std::exp(-s * lA);
    cxd poch = s; // rising factorial (s)_{2j-1}
    double fact = 2.0; // (2j)!
    for (int j = 1; j <= 10; ++j) {
        tail += kB2j[j - 1] / fact * poch * std::exp(-(s + cxd(2.0 * j - 1.0, 0.0)) * lA);
        poch *= (s + cxd(2.0 * j - 1.0, 0.0)) * (s + cxd(2.0 * j, 0.0));
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return head + tail;
}

cxd neville_at_zero(std::span<const double> xs, std::span<const cxd> ys) {
    std::vector<cxd> p(ys.begin(), ys.end());
    int n = static_cast<int>(p.size());
    for (int lvl = 1; lvl < n; ++lvl)
        for (int i = 0; i < n - lvl; ++i)
            p[i] = (xs[i + lvl] * p[i] - xs[i] * p[i + 1]) / (xs[i + lvl] - xs[i]);
    return p[0];
}

LinFit linear_fit(std::span<const double> x, std::span<const double> y) {
    size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double d = n * sxx - sx * sx;
    LinFit f;
    f.b = (n * sxy - sx * sy) / d;
    f.a = (sy - f.b * sx) / n;
    double ss_res = 0, ss_tot = 0, ym = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.a + f.b * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - ym) * (y[i] - ym);
    }
    f.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

} // namespace gammabarnes
