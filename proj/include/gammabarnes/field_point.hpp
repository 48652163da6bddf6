#pragma once
#include <complex>

namespace gammabarnes {

using cxd = std::complex<double>;

enum class Parity { EVEN, ODD };

// Point u = n/2 + nu on the complex field lattice. The discrete part n may be
// integer or half-integer; twice_n = 2n keeps it exact in both sectors.
// Holomorphic and antiholomorphic components: u = n/2 + nu, ubar = -n/2 + nu,
// so u - ubar = n =: [u] and (u + ubar)/2 = nu =: <u>.
struct FieldPoint {
    int twice_n = 0;
    cxd nu{0.0, 0.0};

    double discrete() const { return 0.5 * twice_n; }          // [u] = n
    cxd hol() const { return 0.25 * twice_n + nu; }            // u
    cxd anti() const { return -0.25 * twice_n + nu; }          // ubar
    Parity sector() const { return (twice_n % 2 == 0) ? Parity::EVEN : Parity::ODD; }

    FieldPoint operator+(const FieldPoint& o) const { return {twice_n + o.twice_n, nu + o.nu}; }
    FieldPoint operator-(const FieldPoint& o) const { return {twice_n - o.twice_n, nu - o.nu}; }
    FieldPoint operator-() const { return {-twice_n, -nu}; }
    bool operator==(const FieldPoint& o) const { return twice_n == o.twice_n && nu == o.nu; }
};

// norm_sq(u) = -u*ubar = n^2/4 - nu^2; real and nonnegative for imaginary nu.
inline cxd norm_sq(const FieldPoint& u) {
    double n = u.discrete();
    return 0.25 * n * n - u.nu * u.nu;
}

// Index alpha = [alpha]/2 + sigma with discrete part [alpha] = twice_m/2 and
// continuous part sigma = <alpha>. Same (discrete, continuous) layout as
// FieldPoint: alpha_hol - alpha_anti = [alpha].
struct Index {
    int twice_m = 0;
    cxd sigma{0.0, 0.0};

    double discrete() const { return 0.5 * twice_m; }          // [alpha]
    cxd hol() const { return 0.25 * twice_m + sigma; }         // alpha
    cxd anti() const { return -0.25 * twice_m + sigma; }       // alphabar
    Parity sector() const { return (twice_m % 2 == 0) ? Parity::EVEN : Parity::ODD; }

    Index operator+(const Index& o) const { return {twice_m + o.twice_m, sigma + o.sigma}; }
    Index operator-(const Index& o) const { return {twice_m - o.twice_m, sigma - o.sigma}; }
    Index operator-() const { return {-twice_m, -sigma}; }
    bool operator==(const Index& o) const { return twice_m == o.twice_m && sigma == o.sigma; }
};

// Exact parity sign (-1)^k for integer k held as a plain int.
inline double parity_sign(long long k) { return (k % 2 != 0) ? -1.0 : 1.0; }

} // namespace gammabarnes
