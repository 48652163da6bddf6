#pragma once
#include <complex>
#include <span>
#include <vector>

namespace gammabarnes {

using cxd = std::complex<double>;

// Gauss-Legendre nodes and weights on [-1, 1], cached per order.
struct GLRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GLRule& gauss_legendre(int n);

// Pairwise (cascade) summation; keeps roundoff ~log(n) ulps.
cxd pairwise_sum(std::span<const cxd> v);
double pairwise_sum(std::span<const double> v);

// Determinant of a dense complex matrix (row-major n x n) via LU with
// partial pivoting. The input is copied.
cxd lu_det(std::span<const cxd> a, int n);

// Solve the square system A x = b in place (partial-pivot LU); A row-major.
std::vector<cxd> lu_solve(std::vector<cxd> a, std::vector<cxd> b, int n);

// Least-squares solution of an m x n (m >= n) complex system via Householder
// QR. Returns coefficients c minimizing |A c - b|.
std::vector<cxd> qr_lstsq(std::span<const cxd> a, std::span<const cxd> b, int m, int n);

// Hurwitz zeta(s, a) for complex s != 1 and a > 0, by Euler-Maclaurin.
cxd hurwitz_zeta(cxd s, double a);

// Neville polynomial extrapolation of (xs, ys) to x = 0.
cxd neville_at_zero(std::span<const double> xs, std::span<const cxd> ys);

// Ordinary least squares y ~ a + b*x with coefficient of determination.
struct LinFit {
    double a = 0.0;
    double b = 0.0;
    double r2 = 0.0;
};
LinFit linear_fit(std::span<const double> x, std::span<const double> y);

} // namespace gammabarnes
