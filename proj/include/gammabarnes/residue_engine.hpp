#pragma once
#include <utility>
#include <vector>

#include "gammabarnes/mb_quadrature.hpp"

namespace gammabarnes {

enum class MomentMethod { QUADRATURE, RESIDUE_SERIES };

struct MomentMatrix {
    std::vector<cxd> entries; // row-major N x N
    int N = 0;
    MomentMethod method = MomentMethod::QUADRATURE;
};

// Rising factorial (a)_p.
cxd pochhammer(cxd a, int p);

// Mellin moment Q_ik of the type-I kernel: the lattice integral of
// u^(i-1) (-ubar)^(k-1) prod_j (-1)^((N+1)[u]) bGamma(z_j - u) bGamma(u + w_j)
// over the integer sector, either by quadrature or by the factorized residue
// series (sum over poles crossed when closing the contour), truncated at
// P_max terms per sum with a fitted power-law tail. tail_est, when given,
// receives the absolute tail correction estimate of the slower sum.
cxd mellin_moment(int i, int k, std::span<const Column> z, std::span<const Column> w,
                  MomentMethod method, int P_max = 3000, double* tail_est = nullptr);

MomentMatrix moment_matrix(std::span<const Column> z, std::span<const Column> w, int N,
                           MomentMethod method, int P_max = 3000);

// det of the N x N moment matrix: the determinant representation of the
// N-fold type-I integral.
cxd det_q(std::span<const Column> z, std::span<const Column> w, int N, MomentMethod method,
          int P_max = 3000);

// Type-II determinant representation: kappa_N * det of the matrix of moments
// 2 * integral of u^(2i-1) (-ubar)^(2k-1) prod_j bGamma(z_j +- u), with
// kappa_N = 1 (integer sector) or (-1)^(N(N+1)/2) (half-integer sector).
cxd det_q_tilde(std::span<const Column> z, int N, LatticeSector sector);

double kappa_n(int N, LatticeSector sector);

// Milne's U(n) Gauss summation: truncated N-fold hypergeometric sum against
// its closed Gamma-ratio form; both sides returned for comparison. sigma is
// a permutation of {0..N} selecting which alpha anchors the series.
std::pair<cxd, cxd> milne_gauss_check(std::span<const cxd> alpha, std::span<const cxd> beta,
                                      std::span<const int> sigma, int P_max);

// Permutation sine sum R_N against its closed form N! sin(pi Sum(z+w)).
std::pair<cxd, cxd> r_n(std::span<const Column> z, std::span<const Column> w, int N);

// Injective-map sine sum T_N; identically 1 for admissible z (2N+2 entries).
cxd t_n(std::span<const Column> z, int N);

} // namespace gammabarnes
