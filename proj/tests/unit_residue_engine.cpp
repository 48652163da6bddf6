#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "gammabarnes/residue_engine.hpp"
#include "test_util.hpp"

using namespace gammabarnes;
using testutil::rel;

namespace {

// admissible parameter sets: lattice offsets cancel and Re sums stay below 1,
// so the factorized residue series converges on both sides
std::vector<Column> z1() { return {{0, cxd(0.14, 0.05)}, {2, cxd(0.11, -0.08)}}; }
std::vector<Column> w1() { return {{0, cxd(0.12, 0.0)}, {-2, cxd(0.16, 0.03)}}; }
std::vector<Column> z2() {
    return {{0, cxd(0.12, 0.04)}, {2, cxd(0.10, -0.06)}, {-2, cxd(0.15, 0.02)}};
}
std::vector<Column> w2() {
    return {{0, cxd(0.11, 0.0)}, {-2, cxd(0.13, 0.05)}, {2, cxd(0.14, -0.03)}};
}

} // namespace

TEST_SUITE("residue_engine") {

TEST_CASE("pochhammer") {
    CHECK(rel(pochhammer(cxd(2, 0), 3), cxd(24, 0)) < 1e-15);
    CHECK(rel(pochhammer(cxd(0.5, 0), 2), cxd(0.75, 0)) < 1e-15);
    CHECK(rel(pochhammer(cxd(-1.3, 0.4), 0), cxd(1, 0)) < 1e-15);
}

TEST_CASE("mellin moments agree across quadrature and residue series") {
    auto z = z1(), w = w1();
    double tail = 0.0;
    cxd q = mellin_moment(1, 1, z, w, MomentMethod::QUADRATURE);
    cxd r = mellin_moment(1, 1, z, w, MomentMethod::RESIDUE_SERIES, 3000, &tail);
    CHECK(rel(r, q) < 1e-9);
    CHECK(tail < 1e-8);
}

TEST_CASE("moment matrix and determinant are method-independent") {
    auto z = z2(), w = w2();
    MomentMatrix mq = moment_matrix(z, w, 2, MomentMethod::QUADRATURE);
    MomentMatrix mr = moment_matrix(z, w, 2, MomentMethod::RESIDUE_SERIES);
    REQUIRE(mq.N == 2);
    REQUIRE(mr.N == 2);
    for (int i = 0; i < 4; ++i) CHECK(rel(mr.entries[i], mq.entries[i]) < 1e-8);

    cxd dq = det_q(z, w, 2, MomentMethod::QUADRATURE);
    cxd dr = det_q(z, w, 2, MomentMethod::RESIDUE_SERIES);
    CHECK(rel(dr, dq) < 1e-7);
}

TEST_CASE("kappa sign") {
    CHECK(kappa_n(1, LatticeSector::INTEGER) == doctest::Approx(1.0));
    CHECK(kappa_n(1, LatticeSector::HALF_INTEGER) == doctest::Approx(-1.0));
    CHECK(kappa_n(2, LatticeSector::HALF_INTEGER) == doctest::Approx(-1.0));
}

TEST_CASE("Gauss summation lhs meets the closed ratio") {
    std::vector<cxd> alpha = {cxd(-0.30, 0.10), cxd(-0.25, 0.0)};
    std::vector<cxd> beta = {cxd(-0.20, -0.05), cxd(-0.35, 0.0)};
    std::vector<int> s01 = {0, 1}, s10 = {1, 0};
    auto [l1, r1] = milne_gauss_check(alpha, beta, s01, 4000);
    CHECK(rel(l1, r1) < 1e-5);
    auto [l2, r2] = milne_gauss_check(alpha, beta, s10, 4000);
    CHECK(rel(l2, r2) < 1e-5);

    std::vector<cxd> big_a = {cxd(1.6, 0.0), cxd(0.7, 0.0)}; // exponent sum past 1
    CHECK_THROWS_AS(milne_gauss_check(big_a, beta, s01, 100), TruncationError);
}

TEST_CASE("permutation sine sum matches N! sin(pi Sum)") {
    std::vector<Column> z1 = {{0, cxd(0.20, 0.10)}, {2, cxd(0.15, -0.05)}};
    std::vector<Column> w1 = {{0, cxd(0.30, 0.0)}, {-2, cxd(0.10, 0.20)}};
    auto [lhs1, rhs1] = r_n(z1, w1, 1);
    CHECK(std::abs(lhs1 - rhs1) <= 1e-8 * std::max(1.0, std::abs(rhs1)));

    std::vector<Column> z2 = {{0, cxd(0.20, 0.10)}, {2, cxd(0.15, -0.05)}, {-2, cxd(0.22, 0.03)}};
    std::vector<Column> w2 = {{0, cxd(0.30, 0.0)}, {-2, cxd(0.10, 0.20)}, {2, cxd(0.17, -0.12)}};
    auto [lhs2, rhs2] = r_n(z2, w2, 2);
    CHECK(std::abs(lhs2 - rhs2) <= 1e-8 * std::max(1.0, std::abs(rhs2)));

    std::vector<Column> wdup = {{0, cxd(0.30, 0.0)}, {4, cxd(0.30, 0.0)}}; // hol parts differ by 1
    CHECK_THROWS_AS(r_n(z1, wdup, 1), DegenerateError);
}

TEST_CASE("injective-map sine sum is identically one") {
    std::vector<Column> z4 = {{0, cxd(0.21, 0.13)}, {2, cxd(0.34, -0.08)},
                              {-2, cxd(0.11, 0.27)}, {4, cxd(0.42, 0.05)}};
    CHECK(std::abs(t_n(z4, 1) - cxd(1.0, 0.0)) < 1e-10);

    std::vector<Column> z6 = {{0, cxd(0.21, 0.13)},  {2, cxd(0.34, -0.08)},
                              {-2, cxd(0.11, 0.27)}, {4, cxd(0.42, 0.05)},
                              {0, cxd(0.55, -0.19)}, {-4, cxd(0.07, 0.31)}};
    CHECK(std::abs(t_n(z6, 2) - cxd(1.0, 0.0)) < 1e-10);

    std::vector<Column> zdup = {{0, cxd(0.21, 0.13)}, {0, cxd(0.21, 0.13)},
                                {2, cxd(0.3, 0.0)},   {4, cxd(0.4, 0.0)}};
    CHECK_THROWS_AS(t_n(zdup, 1), DegenerateError);
}

} // TEST_SUITE
