#include <doctest.h>

#include <cmath>
#include <complex>

#include "gammabarnes/propagators.hpp"
#include "test_util.hpp"

using namespace gammabarnes;
using testutil::rel;

TEST_SUITE("propagators") {

TEST_CASE("s_prop power law and phase") {
    // on the unit circle only the discrete phase survives
    CHECK(rel(s_prop({cxd(0.0, 1.0)}, {2, cxd(0.7, 0.0)}), cxd(0.0, -1.0)) < 1e-14);
    // on the positive axis only the modulus power survives
    CHECK(rel(s_prop({cxd(2.0, 0.0)}, {2, cxd(0.7, 0.0)}), cxd(std::pow(2.0, -1.4), 0.0)) <
          1e-14);
    // inverse exponent gives the exact reciprocal
    cxd z(0.4, -1.1);
    Index a{4, cxd(0.35, 0.2)};
    CHECK(rel(s_prop({z}, a) * s_prop({z}, -a), cxd(1.0, 0.0)) < 1e-13);

    CHECK_THROWS_AS(s_prop({cxd(0.0, 0.0)}, a), OriginError);
    CHECK_THROWS_AS(s_prop({z}, Index{3, cxd(0.5, 0.0)}), SectorError);
}

TEST_CASE("half_shift maps exponents to lattice points") {
    FieldPoint h = half_shift({2, cxd(0.7, 0.0)});
    CHECK(h.twice_n == -1);
    CHECK(rel(h.nu, cxd(0.15, 0.0)) < 1e-15);
    CHECK_THROWS_AS(half_shift({3, cxd(0.5, 0.0)}), SectorMismatch);
}

TEST_CASE("S_prop value, parity gate and sign") {
    GammaValue s = S_prop({1, cxd(0.2, 0.3)}, {2, cxd(0.65, 0.1)});
    REQUIRE(s.kind == Kind::FINITE);
    CHECK(rel(s.value, cxd(2.33173517574722368, -0.853847850354315289)) < 1e-12);

    // q = twice_m + 2 twice_n = 2 (mod 4): not a lattice-coordinated pair
    CHECK_THROWS_AS(S_prop({0, cxd(0.2, 0.3)}, {2, cxd(0.65, 0.1)}), SectorMismatch);
}

TEST_CASE("D_prop value and exchange symmetry") {
    FieldPoint z1{1, cxd(0.1, 0.4)}, z2{0, cxd(-0.2, 0.1)};
    Index a{-2, cxd(0.7, -0.05)};
    GammaValue d = D_prop(z1, z2, a);
    REQUIRE(d.kind == Kind::FINITE);
    CHECK(rel(d.value, cxd(-7.93526462886401824, 1.48369798497297541)) < 1e-12);

    GammaValue d2 = D_prop(z2, z1, a);
    REQUIRE(d2.kind == Kind::FINITE);
    CHECK(rel(d2.value, d.value) < 1e-13);

    // evenness in each argument separately
    GammaValue d3 = D_prop(-z1, z2, a);
    REQUIRE(d3.kind == Kind::FINITE);
    CHECK(rel(d3.value, d.value) < 1e-13);

    CHECK_THROWS_AS(D_prop(z1, z2, Index{0, cxd(0.7, 0.0)}), SectorMismatch);
}

} // TEST_SUITE
