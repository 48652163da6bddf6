#include <doctest.h>

#include <cmath>
#include <complex>

#include "gammabarnes/identity_suite.hpp"
#include "test_util.hpp"

using namespace gammabarnes;
using testutil::rel;

namespace {

IdentityCase quick_case(IdentityTag tag, LatticeSector sector, unsigned seed,
                        ParityVariant v = ParityVariant::NONE, int N = 1) {
    return make_case({tag, N, sector, v}, seed);
}

} // namespace

TEST_SUITE("identity_suite") {

TEST_CASE("sampling is deterministic per seed") {
    IdentityCase a = quick_case(IdentityTag::CHAIN_S, LatticeSector::INTEGER, 11);
    IdentityCase b = quick_case(IdentityTag::CHAIN_S, LatticeSector::INTEGER, 11);
    IdentityCase c = quick_case(IdentityTag::CHAIN_S, LatticeSector::INTEGER, 12);
    REQUIRE(a.params.alpha.size() == b.params.alpha.size());
    for (std::size_t i = 0; i < a.params.alpha.size(); ++i)
        CHECK(a.params.alpha[i] == b.params.alpha[i]);
    bool all_equal = a.params.alpha.size() == c.params.alpha.size();
    if (all_equal)
        for (std::size_t i = 0; i < a.params.alpha.size(); ++i)
            all_equal = all_equal && (a.params.alpha[i] == c.params.alpha[i]);
    CHECK_FALSE(all_equal);
}

TEST_CASE("first-family lattice integral verifies against its closed form") {
    VerificationReport r =
        verify_case(quick_case(IdentityTag::GUSTAFSON_I, LatticeSector::INTEGER, 21));
    CHECK(r.passed);
    CHECK(r.residual < 1e-6);
}

TEST_CASE("second-family integral verifies in both sectors") {
    CHECK(verify_case(quick_case(IdentityTag::GUSTAFSON_II, LatticeSector::INTEGER, 8)).passed);
    CHECK(verify_case(quick_case(IdentityTag::GUSTAFSON_II, LatticeSector::HALF_INTEGER, 8))
              .passed);
}

TEST_CASE("reduced families verify") {
    CHECK(verify_case(quick_case(IdentityTag::REDUCED_I, LatticeSector::INTEGER, 7)).passed);
    CHECK(verify_case(quick_case(IdentityTag::REDUCED_II_GAMMA, LatticeSector::INTEGER, 4))
              .passed);
}

TEST_CASE("propagator-form chains and star-triangles verify") {
    CHECK(verify_case(quick_case(IdentityTag::CHAIN_S, LatticeSector::INTEGER, 3)).passed);
    CHECK(verify_case(quick_case(IdentityTag::STAR_TRIANGLE_S, LatticeSector::INTEGER, 6))
              .passed);
    CHECK(verify_case(quick_case(IdentityTag::CHAIN_D, LatticeSector::HALF_INTEGER, 5)).passed);
    CHECK(verify_case(quick_case(IdentityTag::STAR_TRIANGLE_D, LatticeSector::INTEGER, 9,
                                 ParityVariant::V2B))
              .passed);
}

TEST_CASE("determinant strategy reproduces the two-fold first family") {
    IdentityCase c = quick_case(IdentityTag::GUSTAFSON_I, LatticeSector::INTEGER, 13,
                                ParityVariant::NONE, 2);
    c.strategy = Strategy::DETERMINANT;
    c.tolerance = 1e-5;
    VerificationReport r = verify_case(c);
    CHECK(r.passed);
}

TEST_CASE("direct two-fold quadrature crosses the closed form on a trimmed grid") {
    IdentityCase c = quick_case(IdentityTag::GUSTAFSON_II, LatticeSector::INTEGER, 1,
                                ParityVariant::NONE, 2);
    c.strategy = Strategy::QUADRATURE;
    c.spec.n_max = 16;
    c.spec.t_max = 24.0;
    c.spec.panels = 32;
    c.spec.nodes_per_panel = 20;
    c.tolerance = 2e-3;
    VerificationReport r = verify_case(c);
    CHECK(r.passed);
}

TEST_CASE("constraint violations are named") {
    IdentityCase c = quick_case(IdentityTag::STAR_TRIANGLE_S, LatticeSector::INTEGER, 6);
    c.params.alpha[0].sigma += 0.3; // breaks the exponent sum
    CHECK_THROWS_AS(check_constraints(c), ConstraintError);
}

TEST_CASE("pole-limit extrapolation recovers the product residue") {
    IdentityCase c = quick_case(IdentityTag::ZETA_POLE, LatticeSector::INTEGER, 4);
    VerificationReport r = zeta_pole_check(c, kDefaultZetaEps);
    CHECK(r.passed);
    CHECK(r.residual < 1e-3);

    double two[] = {0.2, 0.1};
    CHECK_THROWS_AS(zeta_pole_check(c, two), ConstraintError);
}

TEST_CASE("conjectured dual pairs verify at unit rank") {
    IdentityCase c1 = quick_case(IdentityTag::DUAL_QUANTIZED_I, LatticeSector::INTEGER, 2);
    c1.tolerance = 1e-4;
    CHECK(verify_case(c1).passed);
    IdentityCase c2 = quick_case(IdentityTag::DUAL_QUANTIZED_II, LatticeSector::HALF_INTEGER, 2);
    c2.tolerance = 1e-4;
    CHECK(verify_case(c2).passed);
}

TEST_CASE("case digests identify the configuration") {
    IdentityCase a = quick_case(IdentityTag::GUSTAFSON_I, LatticeSector::INTEGER, 21);
    VerificationReport r1 = verify_case(a);
    VerificationReport r2 = verify_case(a);
    CHECK(r1.case_digest == r2.case_digest);
    CHECK(r1.case_digest.find("GUSTAFSON_I") == 0);
    CHECK(rel(r1.lhs.value, r2.lhs.value) == 0.0); // bitwise repeatable
}

} // TEST_SUITE
