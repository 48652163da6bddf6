#include <doctest.h>

#include <sstream>
#include <string>

#include "gammabarnes/cli_report.hpp"
#include "gammabarnes/gamma_core.hpp"

using namespace gammabarnes;

namespace {

struct NudgeGuard {
    ~NudgeGuard() { detail::log_gamma_nudge() = 0.0; }
};

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

std::string trimmed_chain_config() {
    return "format = jsonl\n"
           "case {\n"
           "  identity = CHAIN_S\n"
           "  seed = 3\n"
           "  tolerance = 1e-3\n"
           "  n_max = 20\n"
           "  t_max = 24\n"
           "  panels = 24\n"
           "  nodes_per_panel = 10\n"
           "}\n";
}

} // namespace

TEST_SUITE("cli_report") {

TEST_CASE("minimal config defaults") {
    SuiteConfig cfg = parse_suite_config("case {\n identity = CHAIN_S\n}\n");
    REQUIRE(cfg.cases.size() == 1);
    CHECK(cfg.cases[0].kind.tag == IdentityTag::CHAIN_S);
    CHECK(cfg.cases[0].seed == 1); // global seed 1 plus case index 0
    CHECK(cfg.cases[0].tolerance == doctest::Approx(1e-6));
    CHECK(cfg.global_seed == 1);
    CHECK(cfg.worker_count == 0);
    CHECK(cfg.format == ReportFormat::JSONL);
    CHECK_FALSE(cfg.timings);
}

TEST_CASE("full config with overrides") {
    const std::string text =
        "seed = 42\n"
        "workers = 2\n"
        "format = text\n"
        "timings = true\n"
        "\n"
        "# first case overrides the sampler outputs\n"
        "case {\n"
        "  identity = GUSTAFSON_II\n"
        "  sector = HALF_INTEGER\n"
        "  seed = 9\n"
        "  tolerance = 1e-5\n"
        "  n_max = 20\n"
        "  z = 0:0.14:0.05, 2:0.11:-0.08\n"
        "}\n"
        "case {\n"
        "  identity = STAR_TRIANGLE_D\n"
        "  variant = V2B\n"
        "}\n";
    SuiteConfig cfg = parse_suite_config(text);
    CHECK(cfg.global_seed == 42);
    CHECK(cfg.worker_count == 2);
    CHECK(cfg.format == ReportFormat::TEXT);
    CHECK(cfg.timings);
    REQUIRE(cfg.cases.size() == 2);

    const IdentityCase& c0 = cfg.cases[0];
    CHECK(c0.kind.tag == IdentityTag::GUSTAFSON_II);
    CHECK(c0.kind.sector == LatticeSector::HALF_INTEGER);
    CHECK(c0.seed == 9);
    CHECK(c0.tolerance == doctest::Approx(1e-5));
    CHECK(c0.spec.n_max == 20);
    REQUIRE(c0.params.z.size() == 2);
    CHECK(c0.params.z[1].tw == doctest::Approx(2.0));
    CHECK(c0.params.z[1].nu.imag() == doctest::Approx(-0.08));

    const IdentityCase& c1 = cfg.cases[1];
    CHECK(c1.kind.tag == IdentityTag::STAR_TRIANGLE_D);
    CHECK(c1.kind.parity_variant == ParityVariant::V2B);
    CHECK(c1.kind.sector == LatticeSector::HALF_INTEGER); // forced by the variant
    CHECK(c1.seed == 43); // global seed 42 plus case index 1
}

TEST_CASE("config errors name the line") {
    CHECK_THROWS_AS(parse_suite_config(""), ConfigError);

    try {
        parse_suite_config("bananas = 3\ncase {\n identity = CHAIN_S\n}\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(contains(e.what(), "bananas"));
        CHECK(contains(e.what(), "line 1"));
    }

    CHECK_THROWS_AS(parse_suite_config("case {\n identity = CHAIN_S\n sector = DIAGONAL\n}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_suite_config("case {\n identity = CHAIN_S\n z = 1:2\n}\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_suite_config("case {\n identity = CHAIN_S\n"), ConfigError);
    CHECK_THROWS_AS(parse_suite_config("case {\n seed = 5\n}\n"), ConfigError); // no identity
    CHECK_THROWS_AS(parse_suite_config("workers = 0\ncase {\n identity = CHAIN_S\n}\n"),
                    ConfigError);
}

TEST_CASE("verify runs a case and reports deterministically") {
    SuiteConfig cfg = parse_suite_config(trimmed_chain_config());
    std::ostringstream out1, diag1;
    int rc = cmd_verify(cfg, out1, diag1);
    CHECK(rc == 0);
    CHECK(contains(out1.str(), "\"identity\":\"CHAIN_S\""));
    CHECK(contains(out1.str(), "\"passed\":true"));
    CHECK(contains(out1.str(), "\"global_seed\":"));
    CHECK_FALSE(contains(out1.str(), "wall_time")); // timings off by default

    std::ostringstream out2, diag2;
    CHECK(cmd_verify(cfg, out2, diag2) == 0);
    CHECK(out1.str() == out2.str()); // byte-identical reruns

    SuiteConfig timed = parse_suite_config("timings = true\n" + trimmed_chain_config());
    std::ostringstream out3, diag3;
    CHECK(cmd_verify(timed, out3, diag3) == 0);
    CHECK(contains(out3.str(), "\"wall_time\":"));

    SuiteConfig text_cfg = cfg;
    text_cfg.format = ReportFormat::TEXT;
    std::ostringstream out4, diag4;
    CHECK(cmd_verify(text_cfg, out4, diag4) == 0);
    CHECK(contains(out4.str(), "pass"));
    CHECK(contains(out4.str(), "#idx"));
}

TEST_CASE("verify flags constraint violations as configuration errors") {
    const std::string text =
        "case {\n"
        "  identity = STAR_TRIANGLE_S\n"
        "  alpha = 2:0.70:0, -2:0.62:0, 0:0.75:0\n" // exponent sum 2.07, not 2
        "}\n";
    SuiteConfig cfg = parse_suite_config(text);
    std::ostringstream out, diag;
    CHECK(cmd_verify(cfg, out, diag) == 2);
    CHECK(contains(diag.str(), "ConstraintError"));
    CHECK(contains(diag.str(), "STAR_TRIANGLE_S"));
}

TEST_CASE("sweep rejects malformed requests") {
    SuiteConfig cfg;
    std::ostringstream out, diag;
    CHECK(cmd_sweep("ZETA_POLE", "zeta", 1.5, 1.01, 0, cfg, out, diag) == 2);
    CHECK(cmd_sweep("CHAIN_S", "banana", 2.0, 3.0, 4, cfg, out, diag) == 2);
    CHECK(cmd_sweep("CHAIN_S", "zeta", 1.5, 1.01, 3, cfg, out, diag) == 2); // not a pole family
}

TEST_CASE("selftest battery is deterministic and catches a corrupted kernel") {
    NudgeGuard guard;
    std::ostringstream a, b;
    CHECK(cmd_selftest(a) == 0);
    CHECK(cmd_selftest(b) == 0);
    CHECK(a.str() == b.str());
    CHECK(contains(a.str(), "selftest: 10/10"));

    detail::log_gamma_nudge() = 1e-6;
    std::ostringstream c;
    CHECK(cmd_selftest(c) == 1);
    CHECK(contains(c.str(), "FAIL log_gamma_reflection"));
}

} // TEST_SUITE
