#pragma once
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "gammabarnes/identity_suite.hpp"

namespace gammabarnes {

enum class ReportFormat { JSONL, TEXT };

// Batch driver configuration, parsed from the key-value text format with
// nested case blocks (grammar in the README).
struct SuiteConfig {
    std::vector<IdentityCase> cases;
    unsigned global_seed = 1;
    int worker_count = 0;    // 0: use available parallelism
    std::string output_path; // empty: driver writes to stdout
    ReportFormat format = ReportFormat::JSONL;
    bool timings = false;    // wall_time is emitted only on request, so that
                             // identical configs give identical output bytes
};

// Throws ConfigError naming the offending key/line.
SuiteConfig parse_suite_config(const std::string& text);

const char* library_version();

// One machine-readable record: fixed key order, continuous values at 17
// significant digits, byte-deterministic for a fixed config.
std::string report_record_jsonl(const IdentityCase& c, const VerificationReport& r,
                                unsigned global_seed, bool timings);
std::string report_record_text(std::size_t index, const IdentityCase& c,
                               const VerificationReport& r);

// Runs every configured case (worker_count threads, output merged in case
// order). Returns 0 when all cases pass, 1 when any case misses its
// tolerance, 2 on configuration or constraint errors (named on diag).
int cmd_verify(const SuiteConfig& config, std::ostream& out, std::ostream& diag);

// Residual-vs-parameter table. param "zeta" approaches the pole with
// geometrically shrinking zeta - 1 (pole-residue study); param "L" scales the
// quasiclassical lattice geometrically. steps = 0 is a configuration error.
int cmd_sweep(const std::string& identity, const std::string& param, double from, double to,
              int steps, const SuiteConfig& config, std::ostream& out, std::ostream& diag);

// Fast deterministic invariant battery (well under 10 s): scalar log-Gamma
// kernel identities first (reflection, duplication), then field-Gamma
// relations, propagator symmetries, and the exact rational partial-fraction
// checks. Returns 1 naming the first failing invariant.
int cmd_selftest(std::ostream& out);

} // namespace gammabarnes
