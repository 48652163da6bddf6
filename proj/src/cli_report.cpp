#include "gammabarnes/cli_report.hpp"
#include "gammabarnes/plane_integrals.hpp"
#include "gammabarnes/propagators.hpp"
#include "gammabarnes/gamma_core.hpp"
#include "gammabarnes/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gammabarnes {

namespace {

// ---------- formatting -----------------------------------------------------

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

const char* sector_label(LatticeSector s) {
    return s == LatticeSector::INTEGER ? "INTEGER" : "HALF_INTEGER";
}

const char* strategy_label(Strategy s) {
    switch (s) {
        case Strategy::QUADRATURE: return "QUADRATURE";
        case Strategy::DETERMINANT: return "DETERMINANT";
        default: return "BOTH";
    }
}

void append_columns(std::string& s, const char* key, const std::vector<Column>& cols) {
    s += ",\"";
    s += key;
    s += "\":[";
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) s += ',';
        s += "{\"tw\":" + fmt17(cols[i].tw);
        s += ",\"nu_re\":" + fmt17(cols[i].nu.real());
        s += ",\"nu_im\":" + fmt17(cols[i].nu.imag()) + "}";
    }
    s += ']';
}

void append_indices(std::string& s, const std::vector<Index>& idx) {
    s += ",\"alpha\":[";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ',';
        s += "{\"tw\":" + std::to_string(idx[i].twice_m);
        s += ",\"sigma_re\":" + fmt17(idx[i].sigma.real());
        s += ",\"sigma_im\":" + fmt17(idx[i].sigma.imag()) + "}";
    }
    s += ']';
}

void append_points(std::string& s, const std::vector<FieldPoint>& pts) {
    s += ",\"points\":[";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ',';
        s += "{\"tw\":" + std::to_string(pts[i].twice_n);
        s += ",\"nu_re\":" + fmt17(pts[i].nu.real());
        s += ",\"nu_im\":" + fmt17(pts[i].nu.imag()) + "}";
    }
    s += ']';
}

// ---------- config parsing --------------------------------------------------

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

[[noreturn]] void bad_key(const std::string& key, int line, const std::string& why) {
    throw ConfigError("key '" + key + "' (line " + std::to_string(line) + "): " + why);
}

long long to_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        long long r = std::stoll(v, &pos);
        if (pos != v.size()) bad_key(key, line, "trailing characters in integer '" + v + "'");
        return r;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_key(key, line, "expected integer, got '" + v + "'");
    }
}

double to_dbl(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) bad_key(key, line, "trailing characters in number '" + v + "'");
        return r;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        bad_key(key, line, "expected number, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    bad_key(key, line, "expected boolean, got '" + v + "'");
}

IdentityTag tag_from_name(const std::string& v, int line) {
    static constexpr IdentityTag all[] = {
        IdentityTag::GUSTAFSON_I,       IdentityTag::GUSTAFSON_II,
        IdentityTag::REDUCED_I,         IdentityTag::REDUCED_I_GAMMA,
        IdentityTag::REDUCED_II,        IdentityTag::REDUCED_II_GAMMA,
        IdentityTag::CHAIN_S,           IdentityTag::STAR_TRIANGLE_S,
        IdentityTag::CHAIN_D,           IdentityTag::STAR_TRIANGLE_D,
        IdentityTag::DUAL_QUANTIZED_I,  IdentityTag::DUAL_QUANTIZED_II,
        IdentityTag::ZETA_POLE,
    };
    for (IdentityTag t : all)
        if (v == tag_name(t)) return t;
    bad_key("identity", line, "unknown identity tag '" + v + "'");
}

LatticeSector sector_from_name(const std::string& v, int line) {
    if (v == "INTEGER") return LatticeSector::INTEGER;
    if (v == "HALF_INTEGER") return LatticeSector::HALF_INTEGER;
    bad_key("sector", line, "expected INTEGER or HALF_INTEGER, got '" + v + "'");
}

ParityVariant variant_from_name(const std::string& v, int line) {
    static constexpr ParityVariant all[] = {ParityVariant::NONE, ParityVariant::V1A, ParityVariant::V1B,
                                            ParityVariant::V2A, ParityVariant::V2B};
    for (ParityVariant p : all)
        if (v == variant_name(p)) return p;
    bad_key("variant", line, "unknown parity variant '" + v + "'");
}

Strategy strategy_from_name(const std::string& v, int line) {
    if (v == "QUADRATURE") return Strategy::QUADRATURE;
    if (v == "DETERMINANT") return Strategy::DETERMINANT;
    if (v == "BOTH") return Strategy::BOTH;
    bad_key("strategy", line, "expected QUADRATURE, DETERMINANT or BOTH, got '" + v + "'");
}

std::vector<Column> parse_columns(const std::string& v, const std::string& key, int line) {
    std::vector<Column> cols;
    for (const std::string& item : split(v, ',')) {
        auto f = split(trim(item), ':');
        if (f.size() != 3) bad_key(key, line, "expected tw:re:im triples, got '" + trim(item) + "'");
        cols.push_back({to_dbl(trim(f[0]), key, line),
                        cxd(to_dbl(trim(f[1]), key, line), to_dbl(trim(f[2]), key, line))});
    }
    return cols;
}

std::vector<Index> parse_indices(const std::string& v, const std::string& key, int line) {
    std::vector<Index> idx;
    for (const std::string& item : split(v, ',')) {
        auto f = split(trim(item), ':');
        if (f.size() != 3) bad_key(key, line, "expected twm:re:im triples, got '" + trim(item) + "'");
        idx.push_back({static_cast<int>(to_int(trim(f[0]), key, line)),
                       cxd(to_dbl(trim(f[1]), key, line), to_dbl(trim(f[2]), key, line))});
    }
    return idx;
}

std::vector<FieldPoint> parse_points(const std::string& v, const std::string& key, int line) {
    std::vector<FieldPoint> pts;
    for (const std::string& item : split(v, ',')) {
        auto f = split(trim(item), ':');
        if (f.size() != 3) bad_key(key, line, "expected tn:re:im triples, got '" + trim(item) + "'");
        pts.push_back({static_cast<int>(to_int(trim(f[0]), key, line)),
                       cxd(to_dbl(trim(f[1]), key, line), to_dbl(trim(f[2]), key, line))});
    }
    return pts;
}

struct CaseDraft {
    std::string identity;
    int line = 0;
    std::optional<int> n_fold;
    std::optional<LatticeSector> sector;
    std::optional<ParityVariant> variant;
    std::optional<unsigned> seed;
    std::optional<double> tolerance;
    std::optional<double> zeta;
    std::optional<Strategy> strategy;
    std::optional<int> n_max, panels, nodes_per_panel, fit_terms;
    std::optional<double> t_max, ladder_factor, ladder_top, fit_window;
    std::optional<std::vector<Column>> z, w;
    std::optional<std::vector<Index>> alpha;
    std::optional<std::vector<FieldPoint>> points;
};

IdentityCase finalize_case(const CaseDraft& d, unsigned global_seed, std::size_t index) {
    if (d.identity.empty())
        throw ConfigError("case " + std::to_string(index) + " (line " + std::to_string(d.line) +
                          "): missing required key 'identity'");
    IdentityKind kind;
    kind.tag = tag_from_name(d.identity, d.line);
    if (d.n_fold) kind.N = *d.n_fold;
    if (d.sector) kind.sector = *d.sector;
    if (d.variant) kind.parity_variant = *d.variant;
    unsigned seed = d.seed ? *d.seed : global_seed + static_cast<unsigned>(index);
    IdentityCase c;
    try {
        c = make_case(kind, seed);
    } catch (const Error& e) {
        throw ConfigError("case " + std::to_string(index) + " (" + d.identity + "): " + e.what());
    }
    if (d.tolerance) c.tolerance = *d.tolerance;
    if (d.strategy) c.strategy = *d.strategy;
    if (d.zeta) c.params.zeta = *d.zeta;
    if (d.n_max) c.spec.n_max = *d.n_max;
    if (d.t_max) c.spec.t_max = *d.t_max;
    if (d.panels) c.spec.panels = *d.panels;
    if (d.nodes_per_panel) c.spec.nodes_per_panel = *d.nodes_per_panel;
    if (d.ladder_factor) c.spec.ladder_factor = *d.ladder_factor;
    if (d.ladder_top) c.spec.ladder_top = *d.ladder_top;
    if (d.fit_terms) c.spec.fit_terms = *d.fit_terms;
    if (d.fit_window) c.spec.fit_window = *d.fit_window;
    if (d.z) c.params.z = *d.z;
    if (d.w) c.params.w = *d.w;
    if (d.alpha) c.params.alpha = *d.alpha;
    if (d.points) c.params.points = *d.points;
    return c;
}

}  // namespace

const char* library_version() { return "1.0.0"; }

SuiteConfig parse_suite_config(const std::string& text) {
    SuiteConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool in_case = false;
    CaseDraft draft;
    std::vector<CaseDraft> drafts;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
        s = trim(s);
        if (s.empty()) continue;

        if (!in_case && (s == "case {" || s == "case{")) {
            in_case = true;
            draft = CaseDraft{};
            draft.line = line;
            continue;
        }
        if (in_case && s == "}") {
            in_case = false;
            drafts.push_back(draft);
            continue;
        }

        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value', got '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(line) + ": empty key or value");

        if (!in_case) {
            if (key == "seed") {
                cfg.global_seed = static_cast<unsigned>(to_int(val, key, line));
            } else if (key == "workers") {
                long long w = to_int(val, key, line);
                if (w <= 0) bad_key(key, line, "worker count must be positive");
                cfg.worker_count = static_cast<int>(w);
            } else if (key == "out") {
                cfg.output_path = val;
            } else if (key == "format") {
                if (val == "jsonl") cfg.format = ReportFormat::JSONL;
                else if (val == "text") cfg.format = ReportFormat::TEXT;
                else bad_key(key, line, "expected jsonl or text, got '" + val + "'");
            } else if (key == "timings") {
                cfg.timings = to_bool(val, key, line);
            } else {
                bad_key(key, line, "unknown top-level key");
            }
        } else {
            if (key == "identity") draft.identity = val;
            else if (key == "N") draft.n_fold = static_cast<int>(to_int(val, key, line));
            else if (key == "sector") draft.sector = sector_from_name(val, line);
            else if (key == "variant") draft.variant = variant_from_name(val, line);
            else if (key == "seed") draft.seed = static_cast<unsigned>(to_int(val, key, line));
            else if (key == "tolerance") draft.tolerance = to_dbl(val, key, line);
            else if (key == "strategy") draft.strategy = strategy_from_name(val, line);
            else if (key == "zeta") draft.zeta = to_dbl(val, key, line);
            else if (key == "n_max") draft.n_max = static_cast<int>(to_int(val, key, line));
            else if (key == "t_max") draft.t_max = to_dbl(val, key, line);
            else if (key == "panels") draft.panels = static_cast<int>(to_int(val, key, line));
            else if (key == "nodes_per_panel") draft.nodes_per_panel = static_cast<int>(to_int(val, key, line));
            else if (key == "ladder_factor") draft.ladder_factor = to_dbl(val, key, line);
            else if (key == "ladder_top") draft.ladder_top = to_dbl(val, key, line);
            else if (key == "fit_terms") draft.fit_terms = static_cast<int>(to_int(val, key, line));
            else if (key == "fit_window") draft.fit_window = to_dbl(val, key, line);
            else if (key == "z") draft.z = parse_columns(val, key, line);
            else if (key == "w") draft.w = parse_columns(val, key, line);
            else if (key == "alpha") draft.alpha = parse_indices(val, key, line);
            else if (key == "points") draft.points = parse_points(val, key, line);
            else bad_key(key, line, "unknown case key");
        }
    }
    if (in_case)
        throw ConfigError("line " + std::to_string(draft.line) + ": unterminated case block");
    if (drafts.empty())
        throw ConfigError("cases list is empty: at least one case block is required");
    cfg.cases.reserve(drafts.size());
    for (std::size_t i = 0; i < drafts.size(); ++i)
        cfg.cases.push_back(finalize_case(drafts[i], cfg.global_seed, i));
    return cfg;
}

// ---------- record writers --------------------------------------------------

std::string report_record_jsonl(const IdentityCase& c, const VerificationReport& r, unsigned global_seed,
                                bool timings) {
    std::string s = "{\"identity\":\"";
    s += tag_name(c.kind.tag);
    s += "\",\"n_fold\":" + std::to_string(c.kind.N);
    s += ",\"sector\":\"";
    s += sector_label(c.kind.sector);
    s += "\",\"variant\":\"";
    s += variant_name(c.kind.parity_variant);
    s += "\",\"strategy\":\"";
    s += strategy_label(c.strategy);
    s += "\",\"case_seed\":" + std::to_string(c.seed);
    s += ",\"global_seed\":" + std::to_string(global_seed);
    s += ",\"tolerance\":" + fmt17(c.tolerance);
    s += ",\"zeta\":" + fmt17(c.params.zeta);
    append_columns(s, "z", c.params.z);
    append_columns(s, "w", c.params.w);
    append_indices(s, c.params.alpha);
    append_points(s, c.params.points);
    s += ",\"spec\":{\"sector\":\"";
    s += sector_label(c.spec.sector);
    s += "\",\"n_max\":" + std::to_string(c.spec.n_max);
    s += ",\"t_max\":" + fmt17(c.spec.t_max);
    s += ",\"panels\":" + std::to_string(c.spec.panels);
    s += ",\"nodes_per_panel\":" + std::to_string(c.spec.nodes_per_panel);
    s += ",\"ladder_factor\":" + fmt17(c.spec.ladder_factor);
    s += ",\"ladder_top\":" + fmt17(c.spec.ladder_top);
    s += ",\"fit_terms\":" + std::to_string(c.spec.fit_terms);
    s += ",\"fit_window\":" + fmt17(c.spec.fit_window) + "}";
    s += ",\"lhs_re\":" + fmt17(r.lhs.value.real());
    s += ",\"lhs_im\":" + fmt17(r.lhs.value.imag());
    s += ",\"lhs_tail\":" + fmt17(r.lhs.tail_bound);
    s += ",\"lhs_quad_err\":" + fmt17(r.lhs.quad_error);
    s += ",\"rhs_re\":" + fmt17(r.rhs.value.real());
    s += ",\"rhs_im\":" + fmt17(r.rhs.value.imag());
    s += ",\"rhs_tail\":" + fmt17(r.rhs.tail_bound);
    s += ",\"rhs_quad_err\":" + fmt17(r.rhs.quad_error);
    s += ",\"residual\":" + fmt17(r.residual);
    s += ",\"passed\":";
    s += r.passed ? "true" : "false";
    s += ",\"digest\":\"" + json_escape(r.case_digest) + "\"";
    if (timings) s += ",\"wall_time\":" + fmt17(r.wall_time);
    s += ",\"version\":\"";
    s += library_version();
    s += "\"}";
    return s;
}

std::string report_record_text(std::size_t index, const IdentityCase& c, const VerificationReport& r) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "%4zu  %-18s %-12s %-4s N=%d seed=%-10u res=%.3e  %s", index,
                  tag_name(c.kind.tag), sector_label(c.kind.sector), variant_name(c.kind.parity_variant),
                  c.kind.N, c.seed, r.residual, r.passed ? "pass" : "FAIL");
    return buf;
}

// ---------- verify ----------------------------------------------------------

int cmd_verify(const SuiteConfig& config, std::ostream& out, std::ostream& diag) {
    if (config.cases.empty()) {
        diag << "config error: cases list is empty\n";
        return 2;
    }
    struct Slot {
        std::string record;
        std::string error;
        bool passed = false;
    };
    std::vector<Slot> slots(config.cases.size());

    auto run_one = [&](std::size_t i) {
        const IdentityCase& c = config.cases[i];
        try {
            check_constraints(c);
            VerificationReport r = verify_case(c);
            slots[i].passed = r.passed;
            slots[i].record = config.format == ReportFormat::JSONL
                                  ? report_record_jsonl(c, r, config.global_seed, config.timings)
                                  : report_record_text(i, c, r);
        } catch (const ConstraintError& e) {
            slots[i].error = std::string("ConstraintError: ") + e.what();
        } catch (const PoleError& e) {
            slots[i].error = std::string("PoleError: ") + e.what();
        } catch (const FitError& e) {
            slots[i].error = std::string("FitError: ") + e.what();
        } catch (const Error& e) {
            slots[i].error = e.what();
        }
    };

    int workers = config.worker_count > 0 ? config.worker_count
                                          : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(config.cases.size()));

    if (workers == 1) {
        for (std::size_t i = 0; i < config.cases.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < config.cases.size(); i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& th : pool) th.join();
    }

    if (config.format == ReportFormat::TEXT)
        out << "#idx  identity           sector       var  details\n";
    bool any_error = false, any_fail = false;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].error.empty()) {
            any_error = true;
            diag << "case " << i << " (" << tag_name(config.cases[i].kind.tag)
                 << ") error: " << slots[i].error << "\n";
            continue;
        }
        out << slots[i].record << "\n";
        if (!slots[i].passed) any_fail = true;
    }
    if (any_error) return 2;
    return any_fail ? 1 : 0;
}

// ---------- sweep -----------------------------------------------------------

int cmd_sweep(const std::string& identity, const std::string& param, double from, double to, int steps,
              const SuiteConfig& config, std::ostream& out, std::ostream& diag) {
    if (steps <= 0) {
        diag << "sweep error: steps must be positive\n";
        return 2;
    }
    const bool jsonl = config.format == ReportFormat::JSONL;

    if (param == "zeta") {
        if (identity != "GUSTAFSON_I" && identity != "ZETA_POLE") {
            diag << "sweep error: parameter 'zeta' is not sweepable for identity '" << identity << "'\n";
            return 2;
        }
        if (from <= 1.0 || to <= 1.0) {
            diag << "sweep error: zeta must stay above the pole at 1\n";
            return 2;
        }
        IdentityKind kind{IdentityTag::ZETA_POLE, 1, LatticeSector::INTEGER, ParityVariant::NONE};
        IdentityCase c;
        try {
            c = make_case(kind, config.global_seed);
        } catch (const Error& e) {
            diag << "sweep error: " << e.what() << "\n";
            return 2;
        }
        cxd lg{0.0, 0.0};
        for (const Column& zc : c.params.z)
            for (const Column& wc : c.params.w) lg += log_bgamma(zc + wc);
        const cxd target = std::exp(lg);

        const double ratio = steps > 1 ? std::pow((to - 1.0) / (from - 1.0), 1.0 / (steps - 1)) : 1.0;
        if (!jsonl) out << "# step        zeta      residual\n";
        for (int k = 0; k < steps; ++k) {
            const double zeta = 1.0 + (from - 1.0) * std::pow(ratio, k);
            IdentityParams q = c.params;
            q.w.back().nu += (zeta - 1.0);
            LatticeIntegrand f{q.z, q.w, 0, 0, 0, 0, {1.0, 0.0}};
            cxd scaled;
            try {
                scaled = (1.0 - zeta) * integrate_lattice(f, c.spec).value;
            } catch (const Error& e) {
                diag << "sweep error at step " << k << ": " << e.what() << "\n";
                return 2;
            }
            const double residual = std::abs(scaled - target) / std::abs(target);
            if (jsonl) {
                out << "{\"sweep\":\"zeta\",\"identity\":\"" << identity << "\",\"step\":" << k
                    << ",\"zeta\":" << fmt17(zeta) << ",\"scaled_re\":" << fmt17(scaled.real())
                    << ",\"scaled_im\":" << fmt17(scaled.imag()) << ",\"target_re\":" << fmt17(target.real())
                    << ",\"target_im\":" << fmt17(target.imag()) << ",\"residual\":" << fmt17(residual)
                    << ",\"seed\":" << config.global_seed << ",\"version\":\"" << library_version()
                    << "\"}\n";
            } else {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%6d  %10.6f  %.6e\n", k, zeta, residual);
                out << buf;
            }
        }
        return 0;
    }

    if (param == "L") {
        PlaneKind pk;
        if (identity == "CHAIN_S" || identity == "CHAIN_C") pk = PlaneKind::CHAIN_C;
        else if (identity == "STAR_TRIANGLE_S" || identity == "STAR_TRIANGLE_C")
            pk = PlaneKind::STAR_TRIANGLE_C;
        else {
            diag << "sweep error: parameter 'L' is not sweepable for identity '" << identity << "'\n";
            return 2;
        }
        if (from < 2.0 || to < 2.0) {
            diag << "sweep error: scale L must be at least 2\n";
            return 2;
        }
        const double ratio = steps > 1 ? std::pow(to / from, 1.0 / (steps - 1)) : 1.0;
        std::vector<double> scales;
        for (int k = 0; k < steps; ++k) {
            long long L = std::llround(from * std::pow(ratio, k));
            if (L % 2 != 0) ++L;
            if (L < 2) L = 2;
            if (scales.empty() || scales.back() != static_cast<double>(L))
                scales.push_back(static_cast<double>(L));
        }
        if (scales.size() < 2) {
            diag << "sweep error: scale range produces fewer than two distinct even L values\n";
            return 2;
        }
        QuasiclassicalReport rep;
        try {
            rep = quasiclassical_check(pk, scales);
        } catch (const Error& e) {
            diag << "sweep error: " << e.what() << "\n";
            return 2;
        }
        if (!jsonl) out << "# step       L     deviation   (fitted exponent " << fmt17(rep.fitted_exponent) << ")\n";
        for (std::size_t k = 0; k < rep.L.size(); ++k) {
            if (jsonl) {
                out << "{\"sweep\":\"L\",\"identity\":\"" << plane_kind_name(pk) << "\",\"step\":" << k
                    << ",\"L\":" << fmt17(rep.L[k]) << ",\"deviation\":" << fmt17(rep.deviation[k])
                    << ",\"fitted_exponent\":" << fmt17(rep.fitted_exponent)
                    << ",\"monotone\":" << (rep.monotone ? "true" : "false")
                    << ",\"seed\":" << config.global_seed << ",\"version\":\"" << library_version()
                    << "\"}\n";
            } else {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%6zu  %6.0f  %.6e\n", k, rep.L[k], rep.deviation[k]);
                out << buf;
            }
        }
        return 0;
    }

    diag << "sweep error: unknown sweep parameter '" << param << "'\n";
    return 2;
}

// ---------- selftest --------------------------------------------------------

namespace {

struct SelfRng {
    std::mt19937_64 g;
    explicit SelfRng(std::uint64_t s) : g(s) {}
    double uni(double a, double b) { return a + (b - a) * ((g() >> 11) * 0x1.0p-53); }
    long long iuni(long long lo, long long hi) {
        return lo + static_cast<long long>(g() % static_cast<unsigned long long>(hi - lo + 1));
    }
};

std::string describe(cxd z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", z.real(), z.imag());
    return buf;
}

std::string check_log_gamma_reflection() {
    SelfRng rng(11);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < 200; ++i) {
        double sgn = rng.iuni(0, 1) ? 1.0 : -1.0;
        cxd z(rng.uni(-2.5, 3.0), sgn * rng.uni(0.25, 2.0));
        cxd val = std::exp(log_gamma(z) + log_gamma(cxd(1.0, 0.0) - z)) * std::sin(pi * z) / pi;
        if (std::abs(val - 1.0) > 1e-10)
            return "Gamma(z)Gamma(1-z)sin(pi z)/pi deviates by " + fmt17(std::abs(val - 1.0)) +
                   " at z=" + describe(z);
    }
    return {};
}

std::string check_log_gamma_duplication() {
    SelfRng rng(12);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < 200; ++i) {
        double sgn = rng.iuni(0, 1) ? 1.0 : -1.0;
        cxd z(rng.uni(-2.0, 2.5), sgn * rng.uni(0.25, 1.5));
        cxd lhs = log_gamma(2.0 * z);
        cxd rhs = (2.0 * z - 1.0) * std::log(2.0) - 0.5 * std::log(pi) + log_gamma(z) +
                  log_gamma(z + 0.5);
        cxd val = std::exp(lhs - rhs);
        if (std::abs(val - 1.0) > 1e-10)
            return "duplication ratio deviates by " + fmt17(std::abs(val - 1.0)) + " at z=" + describe(z);
    }
    return {};
}

std::string check_bgamma_shift() {
    SelfRng rng(13);
    for (int i = 0; i < 200; ++i) {
        int tn = static_cast<int>(rng.iuni(-4, 4));
        double sgn = rng.iuni(0, 1) ? 1.0 : -1.0;
        FieldPoint u{tn, cxd(rng.uni(-0.4, 0.4), sgn * rng.uni(0.25, 1.2))};
        GammaValue g0 = bgamma(u);
        GammaValue g1 = bgamma({tn, u.nu + 1.0});
        if (!g0.finite() || !g1.finite()) return "unexpected pole/zero classification in shift sample";
        cxd want = -(u.hol() * u.anti()) * g0.value;
        if (std::abs(g1.value - want) > 1e-11 * std::abs(g1.value))
            return "shift relation deviates at twice_n=" + std::to_string(tn) + " nu=" + describe(u.nu);
    }
    return {};
}

std::string check_bgamma_reflection() {
    SelfRng rng(14);
    for (int i = 0; i < 200; ++i) {
        int tn = static_cast<int>(2 * rng.iuni(-2, 2));
        double sgn = rng.iuni(0, 1) ? 1.0 : -1.0;
        FieldPoint x{tn, cxd(rng.uni(-0.4, 0.4), sgn * rng.uni(0.25, 1.2))};
        FieldPoint ox{-tn, cxd(1.0, 0.0) - x.nu};
        GammaValue a = bgamma(x), b = bgamma(ox);
        if (!a.finite() || !b.finite()) return "unexpected pole/zero classification in reflection sample";
        cxd prod = a.value * b.value;
        double want = parity_sign(tn / 2);
        if (std::abs(prod - want) > 1e-11)
            return "reflection product deviates at twice_n=" + std::to_string(tn) + " nu=" + describe(x.nu);
    }
    return {};
}

std::string check_bgamma_negation() {
    SelfRng rng(15);
    for (int i = 0; i < 200; ++i) {
        int tn = static_cast<int>(rng.iuni(-4, 4));
        double sgn = rng.iuni(0, 1) ? 1.0 : -1.0;
        FieldPoint x{tn, cxd(rng.uni(-0.4, 0.4), sgn * rng.uni(0.25, 1.2))};
        GammaValue a = bgamma({-tn, cxd(1.0, 0.0) - x.nu});
        GammaValue b = bgamma({-tn, -x.nu});
        if (!a.finite() || !b.finite()) return "unexpected pole/zero classification in negation sample";
        cxd want = norm_sq(x) * b.value;
        if (std::abs(a.value - want) > 1e-11 * std::abs(a.value))
            return "negation relation deviates at twice_n=" + std::to_string(tn) + " nu=" + describe(x.nu);
    }
    return {};
}

std::string check_s_prop_inverse() {
    SelfRng rng(16);
    for (int i = 0; i < 200; ++i) {
        Index a{static_cast<int>(2 * rng.iuni(-3, 3)), cxd(rng.uni(-1.0, 1.0), rng.uni(-1.0, 1.0))};
        cxd zv(rng.uni(-2.0, 2.0), rng.uni(-2.0, 2.0));
        if (std::abs(zv) < 0.1) continue;
        PlanePoint p{zv};
        cxd prod = s_prop(p, a) * s_prop(p, Index{-a.twice_m, -a.sigma});
        if (std::abs(prod - 1.0) > 1e-12)
            return "s_alpha(z) s_{-alpha}(z) deviates from 1 at z=" + describe(zv);
    }
    return {};
}

std::string check_S_prop_parity() {
    SelfRng rng(17);
    for (int i = 0; i < 200; ++i) {
        int tn = static_cast<int>(rng.iuni(-3, 3));
        int twm = static_cast<int>(-2 * tn + 4 * rng.iuni(-1, 1));
        Index a{twm, cxd(rng.uni(0.2, 0.8), rng.uni(-0.5, 0.5))};
        double sgn = rng.iuni(0, 1) ? 1.0 : -1.0;
        FieldPoint u{tn, cxd(rng.uni(-0.3, 0.3), sgn * rng.uni(0.3, 1.0))};
        GammaValue sp = S_prop(u, a);
        GammaValue sm = S_prop(FieldPoint{-tn, -u.nu}, a);
        if (!sp.finite() || !sm.finite()) continue;
        cxd want = parity_sign(tn) * sp.value;
        if (std::abs(sm.value - want) > 1e-11 * std::abs(sp.value))
            return "S_alpha(-u) parity flip deviates at twice_n=" + std::to_string(tn);
    }
    return {};
}

std::string check_D_prop_exchange() {
    SelfRng rng(18);
    for (int i = 0; i < 200; ++i) {
        int tn1 = static_cast<int>(rng.iuni(-2, 2)), tn2 = static_cast<int>(rng.iuni(-2, 2));
        int twm = static_cast<int>(-2 * (tn1 + tn2) + 4 * rng.iuni(-1, 1));
        Index a{twm, cxd(rng.uni(0.2, 0.8), rng.uni(-0.4, 0.4))};
        FieldPoint z1{tn1, cxd(rng.uni(-0.3, 0.3), rng.uni(0.3, 0.9))};
        FieldPoint z2{tn2, cxd(rng.uni(-0.3, 0.3), -rng.uni(0.3, 0.9))};
        GammaValue d12 = D_prop(z1, z2, a);
        GammaValue d21 = D_prop(z2, z1, a);
        if (!d12.finite() || !d21.finite()) continue;
        if (std::abs(d12.value - d21.value) > 1e-12 * std::abs(d12.value))
            return "D(z1,z2) != D(z2,z1) at twice_n=(" + std::to_string(tn1) + "," + std::to_string(tn2) + ")";
    }
    return {};
}

std::string check_milne_partial_fraction() {
    SelfRng rng(19);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 1 + rep % 5;
        std::vector<Rational> t, b;
        while (static_cast<int>(t.size()) < n) {
            long long num = rng.iuni(-9, 9);
            if (num == 0) continue;
            Rational cand(num, rng.iuni(1, 4));
            if (std::find(t.begin(), t.end(), cand) == t.end()) t.push_back(cand);
        }
        for (int i = 0; i < n; ++i) b.emplace_back(rng.iuni(-9, 9), rng.iuni(1, 4));
        auto [lhs, rhs] = milne_partial_fraction_check(t, b);
        if (lhs != rhs) return "partial-fraction identity broken at rational nodes (rep " + std::to_string(rep) + ")";
    }
    return {};
}

std::string check_moment_system_roots() {
    SelfRng rng(20);
    for (int rep = 0; rep < 20; ++rep) {
        int m = rep % 3;
        int total = m + 1 + static_cast<int>(rng.iuni(0, 3));
        if (total > 6) total = 6;
        std::vector<Rational> t, u;
        while (static_cast<int>(t.size()) < total) {
            long long num = rng.iuni(-9, 9);
            if (num == 0) continue;
            Rational cand(num, rng.iuni(1, 4));
            if (std::find(t.begin(), t.end(), cand) == t.end()) t.push_back(cand);
        }
        for (int i = 0; i < m; ++i) u.emplace_back(rng.iuni(-9, 9), rng.iuni(1, 4));
        Rational worst = df_linear_system_check(t, u);
        if (worst != 0) return "moment system has nonzero rational residual (rep " + std::to_string(rep) + ")";
    }
    return {};
}

}  // namespace

int cmd_selftest(std::ostream& out) {
    struct Check {
        const char* name;
        std::string (*run)();
    };
    // log_gamma_reflection must come first: it is the only invariant here that is
    // sensitive to a uniform additive perturbation of every log_gamma value.
    static constexpr Check checks[] = {
        {"log_gamma_reflection", &check_log_gamma_reflection},
        {"log_gamma_duplication", &check_log_gamma_duplication},
        {"bgamma_shift", &check_bgamma_shift},
        {"bgamma_reflection", &check_bgamma_reflection},
        {"bgamma_negation", &check_bgamma_negation},
        {"s_prop_inverse", &check_s_prop_inverse},
        {"S_prop_parity", &check_S_prop_parity},
        {"D_prop_exchange", &check_D_prop_exchange},
        {"milne_partial_fraction", &check_milne_partial_fraction},
        {"moment_system_roots", &check_moment_system_roots},
    };
    int total = 0;
    for (const Check& c : checks) {
        std::string fail = c.run();
        if (!fail.empty()) {
            out << "FAIL " << c.name << ": " << fail << "\n";
            return 1;
        }
        out << "ok " << c.name << "\n";
        ++total;
    }
    out << "selftest: " << total << "/" << total << " invariants hold\n";
    return 0;
}

}  // namespace gammabarnes
