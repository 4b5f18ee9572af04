// Copyright 2026 The mzi-herald Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MZI_TOOLS_MZI_CLI_HPP
#define MZI_TOOLS_MZI_CLI_HPP

// Command-line front end. Every command prints one JSON document (or CSV for
// `scan`), numbers at 17 significant digits. Exit status: 0 success,
// 2 invalid arguments, 3 computation failure; failures print
// {"error": code, "message": text}.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mzi/mzi.hpp"

namespace mzi::cli {

using Json = nlohmann::ordered_json;

enum class Command { matrix, herald, state, moments, quadratures, scan, optimize, verify, dist };
enum class Format { json, csv };

inline constexpr std::string_view kCutoffEnv = "MZI_DEFAULT_CUTOFF";

/// Flag values; unset ones fall back to the config file, then to defaults.
struct Params {
    std::optional<int> n2, n3, m2, m3;
    std::optional<double> alpha, phi, theta;
    std::optional<int> cutoff;
    std::optional<std::string> family;
    std::optional<std::string> method;
    std::optional<int> k, l;
    std::optional<std::string> quantity;
    std::optional<double> alpha_min, alpha_max, phi_min, phi_max;
    std::optional<int> res;
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> herald_max;
};

struct RunConfig {
    Command command = Command::matrix;
    Params params;
    std::optional<std::string> output_path;
    Format format = Format::json;
};

struct RunResult {
    int exit_code = 0;
    std::string output;
    std::optional<std::string> output_path = std::nullopt;
};

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

namespace detail {

inline void write_json(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::null: out += "null"; break;
        case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
        case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
        case Json::value_t::number_float: {
            const double x = j.get<double>();
            out += std::isfinite(x) ? format_number(x) : "null";
            break;
        }
        case Json::value_t::string: out += j.dump(); break;
        case Json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += ',';
                first = false;
                write_json(e, out);
            }
            out += ']';
            break;
        }
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += Json(key).dump();
                out += ':';
                write_json(value, out);
            }
            out += '}';
            break;
        }
        default: out += "null"; break;
    }
}

inline Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json error_json(std::string_view code, const std::string& message) {
    Json j;
    j["error"] = std::string(code);
    j["message"] = message;
    return j;
}

inline Error invalid(const std::string& message) { return Error(ErrorCode::InvalidArgument, message); }

}  // namespace detail

/// Compact JSON with every floating-point value at 17 significant digits.
inline std::string to_json_text(const Json& j) {
    std::string out;
    detail::write_json(j, out);
    return out;
}

inline std::string_view command_name(Command c) {
    switch (c) {
        case Command::matrix: return "matrix";
        case Command::herald: return "herald";
        case Command::state: return "state";
        case Command::moments: return "moments";
        case Command::quadratures: return "quadratures";
        case Command::scan: return "scan";
        case Command::optimize: return "optimize";
        case Command::verify: return "verify";
        case Command::dist: return "dist";
    }
    return "?";
}

/// Fills unset parameters from a JSON object; keys may use '-' or '_'.
inline void merge_config(Params& p, const Json& config) {
    if (!config.is_object()) throw detail::invalid("config file must hold a JSON object");
    for (const auto& [raw_key, value] : config.items()) {
        std::string key = raw_key;
        for (char& ch : key)
            if (ch == '-') ch = '_';
        try {
            auto set = [&](auto& field) {
                using T = typename std::remove_reference_t<decltype(field)>::value_type;
                if (!field) field = value.get<T>();
            };
            if (key == "n2") set(p.n2);
            else if (key == "n3") set(p.n3);
            else if (key == "m2") set(p.m2);
            else if (key == "m3") set(p.m3);
            else if (key == "alpha") set(p.alpha);
            else if (key == "phi") set(p.phi);
            else if (key == "theta") set(p.theta);
            else if (key == "cutoff") set(p.cutoff);
            else if (key == "family") set(p.family);
            else if (key == "method") set(p.method);
            else if (key == "k") set(p.k);
            else if (key == "l") set(p.l);
            else if (key == "quantity") set(p.quantity);
            else if (key == "alpha_min") set(p.alpha_min);
            else if (key == "alpha_max") set(p.alpha_max);
            else if (key == "phi_min") set(p.phi_min);
            else if (key == "phi_max") set(p.phi_max);
            else if (key == "res") set(p.res);
            else if (key == "samples") set(p.samples);
            else if (key == "seed") set(p.seed);
            else if (key == "herald_max") set(p.herald_max);
            else throw detail::invalid("unknown config key '" + raw_key + "'");
        } catch (const nlohmann::json::exception&) {
            throw detail::invalid("config key '" + raw_key + "' has the wrong type");
        }
    }
}

namespace detail {

inline int resolve_cutoff(const Params& p) {
    if (p.cutoff) {
        if (*p.cutoff < 0) throw invalid("cutoff must be >= 0 (0 selects the automatic cutoff)");
        return *p.cutoff;
    }
    if (const char* env = std::getenv(kCutoffEnv.data())) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 0 || v > 100000)
            throw invalid(std::string(kCutoffEnv) + " must be a non-negative integer");
        return static_cast<int>(v);
    }
    return 0;
}

inline double finite(std::optional<double> v, double fallback, const char* name) {
    const double x = v.value_or(fallback);
    if (!std::isfinite(x)) throw invalid(std::string(name) + " must be finite");
    return x;
}

inline HeraldSpec resolve_spec(const Params& p) {
    HeraldSpec s;
    s.alpha_mag = finite(p.alpha, 0.0, "alpha");
    s.phi = finite(p.phi, 0.0, "phi");
    s.theta = finite(p.theta, 0.0, "theta");
    if (s.alpha_mag < 0.0) throw invalid("alpha must be >= 0");
    s.n2 = p.n2.value_or(0);
    s.n3 = p.n3.value_or(0);
    s.m2 = p.m2.value_or(0);
    s.m3 = p.m3.value_or(0);
    if (s.n2 < 0 || s.n3 < 0 || s.m2 < 0 || s.m3 < 0) throw invalid("photon numbers must be >= 0");
    if (p.family) {
        const HeraldPattern pat = family_pattern(parse_family(*p.family));
        const bool tuple_given = p.n2 || p.n3 || p.m2 || p.m3;
        if (tuple_given && !(pat == HeraldPattern{s.n2, s.n3, s.m2, s.m3}))
            throw invalid("--family disagrees with the herald tuple");
        s.n2 = pat.n2;
        s.n3 = pat.n3;
        s.m2 = pat.m2;
        s.m3 = pat.m3;
    }
    return s;
}

inline int resolve_family(const Params& p) {
    if (p.family) return parse_family(*p.family);
    if (p.n2 || p.n3 || p.m2 || p.m3)
        return family_of(HeraldPattern{p.n2.value_or(0), p.n3.value_or(0), p.m2.value_or(0), p.m3.value_or(0)});
    throw invalid("a family is required (--family psiN or the herald tuple)");
}

inline bool in_table(const HeraldSpec& s) {
    return s.n2 <= 1 && s.n3 <= 1 && s.m2 <= 1 && s.m3 <= 1;
}

inline std::string pattern_label(const HeraldSpec& s) { return in_table(s) ? family_label(family_of(s)) : "general"; }

inline Json matrix_json(const TransferMatrix& m) {
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 3; ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

inline Json amplitudes_json(const FockVector& v) {
    Json a = Json::array();
    for (const cplx& z : v.amplitudes()) a.push_back(complex_json(z));
    return a;
}

inline Json quadrature_json(const QuadratureReport& q) {
    Json j;
    j["var_x"] = q.var_x;
    j["var_p"] = q.var_p;
    j["squeeze_db_x"] = q.squeeze_db_x;
    return j;
}

inline MomentMatrix way2_moments(const HeraldSpec& s, int order) {
    if (in_table(s)) return moment_table(closed_form_state(s), order);
    const GeneralState g = general_heralded(s);
    return polynomial_state_moments(g.coefficients, g.seed, g.norm, order);
}

inline std::string run_matrix(const Params& p) {
    const double phi = finite(p.phi, 0.0, "phi");
    Json j;
    j["phi"] = phi;
    j["matrix"] = matrix_json(compose(phi));
    return to_json_text(j);
}

inline std::string run_herald(const Params& p) {
    const HeraldSpec s = resolve_spec(p);
    const int cutoff = resolve_cutoff(p);
    const HeraldResult r = herald_state(s, cutoff);
    Json j;
    j["amplitudes"] = amplitudes_json(r.state);
    j["probability"] = r.probability;
    j["cutoff_used"] = r.cutoff_used;
    return to_json_text(j);
}

inline std::string run_state(const Params& p) {
    const HeraldSpec s = resolve_spec(p);
    const std::string method = p.method.value_or("closed");
    Json j;
    j["method"] = method;
    if (method == "closed") {
        if (!in_table(s)) throw Error(ErrorCode::OutOfTableRange, "closed form covers photon numbers 0 and 1 only");
        const ClosedFormState c = closed_form_state(s);
        j["label"] = c.label;
        j["c0"] = complex_json(c.c0);
        j["c1"] = complex_json(c.c1);
        j["c2"] = complex_json(c.c2);
        j["seed"] = complex_json(c.seed);
        j["norm"] = c.norm;
        j["probability"] = c.probability;
    } else if (method == "general") {
        const GeneralState g = general_heralded(s);
        j["label"] = pattern_label(s);
        for (int h = 0; h < 3; ++h) {
            const cplx c = h < static_cast<int>(g.coefficients.size()) ? g.coefficients[static_cast<std::size_t>(h)] : cplx{};
            j["c" + std::to_string(h)] = complex_json(c);
        }
        Json coeffs = Json::array();
        for (const cplx& c : g.coefficients) coeffs.push_back(complex_json(c));
        j["coefficients"] = coeffs;
        j["seed"] = complex_json(g.seed);
        j["norm"] = g.norm;
        j["probability"] = g.probability;
        j["probability_generating"] = g.probability_generating;
    } else if (method == "oracle") {
        const HeraldResult r = herald_state(s, resolve_cutoff(p));
        j["label"] = pattern_label(s);
        j["c0"] = nullptr;
        j["c1"] = nullptr;
        j["c2"] = nullptr;
        j["seed"] = complex_json(compose(s.phi)(0, 0) * s.alpha());
        j["norm"] = nullptr;
        j["probability"] = r.probability;
        j["amplitudes"] = amplitudes_json(r.state);
        j["cutoff_used"] = r.cutoff_used;
    } else {
        throw invalid("--method must be closed, general or oracle");
    }
    return to_json_text(j);
}

inline std::string run_moments(const Params& p) {
    const HeraldSpec s = resolve_spec(p);
    const MomentQuery q{p.k.value_or(1), p.l.value_or(1)};
    q.validate();
    const std::string method = p.method.value_or("way2");
    cplx value;
    if (method == "way2") value = way2_moments(s, std::max(q.k, q.l))(q.k, q.l);
    else if (method == "way1") value = moment_way1(s, q);
    else if (method == "oracle") value = expectation(herald_state(s, resolve_cutoff(p)).state, q.k, q.l);
    else throw invalid("--method must be way2, way1 or oracle");
    Json j;
    j["k"] = q.k;
    j["l"] = q.l;
    j["method"] = method;
    j["value"] = complex_json(value);
    return to_json_text(j);
}

inline std::string run_quadratures(const Params& p) {
    const HeraldSpec s = resolve_spec(p);
    if (in_table(s)) return to_json_text(quadrature_json(quadratures(closed_form_state(s))));
    const GeneralState g = general_heralded(s);
    return to_json_text(quadrature_json(polynomial_state_quadratures(g.coefficients, g.seed)));
}

inline std::string run_scan(const Params& p, Format format) {
    const int family = resolve_family(p);
    const Quantity quantity = parse_quantity(p.quantity.value_or("prob"));
    const Range alpha{finite(p.alpha_min, kAlphaBox.min, "alpha-min"), finite(p.alpha_max, kAlphaBox.max, "alpha-max")};
    const Range phi{finite(p.phi_min, kPhiBox.min, "phi-min"), finite(p.phi_max, kPhiBox.max, "phi-max")};
    if (alpha.min < 0.0) throw invalid("alpha-min must be >= 0");
    const int res = p.res.value_or(200);
    if (res < 2) throw invalid("res must be >= 2");
    const ScanGrid g = scan(family, quantity, alpha, phi, res);
    if (format == Format::csv) {
        std::string out = "alpha,phi,value\n";
        for (std::size_t i = 0; i < g.alpha_axis.size(); ++i)
            for (std::size_t k = 0; k < g.phi_axis.size(); ++k) {
                const double v = g.at(i, k);
                out += format_number(g.alpha_axis[i]) + ',' + format_number(g.phi_axis[k]) + ',' +
                       (std::isnan(v) ? std::string("nan") : format_number(v)) + '\n';
            }
        out.pop_back();
        return out;
    }
    Json j;
    j["family"] = family_label(family);
    j["quantity"] = std::string(to_string(quantity));
    j["alpha_axis"] = g.alpha_axis;
    j["phi_axis"] = g.phi_axis;
    Json values = Json::array();
    for (std::size_t i = 0; i < g.alpha_axis.size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < g.phi_axis.size(); ++k) row.push_back(g.at(i, k));
        values.push_back(row);
    }
    j["values"] = values;
    return to_json_text(j);
}

inline std::string run_optimize(const Params& p) {
    const int family = resolve_family(p);
    OptOptions opt;
    if (p.res) {
        if (*p.res < 2) throw invalid("res must be >= 2");
        opt.coarse_resolution = *p.res;
    }
    const OptResult r = minimize_variance(family, opt);
    Json j;
    j["family"] = family_label(family);
    j["alpha_opt"] = r.alpha_opt;
    j["phi_opt"] = r.phi_opt;
    j["var_min"] = r.var_min;
    j["squeeze_db"] = r.squeeze_db;
    j["probability_at_opt"] = r.probability_at_opt;
    j["evaluations"] = r.evaluations;
    return to_json_text(j);
}

inline Json report_json(const VerifyReport& r) {
    Json j;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["passed"] = r.passed();
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        Json e;
        e["name"] = c.name;
        e["max_deviation"] = c.max_deviation;
        e["tolerance"] = c.tolerance;
        e["passed"] = c.passed;
        checks.push_back(e);
    }
    j["checks"] = checks;
    return j;
}

inline RunResult run_verify(const Params& p, double tolerance_scale) {
    VerifyOptions opt;
    opt.samples = p.samples.value_or(10);
    if (opt.samples < 1) throw invalid("samples must be >= 1");
    opt.seed = p.seed.value_or(0);
    opt.tolerance_scale = tolerance_scale;
    const VerifyReport r = run_checks(opt);
    if (r.passed()) return {0, to_json_text(report_json(r))};
    Json j = error_json(to_string(ErrorCode::VerificationFailed), "failed checks: " + r.failed_names());
    j["report"] = report_json(r);
    return {3, to_json_text(j)};
}

inline std::string run_dist(const Params& p) {
    const HeraldSpec s = resolve_spec(p);
    const int herald_max = p.herald_max.value_or(20);
    if (herald_max < 0) throw invalid("herald-max must be >= 0");
    const HeraldDistribution d = herald_distribution(s.n2, s.n3, s.alpha_mag, s.phi, herald_max, resolve_cutoff(p), s.theta);
    Json j;
    j["n2"] = s.n2;
    j["n3"] = s.n3;
    j["alpha"] = s.alpha_mag;
    j["phi"] = s.phi;
    Json outcomes = Json::array();
    for (const auto& [key, prob] : d) {
        Json e;
        e["m2"] = key.first;
        e["m3"] = key.second;
        e["probability"] = prob;
        outcomes.push_back(e);
    }
    j["outcomes"] = outcomes;
    j["total"] = total_probability(d);
    return to_json_text(j);
}

}  // namespace detail

/// Dispatches one command. `tolerance_scale` scales the verify thresholds
/// and exists for tests.
inline RunResult run(const RunConfig& config, double tolerance_scale = 1.0) {
    try {
        if (config.format == Format::csv && config.command != Command::scan)
            throw detail::invalid("csv output is only available for scan");
        const Params& p = config.params;
        switch (config.command) {
            case Command::matrix: return {0, detail::run_matrix(p)};
            case Command::herald: return {0, detail::run_herald(p)};
            case Command::state: return {0, detail::run_state(p)};
            case Command::moments: return {0, detail::run_moments(p)};
            case Command::quadratures: return {0, detail::run_quadratures(p)};
            case Command::scan: return {0, detail::run_scan(p, config.format)};
            case Command::optimize: return {0, detail::run_optimize(p)};
            case Command::verify: return detail::run_verify(p, tolerance_scale);
            case Command::dist: return {0, detail::run_dist(p)};
        }
        throw detail::invalid("unknown command");
    } catch (const Error& e) {
        return {is_validation_error(e.code()) ? 2 : 3,
                to_json_text(detail::error_json(to_string(e.code()), e.message()))};
    }
}

/// Parses argv (CLI11), merges --config, validates and runs.
inline RunResult run_command_line(int argc, const char* const* argv) {
    CLI::App app{"Heralded multiphoton states on a six-port Mach-Zehnder interferometer", "mzi"};
    app.require_subcommand(1);
    RunConfig config;
    Params& p = config.params;
    std::string output_path;
    std::string config_path;
    std::string format = "auto";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--output", output_path, "Write output to this file instead of stdout");
        sub->add_option("--config", config_path, "JSON file with parameter values; flags take precedence");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"auto", "json", "csv"}));
    };
    auto herald_flags = [&](CLI::App* sub) {
        sub->add_option("--n2", p.n2, "Photons injected in port 2");
        sub->add_option("--n3", p.n3, "Photons injected in port 3");
        sub->add_option("--m2", p.m2, "Herald count in port 2");
        sub->add_option("--m3", p.m3, "Herald count in port 3");
        sub->add_option("--alpha", p.alpha, "Coherent amplitude |alpha|");
        sub->add_option("--theta", p.theta, "Coherent phase theta (radians)");
        sub->add_option("--phi", p.phi, "Shift phase phi (radians)");
        sub->add_option("--cutoff", p.cutoff, "Fock cutoff (0 = automatic)");
        sub->add_option("--family", p.family, "psi1..psi16 instead of the herald tuple");
    };

    struct Sub {
        Command command;
        CLI::App* app;
    };
    std::vector<Sub> subs;
    auto add = [&](Command c, const char* help) {
        CLI::App* sub = app.add_subcommand(std::string(command_name(c)), help);
        common(sub);
        subs.push_back({c, sub});
        return sub;
    };

    add(Command::matrix, "Print the composed transfer matrix")->add_option("--phi", p.phi, "Shift phase (radians)");
    herald_flags(add(Command::herald, "Heralded output state by number-basis simulation"));
    {
        CLI::App* s = add(Command::state, "Heralded state coefficients");
        herald_flags(s);
        s->add_option("--method", p.method, "closed, general or oracle");
    }
    {
        CLI::App* s = add(Command::moments, "Normally ordered moment <a+^k a^l>");
        herald_flags(s);
        s->add_option("--k", p.k, "Power of a+");
        s->add_option("--l", p.l, "Power of a");
        s->add_option("--method", p.method, "way2, way1 or oracle");
    }
    herald_flags(add(Command::quadratures, "Quadrature variances and x squeezing in dB"));
    {
        CLI::App* s = add(Command::scan, "Probability or variance landscape (CSV)");
        s->add_option("--family", p.family, "psi1..psi16");
        s->add_option("--quantity", p.quantity, "prob, varx or varp");
        s->add_option("--alpha-min", p.alpha_min);
        s->add_option("--alpha-max", p.alpha_max);
        s->add_option("--phi-min", p.phi_min);
        s->add_option("--phi-max", p.phi_max);
        s->add_option("--res", p.res, "Samples per axis");
    }
    {
        CLI::App* s = add(Command::optimize, "Minimize the x variance over the parameter box");
        s->add_option("--family", p.family, "psi1..psi16");
        s->add_option("--res", p.res, "Coarse grid samples per axis");
    }
    {
        CLI::App* s = add(Command::verify, "Seeded cross-path consistency checks");
        s->add_option("--samples", p.samples, "Random parameter points");
        s->add_option("--seed", p.seed, "Generator seed");
    }
    {
        CLI::App* s = add(Command::dist, "Probabilities of all herald outcomes");
        s->add_option("--n2", p.n2);
        s->add_option("--n3", p.n3);
        s->add_option("--alpha", p.alpha);
        s->add_option("--theta", p.theta);
        s->add_option("--phi", p.phi);
        s->add_option("--herald-max", p.herald_max, "Largest herald count per port");
        s->add_option("--cutoff", p.cutoff, "Fock cutoff (0 = automatic)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        return {0, app.help()};
    } catch (const CLI::CallForAllHelp&) {
        return {0, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        return {2, to_json_text(detail::error_json(to_string(ErrorCode::InvalidArgument), e.what()))};
    }
    for (const Sub& s : subs)
        if (s.app->parsed()) config.command = s.command;

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw detail::invalid("cannot read config file " + config_path);
            Json cfg;
            try {
                cfg = Json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw detail::invalid(std::string("config file is not valid JSON: ") + e.what());
            }
            merge_config(p, cfg);
        }
    } catch (const Error& e) {
        return {2, to_json_text(detail::error_json(to_string(e.code()), e.message()))};
    }
    if (format == "auto") config.format = config.command == Command::scan ? Format::csv : Format::json;
    else config.format = format == "csv" ? Format::csv : Format::json;
    if (!output_path.empty()) config.output_path = output_path;
    RunResult result = run(config);
    result.output_path = config.output_path;
    return result;
}

}  // namespace mzi::cli

#endif  // MZI_TOOLS_MZI_CLI_HPP
