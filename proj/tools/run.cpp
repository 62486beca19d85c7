#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpan/classify.hpp"
#include "qpan/continuation.hpp"
#include "qpan/emit.hpp"
#include "qpan/errors.hpp"
#include "qpan/exppoly.hpp"
#include "qpan/jets.hpp"
#include "qpan/nevanlinna.hpp"
#include "qpan/params.hpp"
#include "qpan/pole_orbit.hpp"
#include "qpan/rational.hpp"
#include "qpan/series.hpp"
#include "qpan/solver.hpp"
#include "registry.hpp"

namespace qpan::cli {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// schema plumbing

/// @brief Reject every key of obj that is not in the allowed list.
void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) {
                known = true;
                break;
            }
        if (!known)
            throw validation_error("unknown key '" + item.key() + "' in " + where);
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& where) {
    const json* v = find(obj, key);
    if (!v)
        throw validation_error("missing key '" + std::string(key) + "' in " + where);
    return *v;
}

double as_real(const json& v, const std::string& what) {
    if (!v.is_number())
        throw validation_error(what + " must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& what) {
    if (!v.is_number_integer())
        throw validation_error(what + " must be an integer");
    return v.get<int>();
}

bool as_bool(const json& v, const std::string& what) {
    if (!v.is_boolean())
        throw validation_error(what + " must be true or false");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& what) {
    if (!v.is_string())
        throw validation_error(what + " must be a string");
    return v.get<std::string>();
}

std::complex<double> as_complex(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw validation_error(what + " must be a [re, im] pair");
    return {v[0].get<double>(), v[1].get<double>()};
}

template <std::floating_point T>
std::complex<T> widen(std::complex<double> z) {
    return {static_cast<T>(z.real()), static_cast<T>(z.imag())};
}

template <std::floating_point T>
std::complex<T> get_complex(const json& obj, const char* key, const std::string& where) {
    return widen<T>(as_complex(require(obj, key, where), where + "." + key));
}

const json& options_of(const json& root) {
    static const json empty = json::object();
    const json* v = find(root, "options");
    if (!v) return empty;
    if (!v->is_object())
        throw validation_error("options must be an object");
    return *v;
}

template <std::floating_point T>
EquationParams<T> read_params(const json& root) {
    const json& p = require(root, "params", "the config");
    if (!p.is_object())
        throw validation_error("params must be an object");
    check_keys(p, "params", {"A", "B", "C", "D", "q"});
    EquationParams<T> out;
    out.A = get_complex<T>(p, "A", "params");
    out.B = get_complex<T>(p, "B", "params");
    out.C = get_complex<T>(p, "C", "params");
    out.D = get_complex<T>(p, "D", "params");
    out.q = get_complex<T>(p, "q", "params");
    return out;
}

int read_order(const json& opts, int fallback = 128) {
    const json* v = find(opts, "N");
    return v ? as_int(*v, "options.N") : fallback;
}

template <std::floating_point T>
Polynomial<T> read_poly(const json& v, const std::string& what) {
    if (!v.is_array())
        throw validation_error(what + " must be an array of [re, im] pairs");
    std::vector<std::complex<T>> c;
    c.reserve(v.size());
    for (const auto& entry : v)
        c.push_back(widen<T>(as_complex(entry, what + " entry")));
    return Polynomial<T>(std::move(c));
}

template <std::floating_point T>
RationalFunction<T> read_rational(const json& v, const std::string& what) {
    if (!v.is_object())
        throw validation_error(what + " must be an object with num and den");
    check_keys(v, what, {"num", "den"});
    return RationalFunction<T>(read_poly<T>(require(v, "num", what), what + ".num"),
                               read_poly<T>(require(v, "den", what), what + ".den"));
}

// ---------------------------------------------------------------------------
// artifact plumbing

/// @brief Where the artifact may go: the -o override (wins over the config's
///        own output key) and the config path, which must never be clobbered.
struct OutputSpec {
    std::string override_path;
    std::string config_path;
};

std::string resolve_output(const json& root, const OutputSpec& out,
                           const char* fallback) {
    std::string path = fallback;
    if (!out.override_path.empty())
        path = out.override_path;
    else if (const json* v = find(root, "output"))
        path = as_string(*v, "output");
    std::error_code ec;
    if (std::filesystem::weakly_canonical(path, ec) ==
            std::filesystem::weakly_canonical(out.config_path, ec) &&
        !ec)
        throw validation_error("output path would overwrite the config file: " + path);
    return path;
}

void write_artifact(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw validation_error("output path is not writable: " + path);
    out << content;
    out.flush();
    if (!out)
        throw validation_error("output path is not writable: " + path);
}

void print_status(const std::vector<std::pair<std::string, std::string>>& fields) {
    std::cout << JsonWriter::object(fields) << "\n";
}

// ---------------------------------------------------------------------------
// solve

template <std::floating_point T>
std::string series_rows(const SolutionSeries<T>& sol, int first, int last,
                        const std::string& member) {
    std::string out;
    for (int n = first; n <= last; ++n) {
        std::complex<T> c = sol.series.coeff(n);
        std::vector<std::string> cells;
        if (!member.empty()) cells.push_back(member);
        cells.push_back(std::to_string(n));
        cells.push_back(format_real(c.real()));
        cells.push_back(format_real(c.imag()));
        out += csv_line(cells);
    }
    return out;
}

template <std::floating_point T>
void run_solve(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const json& opts = options_of(root);
    check_keys(opts, "options", {"a0", "a0_list", "forced", "N"});
    const int N = read_order(opts);

    const json* a0v = find(opts, "a0");
    const json* listv = find(opts, "a0_list");
    bool forced = false;
    if (const json* v = find(opts, "forced")) forced = as_bool(*v, "options.forced");
    if ((forced ? 1 : 0) + (a0v ? 1 : 0) + (listv ? 1 : 0) != 1)
        throw validation_error(
            "solve requires exactly one of options a0, a0_list, forced = true");

    std::string body = csv_line(listv ? std::vector<std::string>{"member", "n", "re", "im"}
                                      : std::vector<std::string>{"n", "re", "im"});
    std::size_t count = 1;
    if (forced) {
        SolutionSeries<T> sol = check_forced_uniqueness(p, N);
        body += series_rows(sol, 0, sol.series.order(), "");
    } else if (listv) {
        if (!listv->is_array() || listv->empty())
            throw validation_error("options.a0_list must be a non-empty array of [re, im] pairs");
        std::vector<std::complex<T>> seeds;
        seeds.reserve(listv->size());
        for (const auto& entry : *listv)
            seeds.push_back(widen<T>(as_complex(entry, "options.a0_list entry")));
        std::vector<SolutionSeries<T>> family = enumerate_family(p, seeds, N);
        count = family.size();
        for (std::size_t k = 0; k < family.size(); ++k)
            body += series_rows(family[k], 0, family[k].series.order(),
                                std::to_string(k));
    } else {
        std::complex<T> a0 = widen<T>(as_complex(*a0v, "options.a0"));
        SolutionSeries<T> sol =
            p.linear() ? solve_linear(p, a0, N) : solve_entire(p, a0, N);
        body += series_rows(sol, 0, sol.series.order(), "");
    }

    const std::string path = resolve_output(root, out, "solve.csv");
    write_artifact(path, body);
    print_status({{"command", JsonWriter::str("solve")},
                  {"artifact", JsonWriter::str(path)},
                  {"series_count", std::to_string(count)},
                  {"order", std::to_string(N)}});
}

// ---------------------------------------------------------------------------
// laurent

template <std::floating_point T>
void run_laurent(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const json& opts = options_of(root);
    check_keys(opts, "options", {"z0", "b0", "N"});
    const int N = read_order(opts);

    const SolutionSeries<T> sol = [&]() -> SolutionSeries<T> {
        if (const json* z0v = find(opts, "z0")) {
            const json* b0v = find(opts, "b0");
            if (!b0v)
                throw validation_error("laurent at a nonzero center requires option b0");
            return solve_laurent_at(p, widen<T>(as_complex(*z0v, "options.z0")),
                                    widen<T>(as_complex(*b0v, "options.b0")), N);
        }
        if (find(opts, "b0"))
            throw validation_error("option b0 requires option z0");
        return solve_laurent_origin(p, N);
    }();

    // trailing exact zeros carry no information; the pole row always stays
    int last = sol.series.order();
    while (last > -1 && sol.series.coeff(last) == std::complex<T>{}) --last;

    std::string body = csv_line({"n", "re", "im"});
    body += series_rows(sol, -1, last, "");
    const std::string path = resolve_output(root, out, "laurent.csv");
    write_artifact(path, body);
    print_status({{"command", JsonWriter::str("laurent")},
                  {"artifact", JsonWriter::str(path)},
                  {"rows", std::to_string(last + 2)},
                  {"formal", sol.formal ? "true" : "false"}});
}

// ---------------------------------------------------------------------------
// continue

template <std::floating_point T>
ContinuationOptions<T> read_continuation_options(const json& opts) {
    ContinuationOptions<T> out;
    if (const json* v = find(opts, "micro_steps"))
        out.micro_steps = as_int(*v, "options.micro_steps");
    if (const json* v = find(opts, "known_poles")) {
        if (!v->is_array())
            throw validation_error("options.known_poles must be an array of [re, im] pairs");
        for (const auto& entry : *v)
            out.known_poles.push_back(
                widen<T>(as_complex(entry, "options.known_poles entry")));
    }
    return out;
}

template <std::floating_point T>
std::string jet_json(const char* mode, const Jet<T>& jet) {
    std::vector<std::string> ds;
    ds.reserve(jet.d.size());
    for (const auto& c : jet.d) ds.push_back(format_complex(c));
    return JsonWriter::object({{"command", JsonWriter::str("continue")},
                               {"mode", JsonWriter::str(mode)},
                               {"base", format_complex(jet.base)},
                               {"derivatives", JsonWriter::array(ds)}}) +
           "\n";
}

template <std::floating_point T>
void run_continue(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const json& opts = options_of(root);
    check_keys(opts, "options",
               {"a0", "N", "at", "mode", "depth", "k", "micro_steps", "known_poles"});
    const int N = read_order(opts);
    const std::complex<T> a0 = get_complex<T>(opts, "a0", "options");
    const std::complex<T> at = get_complex<T>(opts, "at", "options");
    std::string mode = "value";
    if (const json* v = find(opts, "mode")) mode = as_string(*v, "options.mode");
    const ContinuationOptions<T> copts = read_continuation_options<T>(opts);

    const SolutionSeries<T> sol = solve_entire(p, a0, N);
    std::string content;
    if (mode == "value") {
        if (find(opts, "depth"))
            throw validation_error("option depth applies only to modes jet and step");
        int k = 1;
        if (const json* v = find(opts, "k")) k = as_int(*v, "options.k");
        const std::complex<T> value = evaluate_continued(p, sol, at, k, copts);
        content = JsonWriter::object({{"command", JsonWriter::str("continue")},
                                      {"mode", JsonWriter::str("value")},
                                      {"at", format_complex(at)},
                                      {"k", std::to_string(k)},
                                      {"value", format_complex(value)}}) +
                  "\n";
    } else if (mode == "jet" || mode == "step") {
        if (find(opts, "k"))
            throw validation_error("option k applies only to mode value");
        int depth = 8;
        if (const json* v = find(opts, "depth")) depth = as_int(*v, "options.depth");
        Jet<T> jet = jet_from_series(sol, at, depth);
        if (mode == "step") jet = continue_step(p, jet, copts);
        content = jet_json(mode.c_str(), jet);
    } else {
        throw validation_error("options.mode must be value, jet, or step");
    }

    const std::string path = resolve_output(root, out, "continue.json");
    write_artifact(path, content);
    print_status({{"command", JsonWriter::str("continue")},
                  {"artifact", JsonWriter::str(path)},
                  {"mode", JsonWriter::str(mode)}});
}

// ---------------------------------------------------------------------------
// residual

/// @brief Coefficientwise scalar multiple; the series ring has no scalar
///        operation of its own because truncation never changes under one.
template <std::floating_point T>
TruncatedSeries<T> scaled(const TruncatedSeries<T>& s, std::complex<T> factor) {
    std::vector<std::complex<T>> c;
    c.reserve(static_cast<std::size_t>(s.order() - s.low()) + 1);
    for (int n = s.low(); n <= s.order(); ++n) c.push_back(factor * s.coeff(n));
    return TruncatedSeries<T>(s.center(), s.low(), std::move(c));
}

template <std::floating_point T>
TruncatedSeries<T> constant_series(std::complex<T> v, std::complex<T> center,
                                   int order) {
    std::vector<std::complex<T>> c(static_cast<std::size_t>(order) + 1);
    c[0] = v;
    return TruncatedSeries<T>(center, 0, std::move(c));
}

template <std::floating_point T>
void run_residual(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const json& opts = options_of(root);
    check_keys(opts, "options",
               {"source", "a0", "z0", "b0", "N", "radius", "samples"});
    const int N = read_order(opts);
    if (N < 1)
        throw validation_error("a residual run needs truncation order N >= 1");
    const double radius = as_real(require(opts, "radius", "options"), "options.radius");
    if (!(radius > 0) || !std::isfinite(radius))
        throw validation_error("options.radius must be positive and finite");
    int samples = 64;
    if (const json* v = find(opts, "samples")) samples = as_int(*v, "options.samples");
    if (samples < 1)
        throw validation_error("options.samples must be >= 1");

    std::string source = "entire";
    if (const json* v = find(opts, "source")) source = as_string(*v, "options.source");
    const SolutionSeries<T> sol = [&]() -> SolutionSeries<T> {
        if (source == "entire") {
            if (find(opts, "z0") || find(opts, "b0"))
                throw validation_error("options z0 and b0 apply only to source laurent-at");
            return solve_entire(p, get_complex<T>(opts, "a0", "options"), N);
        }
        if (source == "laurent-origin") {
            if (find(opts, "a0") || find(opts, "z0") || find(opts, "b0"))
                throw validation_error("source laurent-origin takes no seed options");
            return solve_laurent_origin(p, N);
        }
        if (source == "laurent-at") {
            if (find(opts, "a0"))
                throw validation_error("option a0 applies only to source entire");
            return solve_laurent_at(p, get_complex<T>(opts, "z0", "options"),
                                    get_complex<T>(opts, "b0", "options"), N);
        }
        throw validation_error(
            "options.source must be entire, laurent-origin, or laurent-at");
    }();

    // pointwise defect first: ode_residual refuses formal expansions before
    // any artifact work happens
    const TruncatedSeries<T>& s = sol.series;
    const T tau = T(2) * std::numbers::pi_v<T>;
    std::string body = csv_line({"i", "re_z", "im_z", "abs_residual"});
    T max_abs_sample = 0;
    for (int i = 0; i < samples; ++i) {
        const T angle = tau * T(i) / T(samples);
        const std::complex<T> z =
            s.center() + static_cast<T>(radius) *
                             std::complex<T>(std::cos(angle), std::sin(angle));
        const T r = std::abs(ode_residual(p, sol, z));
        max_abs_sample = std::max(max_abs_sample, r);
        body += csv_line({std::to_string(i), format_real(z.real()),
                          format_real(z.imag()), format_real(r)});
    }

    // the same defect assembled in the series ring: f' - A f(qz) - B f^2
    // - C f - D, with the normalized constants when the expansion is in
    // g = B f
    const EquationParams<T> pe =
        sol.variable == SeriesVariable::normalized ? p.normalized() : p;
    TruncatedSeries<T> defect = add(differentiate(s), scaled(dilate(s, pe.q), -pe.A));
    defect = add(defect, scaled(mul(s, s), -pe.B));
    defect = add(defect, scaled(s, -pe.C));
    defect = add(defect, constant_series(-pe.D, s.center(), defect.order()));
    const T series_max_abs = defect.max_abs_coeff();

    const std::string path = resolve_output(root, out, "residual.csv");
    write_artifact(path, body);
    print_status({{"command", JsonWriter::str("residual")},
                  {"artifact", JsonWriter::str(path)},
                  {"source", JsonWriter::str(source)},
                  {"series_max_abs", format_real(series_max_abs)},
                  {"max_abs_sample", format_real(max_abs_sample)}});
}

// ---------------------------------------------------------------------------
// expoly-check

template <std::floating_point T>
std::string poly_json(const Polynomial<T>& p) {
    std::vector<std::string> cs;
    for (int k = 0; k <= p.degree(); ++k) cs.push_back(format_complex(p.coeff(k)));
    return JsonWriter::array(cs);
}

template <std::floating_point T>
std::string term_json(const ExpTerm<T>& t) {
    return JsonWriter::object({{"prefactor", poly_json(t.prefactor)},
                               {"exponent", poly_json(t.exponent)}});
}

template <std::floating_point T>
std::string expoly_json(const ExpPoly<T>& f) {
    std::vector<std::string> ts;
    ts.reserve(f.terms.size());
    for (const auto& t : f.terms) ts.push_back(term_json(t));
    return JsonWriter::array(ts);
}

template <std::floating_point T>
void run_expoly_check(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const json& opts = options_of(root);
    check_keys(opts, "options", {"terms"});
    const json& terms = require(opts, "terms", "options");
    if (!terms.is_array() || terms.empty())
        throw validation_error("options.terms must be a non-empty array of terms");

    std::vector<ExpTerm<T>> raw;
    raw.reserve(terms.size());
    for (const auto& t : terms) {
        if (!t.is_object())
            throw validation_error("each term must be an object with prefactor and exponent");
        check_keys(t, "options.terms entry", {"prefactor", "exponent"});
        raw.push_back(
            {read_poly<T>(require(t, "prefactor", "options.terms entry"),
                          "term prefactor"),
             read_poly<T>(require(t, "exponent", "options.terms entry"),
                          "term exponent")});
    }

    const ExpPoly<T> candidate = ep_normalize(std::move(raw));
    const ExpPoly<T> residual = ep_residual(p, candidate);
    const bool solves = residual.terms.empty();

    std::vector<std::pair<std::string, std::string>> fields{
        {"command", JsonWriter::str("expoly-check")},
        {"candidate", expoly_json(candidate)},
        {"residual", expoly_json(residual)},
        {"solves", solves ? "true" : "false"},
    };
    if (!solves) fields.emplace_back("witness", term_json(ep_leading_witness(residual)));

    const std::string path = resolve_output(root, out, "expoly-check.json");
    write_artifact(path, JsonWriter::object(fields) + "\n");
    print_status({{"command", JsonWriter::str("expoly-check")},
                  {"artifact", JsonWriter::str(path)},
                  {"solves", solves ? "true" : "false"}});
}

// ---------------------------------------------------------------------------
// pole-orbit

RHSDegrees read_degrees(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer())
        throw validation_error(what + " must be a [p, s] pair of integers");
    return RHSDegrees{v[0].get<int>(), v[1].get<int>()};
}

template <std::floating_point T>
void run_pole_orbit(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const json& opts = options_of(root);
    check_keys(opts, "options", {"degrees", "kind", "t", "z0", "steps"});
    const RHSDegrees d = read_degrees(require(opts, "degrees", "options"), "options.degrees");
    OrbitStartKind kind = OrbitStartKind::pole;
    if (const json* v = find(opts, "kind")) {
        const std::string name = as_string(*v, "options.kind");
        if (name == "pole")
            kind = OrbitStartKind::pole;
        else if (name == "denominator-zero")
            kind = OrbitStartKind::denominator_zero;
        else
            throw validation_error("options.kind must be pole or denominator-zero");
    }
    long long t = 1;
    if (const json* v = find(opts, "t")) t = as_int(*v, "options.t");
    const std::complex<T> z0 = get_complex<T>(opts, "z0", "options");
    int steps = 16;
    if (const json* v = find(opts, "steps")) steps = as_int(*v, "options.steps");

    const PoleOrbit<T> orbit = trace_orbit(d, kind, t, z0, p.q, steps);

    std::string body = csv_line({"n", "re_point", "im_point", "order"});
    for (std::size_t k = 0; k < orbit.steps.size(); ++k)
        body += csv_line({std::to_string(k + 1),
                          format_real(orbit.steps[k].point.real()),
                          format_real(orbit.steps[k].point.imag()),
                          std::to_string(orbit.steps[k].order)});

    const std::string path = resolve_output(root, out, "pole-orbit.csv");
    write_artifact(path, body);

    std::vector<std::pair<std::string, std::string>> fields{
        {"command", JsonWriter::str("pole-orbit")},
        {"artifact", JsonWriter::str(path)},
        {"verdict", JsonWriter::str(orbit_verdict_name(orbit.verdict))},
        {"kind", JsonWriter::str(orbit_kind_name(orbit.kind))},
        {"start_order", std::to_string(orbit.start_order)},
        {"steps", std::to_string(orbit.steps.size())},
        {"assumes_generic_points", orbit.assumes_generic_points ? "true" : "false"},
    };
    if (std::abs(p.q) > T(1) && d.multiplier() >= 2)
        fields.emplace_back("growth_lower_bound",
                            format_real(growth_lower_bound(d, p.q)));
    print_status(fields);
}

// ---------------------------------------------------------------------------
// nevanlinna

template <std::floating_point T>
std::vector<T> read_radius_grid(const json& opts) {
    const json* radii = find(opts, "radii");
    const json* grid = find(opts, "grid");
    if ((radii != nullptr) == (grid != nullptr))
        throw validation_error("nevanlinna requires exactly one of options radii, grid");
    std::vector<T> out;
    if (radii) {
        if (!radii->is_array() || radii->empty())
            throw validation_error("options.radii must be a non-empty array of numbers");
        out.reserve(radii->size());
        for (const auto& entry : *radii)
            out.push_back(static_cast<T>(as_real(entry, "options.radii entry")));
        return out;
    }
    if (!grid->is_object())
        throw validation_error("options.grid must be an object");
    check_keys(*grid, "options.grid", {"from", "to", "count", "scale"});
    const double from = as_real(require(*grid, "from", "options.grid"), "grid.from");
    const double to = as_real(require(*grid, "to", "options.grid"), "grid.to");
    const int count = as_int(require(*grid, "count", "options.grid"), "grid.count");
    std::string scale = "linear";
    if (const json* v = find(*grid, "scale")) scale = as_string(*v, "grid.scale");
    if (count < 1) throw validation_error("grid.count must be >= 1");
    if (count == 1) return {static_cast<T>(from)};
    if (!(from < to))
        throw validation_error("grid.from must be below grid.to");
    out.reserve(static_cast<std::size_t>(count));
    if (scale == "linear") {
        for (int i = 0; i < count; ++i)
            out.push_back(static_cast<T>(from) +
                          (static_cast<T>(to) - static_cast<T>(from)) * T(i) /
                              T(count - 1));
    } else if (scale == "log") {
        if (!(from > 0))
            throw validation_error("a log grid requires grid.from > 0");
        const T lf = std::log(static_cast<T>(from));
        const T lt = std::log(static_cast<T>(to));
        for (int i = 0; i < count; ++i)
            out.push_back(std::exp(lf + (lt - lf) * T(i) / T(count - 1)));
    } else {
        throw validation_error("grid.scale must be linear or log");
    }
    return out;
}

template <std::floating_point T>
void run_nevanlinna(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const json& opts = options_of(root);
    check_keys(opts, "options", {"mode", "f", "radii", "grid", "nodes", "a", "outer"});
    const std::string mode = as_string(require(opts, "mode", "options"), "options.mode");
    if (mode != "curve" && mode != "q-shift" && mode != "first-main" &&
        mode != "mokhonko")
        throw validation_error(
            "options.mode must be curve, q-shift, first-main, or mokhonko");
    if (mode != "first-main" && find(opts, "a"))
        throw validation_error("option a applies only to mode first-main");
    if (mode != "mokhonko" && find(opts, "outer"))
        throw validation_error("option outer applies only to mode mokhonko");

    // the pole list comes from the denominator roots, so cancel any common
    // factor the config smuggled in before it distorts the counting function
    const RationalFunction<T> f =
        reduce(read_rational<T>(require(opts, "f", "options"), "options.f"));
    const std::vector<T> grid = read_radius_grid<T>(opts);
    int nodes = kQuadratureNodes;
    if (const json* v = find(opts, "nodes")) nodes = as_int(*v, "options.nodes");

    if (mode == "curve") {
        const std::vector<CharacteristicSample<T>> rows =
            characteristic_curve(f, grid, nodes);
        std::string body = csv_line({"r", "m", "N", "T"});
        for (const auto& row : rows)
            body += csv_line({format_real(row.r), format_real(row.m),
                              format_real(row.N), format_real(row.T)});
        const std::string path =
            resolve_output(root, out, "nevanlinna.csv");
        write_artifact(path, body);
        print_status({{"command", JsonWriter::str("nevanlinna")},
                      {"artifact", JsonWriter::str(path)},
                      {"mode", JsonWriter::str("curve")},
                      {"rows", std::to_string(rows.size())}});
        return;
    }

    std::vector<std::pair<std::string, std::string>> fields{
        {"command", JsonWriter::str("nevanlinna")},
        {"mode", JsonWriter::str(mode)},
    };
    T value;
    if (mode == "q-shift") {
        value = verify_q_shift(f, p.q, grid, nodes);
        fields.emplace_back("q", format_complex(p.q));
        fields.emplace_back("max_deviation", format_real(value));
    } else if (mode == "first-main") {
        const std::complex<T> a = get_complex<T>(opts, "a", "options");
        value = verify_first_main(f, a, grid, nodes);
        fields.emplace_back("a", format_complex(a));
        fields.emplace_back("max_deviation", format_real(value));
    } else {
        const RationalFunction<T> outer =
            read_rational<T>(require(opts, "outer", "options"), "options.outer");
        value = verify_mokhonko(f, outer, grid, nodes);
        fields.emplace_back("ratio", format_real(value));
    }
    fields.emplace_back("largest_radius", format_real(grid.back()));

    const std::string path = resolve_output(root, out, "nevanlinna.json");
    write_artifact(path, JsonWriter::object(fields) + "\n");
    print_status({{"command", JsonWriter::str("nevanlinna")},
                  {"artifact", JsonWriter::str(path)},
                  {"mode", JsonWriter::str(mode)},
                  {"value", format_real(value)}});
}

// ---------------------------------------------------------------------------
// classify

TriState read_tristate(const json& opts, const char* key) {
    const json* v = find(opts, key);
    if (!v) return TriState::unknown;
    const std::string name = as_string(*v, std::string("options.") + key);
    if (name == "unknown") return TriState::unknown;
    if (name == "yes") return TriState::yes;
    if (name == "no") return TriState::no;
    throw validation_error(std::string("options.") + key +
                           " must be unknown, yes, or no");
}

SolutionKind read_solution_kind(const json& opts) {
    const json* v = find(opts, "kind");
    if (!v) return SolutionKind::unspecified;
    const std::string name = as_string(*v, "options.kind");
    if (name == "unspecified") return SolutionKind::unspecified;
    if (name == "entire") return SolutionKind::entire;
    if (name == "meromorphic-order-zero") return SolutionKind::meromorphic_order_zero;
    if (name == "transcendental-meromorphic-order-zero")
        return SolutionKind::transcendental_meromorphic_order_zero;
    throw validation_error(
        "options.kind must be unspecified, entire, meromorphic-order-zero, or "
        "transcendental-meromorphic-order-zero");
}

const char* conclusion_kind_name(ConclusionKind k) {
    switch (k) {
    case ConclusionKind::existence: return "existence";
    case ConclusionKind::non_existence: return "non-existence";
    case ConclusionKind::necessary_condition: return "necessary-condition";
    case ConclusionKind::informational: return "informational";
    }
    return "informational";
}

template <std::floating_point T>
void run_classify(const json& root, const OutputSpec& out) {
    const EquationParams<T> p = read_params<T>(root);
    const T aq = std::abs(p.q);
    if (!std::isfinite(aq) || aq == T(0) || aq == T(1))
        throw validation_error(
            "classification requires a finite rescaling factor with |q| not 0 or 1");

    const json& opts = options_of(root);
    check_keys(opts, "options",
               {"kind", "f_divides_p", "n_small", "rational_coeffs", "f0_zero",
                "degrees"});
    Hypotheses h;
    h.q_regime = aq < T(1) ? QRegime::inside : QRegime::outside;
    h.b_zero = p.B == std::complex<T>{};
    h.d_zero = p.D == std::complex<T>{};
    h.solution_kind = read_solution_kind(opts);
    h.f_divides_p = read_tristate(opts, "f_divides_p");
    h.n_small = read_tristate(opts, "n_small");
    if (const json* v = find(opts, "rational_coeffs"))
        h.rational_coeffs = as_bool(*v, "options.rational_coeffs");
    h.f0_zero = read_tristate(opts, "f0_zero");
    if (const json* v = find(opts, "degrees"))
        h.degrees = read_degrees(*v, "options.degrees");

    const Verdict verdict = classify(h);

    std::vector<std::string> conclusions;
    conclusions.reserve(verdict.conclusions.size());
    for (const auto& c : verdict.conclusions)
        conclusions.push_back(
            JsonWriter::object({{"citation", JsonWriter::str(std::string(c.citation))},
                                {"kind", JsonWriter::str(conclusion_kind_name(c.kind))},
                                {"statement", JsonWriter::str(c.statement)}}));
    std::vector<std::string> inconsistencies;
    inconsistencies.reserve(verdict.inconsistencies.size());
    for (const auto& msg : verdict.inconsistencies)
        inconsistencies.push_back(JsonWriter::str(msg));

    const std::string content =
        JsonWriter::object(
            {{"command", JsonWriter::str("classify")},
             {"regime", JsonWriter::str(h.q_regime == QRegime::inside ? "inside"
                                                                      : "outside")},
             {"conclusions", JsonWriter::array(conclusions)},
             {"no_solution_of_this_kind",
              verdict.no_solution_of_this_kind ? "true" : "false"},
             {"inconsistencies", JsonWriter::array(inconsistencies)}}) +
        "\n";

    const std::string path = resolve_output(root, out, "classify.json");
    write_artifact(path, content);
    print_status({{"command", JsonWriter::str("classify")},
                  {"artifact", JsonWriter::str(path)},
                  {"conclusions", std::to_string(verdict.conclusions.size())},
                  {"no_solution_of_this_kind",
                   verdict.no_solution_of_this_kind ? "true" : "false"}});
}

// ---------------------------------------------------------------------------
// dispatch

template <std::floating_point T>
void run_command(const std::string& command, const json& root,
                 const OutputSpec& out) {
    if (command == "solve") return run_solve<T>(root, out);
    if (command == "laurent") return run_laurent<T>(root, out);
    if (command == "continue") return run_continue<T>(root, out);
    if (command == "residual") return run_residual<T>(root, out);
    if (command == "expoly-check") return run_expoly_check<T>(root, out);
    if (command == "pole-orbit") return run_pole_orbit<T>(root, out);
    if (command == "nevanlinna") return run_nevanlinna<T>(root, out);
    run_classify<T>(root, out);
}

} // namespace

void run(const std::string& config_path, const std::string& output_override) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in)
        throw validation_error("config file is not readable: " + config_path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw validation_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw validation_error("config must be a JSON object");
    check_keys(root, "the config", {"command", "params", "options", "output", "precision"});

    const std::string command =
        as_string(require(root, "command", "the config"), "command");
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        throw validation_error("unknown command '" + command + "'");

    std::string precision = "double";
    if (const json* v = find(root, "precision"))
        precision = as_string(*v, "precision");
    const OutputSpec out{output_override, config_path};
    if (precision == "double")
        run_command<double>(command, root, out);
    else if (precision == "extended")
        run_command<long double>(command, root, out);
    else
        throw validation_error("precision must be double or extended");
}

} // namespace qpan::cli
