#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "neel/analysis.hpp"
#include "neel/green.hpp"
#include "neel/minimizer.hpp"

namespace neel {

enum class Format { json, csv };

inline Format format_from_string(const std::string& s)
{
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    throw std::invalid_argument("unknown format '" + s + "' (expected json or csv)");
}

using Json = nlohmann::ordered_json;

// 17 significant digits; non-finite values become null.
inline std::string format_number(double x)
{
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_json_value(std::ostream& os, const Json& j, int indent = 0)
{
    const std::string pad(indent, ' ');
    const std::string inner(indent + 2, ' ');
    switch (j.type()) {
    case Json::value_t::number_float: os << format_number(j.get<double>()); break;
    case Json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            break;
        }
        os << "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << inner << Json(it.key()).dump() << ": ";
            write_json_value(os, it.value(), indent + 2);
        }
        os << "\n" << pad << "}";
        break;
    }
    case Json::value_t::array: {
        // Arrays of scalars stay on one line.
        bool flat = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
        os << "[";
        bool first = true;
        for (const auto& e : j) {
            if (!first) os << (flat ? ", " : ",");
            first = false;
            if (!flat) os << "\n" << inner;
            write_json_value(os, e, indent + 2);
        }
        if (!flat && !j.empty()) os << "\n" << pad;
        os << "]";
        break;
    }
    default: os << j.dump(); break;
    }
}

inline std::string to_json_text(const Json& j)
{
    std::ostringstream os;
    write_json_value(os, j);
    os << "\n";
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json to_json(const EnergyBreakdown& e)
{
    return Json{{"exchange", e.exchange}, {"anisotropy", e.anisotropy}, {"stray", e.stray}, {"total", e.total}};
}

inline Json to_json(const DecayReport& d)
{
    return Json{{"amplitude_multipole", d.amplitude_multipole},
                {"amplitude_tailfit", d.amplitude_tailfit},
                {"exponent_fit", d.exponent_fit},
                {"green_coeff", d.green_coeff},
                {"amplitude_full", d.amplitude_full},
                {"corner_mass", d.corner_mass},
                {"forcing_integral", d.forcing_integral},
                {"window", Json::array({d.window.lo, d.window.hi})}};
}

inline Json to_json(const VerificationReport& r)
{
    Json j{{"all_ok", r.all_ok()},
           {"monotone_strict", r.monotone_strict},
           {"descent_margin", number_or_null(r.descent_margin)},
           {"violation_index", r.violation_index ? Json(*r.violation_index) : Json(nullptr)},
           {"symmetry_defect", number_or_null(r.symmetry_defect)},
           {"symmetry_threshold", r.symmetry_threshold},
           {"symmetry_ok", r.symmetry_ok},
           {"range_margin", number_or_null(r.range_margin)},
           {"range_ok", r.range_ok},
           {"residual_sup", number_or_null(r.residual_sup)},
           {"residual_ok", r.residual_ok},
           {"linearization_residual", number_or_null(r.linearization_residual)},
           {"linearization_ok", r.linearization_ok},
           {"f1_integral", number_or_null(r.f1_integral)},
           {"f2_integral_ratio", number_or_null(r.f2_integral_ratio)},
           {"f3_integral", number_or_null(r.f3_integral)},
           {"forcing_ok", r.forcing_ok},
           {"decay", r.decay ? to_json(*r.decay) : Json(nullptr)},
           {"decay_ok", r.decay_ok},
           {"energy", to_json(r.energy)},
           {"wall_width", number_or_null(r.wall_width)}};
    if (!r.decay_error.empty()) j["decay_error"] = r.decay_error;
    return j;
}

inline Json to_json(const SolveResult& s, const VerificationReport* report = nullptr)
{
    const auto& g = s.profile.grid();
    const auto& p = s.profile.params();
    Json j{{"kind", "neel_wall_solution"},
           {"params", Json{{"nu", p.nu()}, {"h", p.h()}, {"theta_h", p.theta_h()}, {"c_h", p.c_h()}}},
           {"grid", Json{{"half_length", g.half_length()}, {"n_points", g.n_points()}, {"spacing", g.spacing()}}},
           {"profile", Json{{"x", g.sample_nodes()}, {"theta", s.profile.values()}}},
           {"energy", to_json(s.energy)},
           {"residual_sup", s.residual_sup},
           {"iterations", s.iterations},
           {"converged", s.converged},
           {"status", to_string(s.status)},
           {"tol", s.tol},
           {"tail_amplitude", s.tail_amplitude ? Json(*s.tail_amplitude) : Json(nullptr)}};
    if (report) j["report"] = to_json(*report);
    return j;
}

inline SolveResult solve_result_from_json(const Json& j)
{
    if (j.value("kind", "") != "neel_wall_solution") throw std::runtime_error("not a Néel wall solution document");
    const auto& jp = j.at("params");
    const auto& jg = j.at("grid");
    const Grid1D grid(jg.at("half_length").get<double>(), jg.at("n_points").get<int>());
    const ModelParams params(jp.at("nu").get<double>(), jp.at("h").get<double>());
    Profile profile(grid, params, j.at("profile").at("theta").get<std::vector<double>>());
    const auto& je = j.at("energy");
    SolveResult s{profile,
                  EnergyBreakdown{je.at("exchange").get<double>(), je.at("anisotropy").get<double>(),
                                  je.at("stray").get<double>(), je.at("total").get<double>()},
                  j.at("residual_sup").get<double>(),
                  j.at("iterations").get<int>(),
                  j.at("converged").get<bool>(),
                  solve_status_from_string(j.at("status").get<std::string>()),
                  j.at("tol").get<double>(),
                  std::nullopt,
                  {},
                  {}};
    if (!j.at("tail_amplitude").is_null()) s.tail_amplitude = j.at("tail_amplitude").get<double>();
    return s;
}

inline SolveResult load_solve_result(const std::string& path)
{
    Json j;
    try {
        j = Json::parse(read_text_file(path));
    } catch (const Json::exception& e) {
        throw std::runtime_error("cannot parse '" + path + "': " + e.what());
    }
    try {
        return solve_result_from_json(j);
    } catch (const std::exception& e) {
        throw std::runtime_error("'" + path + "': " + e.what());
    }
}

inline const char* sweep_csv_header()
{
    return "nu,h,energy_total,wall_width,amplitude_multipole,amplitude_tailfit,residual_sup,converged";
}

inline std::string to_csv(const SweepTable& t)
{
    std::string out = std::string(sweep_csv_header()) + "\n";
    for (const auto& r : t.rows) {
        out += format_number(r.nu) + "," + format_number(r.h) + "," + format_number(r.energy_total) + "," +
               format_number(r.wall_width) + "," + format_number(r.amplitude_multipole) + "," +
               format_number(r.amplitude_tailfit) + "," + format_number(r.residual_sup) + "," +
               (r.converged ? "true" : "false") + "\n";
    }
    return out;
}

inline Json to_json(const SweepTable& t)
{
    Json rows = Json::array();
    for (const auto& r : t.rows) {
        Json row{{"nu", r.nu},
                 {"h", r.h},
                 {"energy_total", number_or_null(r.energy_total)},
                 {"wall_width", number_or_null(r.wall_width)},
                 {"amplitude_multipole", number_or_null(r.amplitude_multipole)},
                 {"amplitude_tailfit", number_or_null(r.amplitude_tailfit)},
                 {"residual_sup", number_or_null(r.residual_sup)},
                 {"converged", r.converged}};
        if (!r.error.empty()) row["error"] = r.error;
        rows.push_back(std::move(row));
    }
    return Json{{"kind", "neel_wall_sweep"}, {"rows", std::move(rows)}};
}

inline std::string to_csv(const SolveResult& s)
{
    std::string out = "x,theta\n";
    const auto& g = s.profile.grid();
    for (int i = 0; i <= g.n_points(); ++i)
        out += format_number(g.node(i)) + "," + format_number(s.profile[i]) + "\n";
    return out;
}

inline void emit(const SolveResult& s, const VerificationReport* report, Format format, const std::string& path)
{
    write_text_file(path, format == Format::json ? to_json_text(to_json(s, report)) : to_csv(s));
}

inline void emit(const SweepTable& t, Format format, const std::string& path)
{
    write_text_file(path, format == Format::json ? to_json_text(to_json(t)) : to_csv(t));
}

// Samples of G on [0, xmax] (G is even).
struct GreenTable {
    ModelParams params;
    std::vector<double> x;
    std::vector<double> g;
};

inline GreenTable tabulate_green(const ModelParams& params, double xmax, int samples)
{
    if (!(xmax > 0.0) || samples < 2) throw std::invalid_argument("green table: need xmax > 0 and at least 2 samples");
    GreenTable t{params, {}, {}};
    for (int i = 0; i < samples; ++i) {
        const double x = xmax * i / (samples - 1);
        t.x.push_back(x);
        t.g.push_back(green_quadrature(x, params));
    }
    return t;
}

inline Json to_json(const GreenTable& t)
{
    return Json{{"kind", "neel_green_function"},
                {"params", Json{{"nu", t.params.nu()}, {"h", t.params.h()}}},
                {"green_coeff", green_decay_coeff(t.params)},
                {"x", t.x},
                {"G", t.g}};
}

inline std::string to_csv(const GreenTable& t)
{
    std::string out = "x,G,x2G\n";
    for (std::size_t i = 0; i < t.x.size(); ++i)
        out += format_number(t.x[i]) + "," + format_number(t.g[i]) + "," + format_number(t.x[i] * t.x[i] * t.g[i]) + "\n";
    return out;
}

inline void emit(const GreenTable& t, Format format, const std::string& path)
{
    write_text_file(path, format == Format::json ? to_json_text(to_json(t)) : to_csv(t));
}

} // namespace neel
