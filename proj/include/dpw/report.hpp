#ifndef DPW_REPORT_HPP
#define DPW_REPORT_HPP

// JSON reports and the generate pipeline. Every report has the keys
// check, residuals, thresholds, config, pass.

#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "checks.hpp"
#include "config.hpp"
#include "mesh_io.hpp"
#include "surface.hpp"

namespace dpw {

using json = nlohmann::ordered_json;

/// JSON has no infinities or NaN; such residuals are written as null.
inline json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json config_json(const RunConfig& c) {
    return json{{"r", c.r},
                {"degree", c.degree},
                {"lambda_samples", c.lambda_samples},
                {"ode_tol", c.ode_tol},
                {"annulus", {c.rho_min, c.rho_max}},
                {"grid", {c.n_radial, c.n_angular}},
                {"alpha_offset", c.alpha_offset},
                {"unitarize", c.unitarize}};
}

inline json check_json(const CheckResult& res, const RunConfig& cfg) {
    json residuals = json::object(), thresholds = json::object(), informative = json::array();
    for (const auto& e : res.entries) {
        residuals[e.name] = number_or_null(e.value);
        if (e.gated) thresholds[e.name] = json{{e.at_least ? "min" : "max", e.threshold}};
        else informative.push_back(e.name);
    }
    return json{{"check", res.check},
                {"residuals", residuals},
                {"thresholds", thresholds},
                {"informative", informative},
                {"config", config_json(cfg)},
                {"pass", res.pass()}};
}

inline json monodromy_json(const MonodromyReport& r) {
    return json{{"unitarity_error", number_or_null(r.unitarity_error)},
                {"identity_error", number_or_null(r.identity_error)},
                {"identity_sign", r.identity_sign},
                {"derivative_error", number_or_null(r.derivative_error)},
                {"trace_law_error", number_or_null(r.trace_law_error)}};
}

inline void write_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write report to " + path);
    out << j.dump(2) << '\n';
    if (!out.flush()) throw IoError("failed while writing " + path);
}

/// Window length in u for the end diagnostic: one unit (a factor e in |z|) next to rho_min.
inline constexpr double default_end_window_u = 1.0;

/// Annulus e^-10 <= |z| <= e^10 for the wide Delaunay reference (two periods even for long
/// unduloids such as r = 1/3, whose period in u is about 8.1).
inline DomainGrid end_reference_domain() { return {std::exp(-10.0), std::exp(10.0), 400, 32}; }

struct GenerateResult {
    SurfaceMesh surface;
    SurfaceMesh reference;
    json report;
};

/// Cylinder surface (frame started at the unitarizer so the closing conditions hold), its
/// Delaunay reference surface, and the diagnostics report. Files are not written here.
inline GenerateResult generate(const RunConfig& cfg) {
    cfg.validate();
    const CylinderParams p(cfg.r);
    const LambdaGrid grid(cfg.lambda_samples);
    SurfaceConfig sc;
    sc.flow = flow_config(cfg.ode_tol);
    sc.iwasawa.degree = cfg.degree;
    sc.unitarize = true;

    GenerateResult out;
    out.surface = build_surface(p, cfg.domain(), grid, sc);
    out.reference = delaunay_reference(delaunay_residue(p), cfg.domain(), grid, sc);

    auto& s = out.surface;
    const auto sym = reflection_symmetry_check(s);
    const auto& d = s.diagnostics;
    MonodromyReport raw = d.raw_monodromy;
    raw.trace_law_error = trace_law_residual(monodromy(make_cylinder_potential(p), grid, sc.flow).M, delaunay_residue(p), grid);

    // The end diagnostic needs a reference spanning several periods, wider than the run annulus.
    EndComparison end{std::numeric_limits<double>::quiet_NaN()};
    try {
        const auto wide = delaunay_reference(delaunay_residue(p), end_reference_domain(), grid, sc);
        end = end_comparison_detail(s, wide, 1.0, default_end_window_u);
    } catch (const DomainError&) {
        // Reported as null: the profile diagnostic is optional.
    } catch (const FactorizationError&) {
    }
    const auto w = delaunay_ab(p);

    json residuals{{"seam_mismatch", number_or_null(s.seam_mismatch())},
                   {"H_relative_spread", number_or_null(s.H_stats.relative_spread())},
                   {"reflection_deviation", number_or_null(sym.max_deviation)},
                   {"involution_residual", number_or_null(sym.involution_residual)},
                   {"iwasawa_unitarity", number_or_null(d.iwasawa_max.unitarity)},
                   {"iwasawa_plus_loop_tail", number_or_null(d.iwasawa_max.plus_loop_tail)},
                   {"iwasawa_reconstruction", number_or_null(d.iwasawa_max.reconstruction)},
                   {"sym_hermitian_defect", number_or_null(d.sym_defect_max)}};
    json thresholds{{"seam_mismatch", {{"max", 1e-5}}},
                    {"H_relative_spread", {{"max", 0.05}}},
                    {"reflection_deviation", {{"max", 1e-3}}},
                    {"involution_residual", {{"max", 1e-8}}},
                    {"iwasawa_unitarity", {{"max", 1e-8}}},
                    {"iwasawa_plus_loop_tail", {{"max", 1e-8}}},
                    {"iwasawa_reconstruction", {{"max", 1e-8}}},
                    {"sym_hermitian_defect", {{"max", 1e-6}}}};
    bool pass = true;
    for (const auto& [k, t] : thresholds.items()) {
        const auto& v = residuals[k];
        pass = pass && v.is_number() && v.get<double>() <= t["max"].get<double>();
    }
    out.report = json{
        {"check", "generate"},
        {"residuals", residuals},
        {"thresholds", thresholds},
        {"config", config_json(cfg)},
        {"pass", pass},
        {"monodromy_identity_start", monodromy_json(raw)},
        {"monodromy_unitarized", monodromy_json(d.monodromy)},
        {"unitarizer_structure_defect", number_or_null(d.unitarizer_defect)},
        {"H_stats",
         {{"mean", number_or_null(s.H_stats.mean)},
          {"stddev", number_or_null(s.H_stats.stddev)},
          {"count", s.H_stats.count},
          {"degenerate_triangles", s.H_stats.degenerate}}},
        {"symmetry",
         {{"plane_normal", {sym.plane_normal.x, sym.plane_normal.y, sym.plane_normal.z}},
          {"plane_offset", sym.plane_offset},
          {"max_deviation", number_or_null(sym.max_deviation)},
          {"involution_residual", number_or_null(sym.involution_residual)}}},
        {"delaunay", {{"a", w.a}, {"b", w.b}, {"end_type", w.a * w.b > 0 ? "unduloid" : "nodoid"}}},
        {"end_profile",
         {{"deviation", number_or_null(end.deviation)},
          {"reference_period_u", number_or_null(end.period_u)},
          {"window_u", number_or_null(end.window_u)}}},
        {"mesh",
         {{"vertices", s.vertices.size()}, {"faces", s.faces.size()}, {"sym_flagged_nodes", d.sym_flagged}}}};
    return out;
}

} // namespace dpw

#endif // DPW_REPORT_HPP
