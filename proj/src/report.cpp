#include "nlwave/report.hpp"

#include <cmath>

#include "nlwave/textio.hpp"

namespace nlwave {

namespace {

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

// JSON has no infinities; keep them readable instead of turning them into null.
Json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

Json claim(double value, double tolerance, bool below) {
    return {{"value", number(value)},
            {"tolerance", tolerance},
            {"relation", below ? "<" : ">"},
            {"pass", below ? value < tolerance : value > tolerance}};
}

Json to_json(const HypothesisReport& report) {
    Json results = Json::array();
    for (const HypothesisResult& r : report.results) {
        Json j{{"id", r.id}, {"verdict", to_string(r.verdict)}, {"detail", r.detail}};
        if (r.witness) j["witness"] = {{"location", r.witness->location}, {"magnitude", number(r.witness->magnitude)}};
        results.push_back(j);
    }
    Json out{{"results", results},
             {"all_pass", report.all_pass()},
             {"conclusive", report.conclusive()},
             {"grid",
              {{"square_points", report.grid.square_points},
               {"line_points", report.grid.line_points},
               {"s_max", report.grid.s_max}}}};
    if (report.speed) out["speed"] = *report.speed;
    if (report.increasing_interval)
        out["increasing_interval"] = {report.increasing_interval->first, report.increasing_interval->second};
    return out;
}

Json to_json(const WaveSolution& wave) {
    return {{"model", wave.model},
            {"L", wave.grid.L},
            {"n", wave.grid.n},
            {"h", wave.grid.h()},
            {"c", wave.c},
            {"u0", wave.u0},
            {"residual", claim(wave.residual, std::max(wave.tolerance, 1e-8))},
            {"newton_tolerance", wave.tolerance},
            {"iterations", wave.iterations},
            {"monotone", wave.monotone},
            {"boundary_deviation", wave.boundary_deviation}};
}

Json to_json(const DecayFit& fit, double rate_tolerance) {
    Json out{{"side", to_string(fit.side)},
             {"rate", fit.rate},
             {"amplitude", fit.amplitude},
             {"window", {fit.window.lo, fit.window.hi}},
             {"r2", claim(fit.r2, 0.999, false)},
             {"points", fit.points}};
    if (fit.predicted) out["predicted"] = *fit.predicted;
    if (fit.relative_error) out["relative_error"] = claim(*fit.relative_error, rate_tolerance);
    return out;
}

Json to_json(const ResidueAmplitude& r) {
    Json out{{"side", to_string(r.side)},
             {"lambda", r.lambda},
             {"numerator", r.numerator},
             {"delta_prime", r.delta_prime},
             {"printed_denominator", r.printed_denominator},
             {"gamma", claim(r.gamma, 0.0, false)},
             {"gamma_printed", r.gamma_printed},
             {"denominator_ratio", r.denominator_ratio},
             {"amplitude", r.amplitude},
             {"clipped", r.clipped}};
    if (!r.warning.empty()) out["warning"] = r.warning;
    return out;
}

Json to_json(const UniquenessReport& r) {
    Json pairs = Json::array();
    for (const PairwiseAgreement& p : r.pairs)
        pairs.push_back({{"first", p.first},
                         {"second", p.second},
                         {"speed_difference", p.speed_difference},
                         {"profile_difference", p.profile_difference}});
    Json speeds = Json::array();
    for (const WaveSolution& w : r.waves) speeds.push_back(w.c);
    return {{"speeds", speeds},
            {"pairs", pairs},
            {"max_speed_difference", claim(r.max_speed_difference, r.speed_tolerance)},
            {"max_profile_difference", claim(r.max_profile_difference, r.profile_tolerance)},
            {"window", r.window},
            {"alarm", r.alarm},
            {"message", r.message}};
}

Json to_json(const SpectrumReport& r, const Classification& c) {
    const double tol = 1e-4 * r.op_norm;
    Json out{{"size", r.eigenvalues.size()},
             {"h", r.h},
             {"L", r.L},
             {"op_norm", r.op_norm},
             {"lambda0", complex_json(r.zero.lambda0)},
             {"lambda0_abs", claim(std::abs(r.zero.lambda0), tol)},
             {"zero_mode_cosine", claim(r.zero.cosine, 0.999, false)},
             {"simplicity_residual", claim(r.zero.simplicity_residual, 1e-2, false)},
             {"simplicity_truncated", r.zero.truncated},
             {"psi_positive_fraction", claim(r.adjoint.positive_fraction, 0.999, false)},
             {"adjoint_eigenvalue", r.adjoint.eigenvalue},
             {"spectral_bound_excluding_zero", claim(r.spectral_bound_excluding_zero, tol)},
             {"leftmost_real", r.leftmost_real},
             {"trace_relative_error", claim(r.trace_relative_error, 1e-6)},
             {"conjugate_pair_error", r.conjugate_pair_error},
             {"regions",
              {{"iota_underbar", r.regions.iota_underbar},
               {"iota_bar", r.regions.iota_bar},
               {"b_min", r.regions.b_min}}},
             {"classification",
              {{"margin", c.margin},
               {"diffusive", c.diffusive},
               {"delocalized", c.delocalized_count},
               {"delocalized_outside_strip", c.delocalized_outside_strip},
               {"delocalized_inside_xi", c.delocalized_inside_xi},
               {"extended", c.extended_count},
               {"extended_outside_strip", c.extended_outside_strip},
               {"extended_inside_xi", c.extended_inside_xi},
               {"point_spectrum", c.point_count}}}};
    if (c.zero_mode_decay) out["zero_mode_decay"] = *c.zero_mode_decay;
    Json top = Json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(10, r.eigenvalues.size()); ++k)
        top.push_back(complex_json(r.eigenvalues[k].value));
    out["leading_eigenvalues"] = top;
    return out;
}

Json to_json(const GreensTable& t, double jump) {
    return {{"L_G", t.L_G},
            {"n", t.n},
            {"h", t.h},
            {"alpha_plus", number(t.alpha_plus)},
            {"alpha_minus", number(t.alpha_minus)},
            {"alpha", number(t.alpha)},
            {"K1", number(t.K1)},
            {"fit_residual_plus", t.fit_residual_plus},
            {"fit_residual_minus", t.fit_residual_minus},
            {"jump", number(jump)}};
}

RunReport::RunReport(std::string command, bool reproducible) : reproducible_(reproducible) {
    doc_["schema"] = kReportSchema;
    doc_["command"] = std::move(command);
    doc_["reproducible"] = reproducible;
    doc_["sections"] = Json::object();
}

void RunReport::set_status(int exit_code, const std::string& message) {
    doc_["exit_code"] = exit_code;
    if (!message.empty()) doc_["message"] = message;
}

void RunReport::add_timing(const std::string& name, double seconds) {
    if (!reproducible_) doc_["timings"][name] = seconds;
}

void RunReport::write(const std::filesystem::path& path) const { write_text(path, dump()); }

}  // namespace nlwave
