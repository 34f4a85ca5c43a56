#pragma once

// Configuration loading and the experiment drivers behind the CLI.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scissor/analysis.hpp"
#include "scissor/bwf_engine.hpp"
#include "scissor/core_optics.hpp"
#include "scissor/errors.hpp"
#include "scissor/limits_fgr.hpp"
#include "scissor/phase_matching.hpp"
#include "scissor/pump_pulse.hpp"

namespace scissor {

inline constexpr const char* tool_version = "0.1.0";

/// Everything an experiment needs, in SI units after loading.
struct ExperimentConfig {
    StructureParams structure;
    int reference_order = 50;
    double pump_wavelength = 0.0;  // m; 0 puts the pump on the reference resonance
    PulseShape pump_shape = PulseShape::Gaussian;
    double pump_duration = 1e-9;   // s
    double photon_number = 1.0;
    std::vector<int> ring_counts;  // efficiency-vs-n, fwhm-vs-n
    int rings = 1;                 // jsd
    int fit_min = 1;
    int fit_max = 20;
    int grid_points = 257;
    double grid_half_width = 5.0;  // in linewidths, jsd and fwhm-vs-n
    int spectrum_points = 6001;
    double spectrum_span = 1.5;    // in resonance spacings either side of the pump
    std::vector<double> pump_durations;  // s, coherence-number
    unsigned threads = 0;

    ExperimentConfig() {
        for (int n = 1; n <= 50; ++n) ring_counts.push_back(n);
        pump_durations = {1e-9, 1e-10, 1e-11};
    }

    void validate() const {
        try {
            structure.validate();
        } catch (const std::invalid_argument& e) {
            throw config_error(e.what());
        }
        if (reference_order < 2) throw config_error("reference_order must be >= 2");
        if (!(pump_duration > 0.0)) throw config_error("pump_duration_ns must be positive");
        if (!(photon_number >= 0.0)) throw config_error("photon_number must be >= 0");
        if (pump_wavelength < 0.0) throw config_error("pump_wavelength_nm must be positive");
        if (ring_counts.empty()) throw config_error("rings_list must not be empty");
        for (std::size_t i = 0; i < ring_counts.size(); ++i) {
            if (ring_counts[i] < 1) throw config_error("ring counts must be >= 1");
            if (i > 0 && ring_counts[i] <= ring_counts[i - 1])
                throw config_error("rings_list must be strictly increasing");
        }
        if (rings < 1) throw config_error("rings must be >= 1");
        if (fit_min > fit_max) throw config_error("fit_window must be [min, max]");
        if (grid_points < 33 || grid_points % 2 == 0)
            throw config_error("grid_points must be odd and >= 33");
        if (!(grid_half_width > 0.0)) throw config_error("grid_half_width_linewidths must be positive");
        if (spectrum_points < 3) throw config_error("spectrum_points must be >= 3");
        if (!(spectrum_span > 0.0)) throw config_error("spectrum_span_fsr must be positive");
        if (pump_durations.empty()) throw config_error("pump_durations_ns must not be empty");
        for (double d : pump_durations)
            if (!(d > 0.0)) throw config_error("pump durations must be positive");
    }

    DispersionModel model() const {
        return DispersionModel::from_phase_index(structure, reference_order);
    }

    ResonanceTriplet triplet(const DispersionModel& m) const {
        if (pump_wavelength == 0.0) return ResonanceTriplet::around(m);
        const double omega = constants::two_pi * constants::speed_of_light / pump_wavelength;
        const ModeOffset mode = m.locate(omega);
        if (mode.order < 2) throw config_error("pump wavelength too long for the ring");
        return ResonanceTriplet::around(m, mode.order);
    }

    PumpPulse pulse(const ResonanceTriplet& t) const {
        return {pump_shape, t.pump, pump_duration, photon_number};
    }

    EngineOptions engine() const {
        EngineOptions o;
        o.threads = threads;
        return o;
    }
};

namespace detail {

inline const std::set<std::string>& config_keys() {
    static const std::set<std::string> keys = {
        "ring_radius_um",      "ring_spacing_um",   "coupling_loss",
        "phase_index",         "group_velocity",    "gamma",
        "first_ring_position_um", "reference_order", "pump_wavelength_nm",
        "pump_shape",          "pump_duration_ns",  "photon_number",
        "rings_list",          "rings",             "fit_window",
        "grid_points",         "grid_half_width_linewidths", "spectrum_points",
        "spectrum_span_fsr",   "pump_durations_ns", "threads"};
    return keys;
}

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw config_error("config key '" + key + "' has the wrong type");
    }
}

}  // namespace detail

/// Parses a JSON config. Unknown keys are rejected. Lengths are given in
/// um (ring geometry) or nm (wavelength), durations in ns.
inline ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw config_error("config must be a JSON object");
    for (const auto& item : j.items())
        if (!detail::config_keys().count(item.key()))
            throw config_error("unknown config key '" + item.key() + "'");
    ExperimentConfig c;
    auto num = [&](const char* key, double& dst, double scale) {
        if (j.contains(key)) dst = detail::get_as<double>(j, key) * scale;
    };
    auto integer = [&](const char* key, int& dst) {
        if (j.contains(key)) dst = detail::get_as<int>(j, key);
    };
    num("ring_radius_um", c.structure.ring_radius, 1e-6);
    num("ring_spacing_um", c.structure.ring_spacing, 1e-6);
    if (j.contains("coupling_loss"))
        c.structure.self_coupling = 1.0 - detail::get_as<double>(j, "coupling_loss");
    num("phase_index", c.structure.phase_index, 1.0);
    num("group_velocity", c.structure.group_velocity, 1.0);
    num("gamma", c.structure.nonlinear_gamma, 1.0);
    num("first_ring_position_um", c.structure.first_ring_position, 1e-6);
    integer("reference_order", c.reference_order);
    num("pump_wavelength_nm", c.pump_wavelength, 1e-9);
    if (j.contains("pump_shape")) {
        const auto s = detail::get_as<std::string>(j, "pump_shape");
        if (s == "gaussian") c.pump_shape = PulseShape::Gaussian;
        else if (s == "tophat") c.pump_shape = PulseShape::TopHatSinc;
        else throw config_error("pump_shape must be 'gaussian' or 'tophat'");
    }
    num("pump_duration_ns", c.pump_duration, 1e-9);
    num("photon_number", c.photon_number, 1.0);
    if (j.contains("rings_list")) c.ring_counts = detail::get_as<std::vector<int>>(j, "rings_list");
    integer("rings", c.rings);
    if (j.contains("fit_window")) {
        const auto w = detail::get_as<std::vector<int>>(j, "fit_window");
        if (w.size() != 2) throw config_error("fit_window must be [min, max]");
        c.fit_min = w[0];
        c.fit_max = w[1];
    }
    integer("grid_points", c.grid_points);
    num("grid_half_width_linewidths", c.grid_half_width, 1.0);
    integer("spectrum_points", c.spectrum_points);
    num("spectrum_span_fsr", c.spectrum_span, 1.0);
    if (j.contains("pump_durations_ns")) {
        c.pump_durations = detail::get_as<std::vector<double>>(j, "pump_durations_ns");
        for (double& d : c.pump_durations) d *= 1e-9;
    }
    if (j.contains("threads")) {
        const int t = detail::get_as<int>(j, "threads");
        if (t < 0) throw config_error("threads must be >= 0");
        c.threads = static_cast<unsigned>(t);
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

/// Options that come from the command line rather than the config file.
struct RunOptions {
    std::string out_dir = ".";
    int grid_points = 0;  // overrides the config when > 0
    bool refine = false;
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"spectrum", "efficiency-vs-n", "jsd",
                                                   "fwhm-vs-n", "coherence-number"};
    return names;
}

namespace detail {

/// Serialises doubles through %.17g so the metadata is byte-stable.
inline nlohmann::ordered_json num(double v) {
    return nlohmann::ordered_json::parse(format_double(v));
}

inline nlohmann::ordered_json echo(const ExperimentConfig& c, const DispersionModel& m,
                                   const ResonanceTriplet& t) {
    nlohmann::ordered_json j;
    j["ring_radius_m"] = num(c.structure.ring_radius);
    j["ring_spacing_m"] = num(c.structure.ring_spacing);
    j["self_coupling"] = num(c.structure.self_coupling);
    j["coupling_loss"] = num(c.structure.coupling_loss());
    j["phase_index"] = num(c.structure.phase_index);
    j["group_velocity_m_per_s"] = num(c.structure.group_velocity);
    j["gamma_per_W_m"] = num(c.structure.nonlinear_gamma);
    j["first_ring_position_m"] = num(c.structure.first_ring_position);
    j["reference_order"] = c.reference_order;
    j["pump_order"] = t.pump_order;
    j["pump_frequency_rad_per_s"] = num(t.pump);
    j["pump_wavelength_m"] = num(vacuum_wavelength(t.pump));
    j["signal_frequency_rad_per_s"] = num(t.signal);
    j["idler_frequency_rad_per_s"] = num(t.idler);
    j["linewidth_rad_per_s"] = num(linewidth(c.structure));
    j["resonance_spacing_rad_per_s"] = num(m.resonance_spacing());
    j["dwell_time_s"] = num(dwell_time(c.structure));
    j["pump_shape"] = to_string(c.pump_shape);
    j["pump_duration_s"] = num(c.pump_duration);
    j["photon_number"] = num(c.photon_number);
    return j;
}

inline nlohmann::ordered_json diagnostics_json(const QuadratureDiagnostics& d) {
    nlohmann::ordered_json j;
    j["pump_support_rad_per_s"] = num(d.pump_support);
    j["pump_nodes"] = d.pump_nodes;
    j["pump_spacing_rad_per_s"] = num(d.pump_spacing);
    j["max_relative_change"] = num(d.max_relative_change);
    return j;
}

inline nlohmann::ordered_json grid_json(const FrequencyGrid& g, double width) {
    nlohmann::ordered_json j;
    j["points"] = g.n_points;
    j["half_width_linewidths"] = num(g.half_width / width);
    j["spacing_linewidths"] = num(g.spacing() / width);
    return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    write_text(path, j.dump(2) + "\n");
}

inline FrequencyGrid jsd_axis(const ExperimentConfig& c, double center, int points) {
    return FrequencyGrid::centered(center, c.grid_half_width * linewidth(c.structure), points);
}

}  // namespace detail

/// Runs one experiment and writes <name>.csv and <name>.json into the output
/// directory. Returns the paths written.
inline std::vector<std::string> run_experiment(const std::string& name, const ExperimentConfig& c,
                                               const RunOptions& run = {}) {
    namespace fs = std::filesystem;
    bool known = false;
    for (const auto& n : experiment_names()) known = known || n == name;
    if (!known) throw config_error("unknown experiment '" + name + "'");
    if (run.grid_points > 0 && (run.grid_points < 33 || run.grid_points % 2 == 0))
        throw config_error("--grid-points must be odd and >= 33");
    c.validate();

    const auto model = c.model();
    const auto t = c.triplet(model);
    const auto pulse = c.pulse(t);
    const double width = linewidth(c.structure);
    const int points = run.grid_points > 0 ? run.grid_points : c.grid_points;
    const auto opt = c.engine();

    fs::create_directories(run.out_dir);
    const fs::path csv_path = fs::path(run.out_dir) / (name + ".csv");
    const fs::path json_path = fs::path(run.out_dir) / (name + ".json");

    nlohmann::ordered_json meta;
    meta["tool"] = "scissor-sfwm";
    meta["version"] = tool_version;
    meta["experiment"] = name;
    meta["parameters"] = detail::echo(c, model, t);
    std::ostringstream csv;

    if (name == "spectrum") {
        const double span = c.spectrum_span * model.resonance_spacing();
        csv << "detuning_over_linewidth,field_enhancement_sq,lorentzian_sq\n";
        for (int i = 0; i < c.spectrum_points; ++i) {
            const double nu = -span + 2.0 * span * i / (c.spectrum_points - 1);
            const double w = t.pump + nu;
            csv << format_double(nu / width) << ','
                << format_double(std::norm(field_enhancement(c.structure, model, w))) << ','
                << format_double(std::norm(field_enhancement_lorentzian(c.structure, model, w)))
                << '\n';
        }
        meta["points"] = c.spectrum_points;
        meta["span_resonance_spacings"] = detail::num(c.spectrum_span);
        meta["peak_enhancement_sq"] =
            detail::num(std::norm(field_enhancement(c.structure, model, t.pump)));
        meta["quality_factor"] = detail::num(quality_factor(c.structure, t.pump));
    } else if (name == "coherence-number") {
        csv << "pump_duration_ns,bandwidth_rad_per_s,coherence_number\n";
        for (double d : c.pump_durations) {
            const double delta = 1.0 / d;
            csv << format_double(d * 1e9) << ',' << format_double(delta) << ','
                << format_double(coherence_number(c.structure, delta)) << '\n';
        }
    } else if (name == "efficiency-vs-n") {
        EfficiencySeries series;
        series.pump = to_string(c.pump_shape) + " " + format_double(c.pump_duration * 1e9) + " ns";
        series.window_min = c.fit_min;
        series.window_max = c.fit_max;
        csv << "rings,efficiency,long_pulse_closed_form,refinement_change\n";
        nlohmann::ordered_json diag = nlohmann::ordered_json::array();
        std::vector<std::string> warnings;
        for (int n : c.ring_counts) {
            const auto gs = efficiency_grid(c.structure, pulse, t.signal, points);
            const auto gi = efficiency_grid(c.structure, pulse, t.idler, points);
            QuadratureDiagnostics qd;
            double eff = 0.0, change = 0.0;
            if (run.refine) {
                const auto r = beta_squared_converged(c.structure, model, t, pulse, n, gs, gi, opt);
                eff = r.value;
                change = r.relative_change;
                qd = r.diagnostics;
            } else {
                eff = beta_squared(c.structure, model, t, pulse, n, gs, gi, opt, &qd);
            }
            series.rings.push_back(n);
            series.efficiency.push_back(eff);
            csv << n << ',' << format_double(eff) << ','
                << format_double(long_pulse_rate_closed_form(c.structure, t, n, c.pump_duration,
                                                             &warnings))
                << ',' << format_double(change) << '\n';
            nlohmann::ordered_json d = detail::diagnostics_json(qd);
            d["rings"] = n;
            d["grid"] = detail::grid_json(run.refine ? gs.refined() : gs, width);
            diag.push_back(d);
        }
        meta["series"] = series.pump;
        meta["fit_window"] = {c.fit_min, c.fit_max};
        try {
            series.exponent = fit_scaling_exponent(series);
            meta["scaling_exponent"] = detail::num(series.exponent);
        } catch (const std::domain_error&) {
            meta["scaling_exponent"] = nullptr;
        }
        meta["refined"] = run.refine;
        meta["diagnostics"] = diag;
        if (!warnings.empty()) meta["warnings"] = warnings.front();
    } else if (name == "jsd") {
        const auto gs = detail::jsd_axis(c, t.signal, points);
        const auto gi = detail::jsd_axis(c, t.idler, points);
        const auto grid = jsd_grid(c.structure, model, t, pulse, c.rings, gs, gi, opt);
        csv << "signal_detuning_over_linewidth,idler_detuning_over_linewidth,density\n";
        for (int i = 0; i < grid.rows(); ++i)
            for (int k = 0; k < grid.cols(); ++k)
                csv << format_double(grid.signal_coordinate(i)) << ','
                    << format_double(grid.idler_coordinate(k)) << ','
                    << format_double(grid.density(i, k)) << '\n';
        meta["rings"] = c.rings;
        meta["grid"] = detail::grid_json(gs, width);
        meta["density_units"] = "s^2";
        meta["efficiency"] = detail::num(grid.efficiency);
        meta["beta_squared"] = detail::num(grid.beta_squared);
        meta["norm"] = detail::num(grid.norm());
        try {
            const auto f = extract_fwhm(grid);
            meta["fwhm1_linewidths"] = detail::num(f.fwhm1);
            meta["fwhm2_linewidths"] = detail::num(f.fwhm2);
        } catch (const std::range_error&) {
            meta["fwhm1_linewidths"] = nullptr;
            meta["fwhm2_linewidths"] = nullptr;
        }
        meta["diagnostics"] = detail::diagnostics_json(grid.diagnostics);
    } else {  // fwhm-vs-n
        const auto gs = detail::jsd_axis(c, t.signal, points);
        const auto gi = detail::jsd_axis(c, t.idler, points);
        csv << "rings,fwhm1_linewidths,fwhm2_linewidths\n";
        for (int n : c.ring_counts) {
            const auto f = extract_fwhm(jsd_grid(c.structure, model, t, pulse, n, gs, gi, opt));
            csv << n << ',' << format_double(f.fwhm1) << ',' << format_double(f.fwhm2) << '\n';
        }
        meta["grid"] = detail::grid_json(gs, width);
    }

    detail::write_text(csv_path, csv.str());
    detail::write_json(json_path, meta);
    return {csv_path.string(), json_path.string()};
}

}  // namespace scissor
