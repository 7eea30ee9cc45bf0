#include "pulseorigin/io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pulseorigin/errors.hpp"

namespace pulseorigin::io {

using nlohmann::json;

namespace {

json load_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidInput("cannot open file: " + file.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidInput("malformed JSON in " + file.string() + ": " + e.what());
    }
    return j;
}

void save_text(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw InvalidInput("cannot write file: " + file.string());
    out << text;
}

Waveform waveform_from_json(const json& j) {
    Waveform w;
    try {
        w.dt = j.at("dt_s").get<double>();
        w.omega0 = j.at("omega0_rad_s").get<double>();
        w.slices = j.at("slices_rad_s").get<std::vector<double>>();
        w.label = j.value("label", std::string{});
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("bad waveform JSON: ") + e.what());
    }
    w.validate();
    if (w.slices.empty()) throw InvalidInput("bad waveform JSON: no slices");
    return w;
}

json waveform_to_json(const Waveform& w) {
    return json{{"dt_s", w.dt},
                {"omega0_rad_s", w.omega0},
                {"slices_rad_s", w.slices},
                {"label", w.label}};
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Waveform read_waveform(const std::filesystem::path& file) {
    return waveform_from_json(load_json(file));
}

Waveform waveform_from_json_text(const std::string& text) {
    try {
        return waveform_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed waveform JSON: ") + e.what());
    }
}

std::string waveform_to_json_text(const Waveform& w) { return waveform_to_json(w).dump(2); }

void write_waveform(const std::filesystem::path& file, const Waveform& w) {
    save_text(file, waveform_to_json(w).dump(2) + "\n");
}

SequenceFile read_sequence(const std::filesystem::path& file) {
    const json j = load_json(file);
    SequenceFile out;
    try {
        out.omega0 = j.value("omega0_rad_s", defaults::omega0);
        out.tau = j.value("tau_s", defaults::tau_rect);
        out.seq.T = j.at("T_s").get<double>();
        if (j.contains("eps")) {
            const auto eps = j.at("eps").get<std::vector<double>>();
            if (eps.size() != 3) throw InvalidInput("sequence eps must have 3 entries");
            std::copy(eps.begin(), eps.end(), out.seq.eps.begin());
        }

        auto parse_pulse = [&](const std::string& key, int index) -> PulseShape {
            const json& p = j.at(key);
            if (p.is_string()) {
                const std::string s = p.get<std::string>();
                if (s == "rect")
                    return index == 2 ? rectangular_mirror(out.omega0, out.tau)
                                      : rectangular_beamsplitter(out.omega0, out.tau);
                if (s == "perfect") {
                    if (index != 2)
                        throw InvalidInput("'perfect' is only valid for pulse2");
                    return perfect_mirror(2.0 * out.tau);
                }
                if (s == "flip-reverse-of-1") {
                    if (index != 3)
                        throw InvalidInput("'flip-reverse-of-1' is only valid for pulse3");
                    if (!std::holds_alternative<Waveform>(out.seq.pulse1))
                        throw InvalidInput("flip-reverse-of-1 needs a waveform pulse1");
                    return flip_reverse(std::get<Waveform>(out.seq.pulse1));
                }
                return read_waveform(file.parent_path() / s);
            }
            return waveform_from_json(p);
        };

        out.seq.pulse1 = parse_pulse("pulse1", 1);
        out.seq.pulse2 = parse_pulse("pulse2", 2);
        out.seq.pulse3 = parse_pulse("pulse3", 3);

        if (j.contains("dist")) {
            const json& d = j.at("dist");
            if (d.contains("sigma_delta_rad_s"))
                out.dist.sigma_delta = d.at("sigma_delta_rad_s").get<double>();
            else if (d.contains("sigma_p_hbar_k"))
                out.dist = MomentumDistribution::from_momentum_width(
                    d.at("sigma_p_hbar_k").get<double>(), out.omega0);
            out.dist.mean_v = d.value("mean_v_m_s", 0.0);
            out.dist.n_samples = d.value("n_samples", 64);
            const std::string q = d.value("quadrature", std::string("gauss-hermite"));
            if (q == "gauss-hermite")
                out.dist.quadrature = MomentumDistribution::Quadrature::GaussHermite;
            else if (q == "uniform-grid")
                out.dist.quadrature = MomentumDistribution::Quadrature::UniformGrid;
            else
                throw InvalidInput("unknown quadrature: " + q);
        }
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("bad sequence JSON: ") + e.what());
    }
    out.seq.validate();
    return out;
}

OptimizationConfig read_optimization_config(const std::filesystem::path& file) {
    const json j = load_json(file);
    OptimizationConfig cfg;
    try {
        cfg.omega0 = j.value("omega0_rad_s", defaults::omega0);
        cfg.duration_tpi = j.value("duration_tpi", 2.0);
        cfg.slices_per_tpi = j.value("slices_per_tpi", defaults::slices_per_tpi);
        cfg.delta_range = j.value("delta_range_omega0", 1.5);
        cfg.eps_range = j.value("eps_range", 0.10);
        cfg.n_delta = j.value("n_delta", 15);
        cfg.n_eps = j.value("n_eps", 11);
        cfg.max_iterations = j.value("max_iterations", 400);
        cfg.smoothness_weight = j.value("smoothness_weight", 1.0e-3);
        cfg.peak_weight = j.value("peak_weight", 1.0e2);
        cfg.rng_seed = j.value("rng_seed", static_cast<std::uint64_t>(1));
        if (j.contains("m_target_s"))
            cfg.m_target = j.at("m_target_s").get<double>();
        else if (j.contains("origin_fraction"))
            cfg.set_origin_fraction(j.at("origin_fraction").get<double>());
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("bad optimization config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

void write_optimization_config(const std::filesystem::path& file,
                               const OptimizationConfig& cfg) {
    const json j{{"omega0_rad_s", cfg.omega0},
                 {"duration_tpi", cfg.duration_tpi},
                 {"slices_per_tpi", cfg.slices_per_tpi},
                 {"m_target_s", cfg.m_target},
                 {"delta_range_omega0", cfg.delta_range},
                 {"eps_range", cfg.eps_range},
                 {"n_delta", cfg.n_delta},
                 {"n_eps", cfg.n_eps},
                 {"max_iterations", cfg.max_iterations},
                 {"smoothness_weight", cfg.smoothness_weight},
                 {"peak_weight", cfg.peak_weight},
                 {"rng_seed", cfg.rng_seed}};
    save_text(file, j.dump(2) + "\n");
}

void write_characterization_json(const std::filesystem::path& file,
                                 const PulseCharacterization& c) {
    json grid = json::array();
    for (const DispersionPoint& p : c.grid)
        grid.push_back({{"delta_rad_s", p.delta}, {"phi_rad", p.phi}, {"p_e", p.p_e}});
    const json j{{"role", to_string(c.role)},
                 {"m_s", c.m},
                 {"tau_origin_s", c.tau_origin},
                 {"duration_s", c.duration},
                 {"grid", grid}};
    save_text(file, j.dump(2) + "\n");
}

void write_characterization_csv(const std::filesystem::path& file,
                                const PulseCharacterization& c) {
    std::ostringstream out;
    out << "delta_rad_s,phi_rad,p_e\n";
    for (const DispersionPoint& p : c.grid)
        out << format_double(p.delta) << ',' << format_double(p.phi) << ','
            << format_double(p.p_e) << '\n';
    save_text(file, out.str());
}

void write_scale_factor_report(const std::filesystem::path& file,
                               const ScaleFactorReport& r) {
    const json j{{"exact_rad_per_m_s2", r.exact},
                 {"triangular_origins", r.triangular_origins},
                 {"triangular_midpoints", r.triangular_midpoints},
                 {"trapezoidal", r.trapezoidal},
                 {"dead_time_s", r.dead_time},
                 {"ppm_error_origins", r.ppm_origins},
                 {"ppm_error_midpoints", r.ppm_midpoints},
                 {"ppm_error_trapezoidal", r.ppm_trapezoidal},
                 {"m_s", r.m},
                 {"tau_origin_s", r.tau_origin},
                 {"T_s", r.T},
                 {"k_rad_per_m", r.k}};
    save_text(file, j.dump(2) + "\n");
}

void write_profile_csv(const std::filesystem::path& file, const SensitivityProfile& p,
                       double t0) {
    const std::vector<double> ht = response_shifted(p, t0);
    std::ostringstream out;
    out << "t_s,g,h,h_tilde\n";
    for (std::size_t i = 0; i < p.times.size(); ++i)
        out << format_double(p.times[i]) << ',' << format_double(p.g[i]) << ','
            << format_double(p.h[i]) << ',' << format_double(ht[i]) << '\n';
    save_text(file, out.str());
}

void write_bias_sweep_csv(const std::filesystem::path& file,
                          const std::vector<BiasSweepPoint>& points) {
    std::ostringstream out;
    out << "T_s,bias_ug,scheme,pulse_family\n";
    for (const BiasSweepPoint& p : points)
        out << format_double(p.T) << ',' << format_double(p.bias * 1e6) << ',' << p.scheme
            << ',' << p.family << '\n';
    save_text(file, out.str());
}

void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepCell>& cells) {
    std::ostringstream out;
    out << "duration_tpi,origin_fraction,seed,infidelity,pulse_area_rad,contrast,"
           "tau_origin_s,converged,failed,error\n";
    for (const SweepCell& c : cells) {
        out << format_double(c.duration_tpi) << ',' << format_double(c.origin_fraction) << ','
            << c.seed << ',' << format_double(c.infidelity) << ','
            << format_double(c.pulse_area) << ',' << format_double(c.contrast) << ','
            << format_double(c.tau_origin) << ',' << (c.converged ? 1 : 0) << ','
            << (c.failed ? 1 : 0) << ',' << c.error << '\n';
    }
    save_text(file, out.str());
}

void write_optimization_result(const std::filesystem::path& file,
                               const OptimizationResult& r) {
    json map = json::array();
    for (std::size_t i = 0; i < r.deltas.size(); ++i) {
        for (std::size_t k = 0; k < r.epss.size(); ++k) {
            map.push_back({{"delta_rad_s", r.deltas[i]},
                           {"eps", r.epss[k]},
                           {"fidelity", r.fidelity_map[i * r.epss.size() + k]}});
        }
    }
    const json j{{"waveform", nlohmann::json::parse(waveform_to_json_text(r.waveform))},
                 {"terminal_infidelity", r.terminal_infidelity},
                 {"pulse_area_rad", r.pulse_area},
                 {"iterations_used", r.iterations_used},
                 {"converged", r.converged},
                 {"ensemble", map}};
    save_text(file, j.dump(2) + "\n");
}

}  // namespace pulseorigin::io
