#pragma once

#include <filesystem>
#include <string>

#include "pulseorigin/characterize.hpp"
#include "pulseorigin/doppler.hpp"
#include "pulseorigin/optimize.hpp"
#include "pulseorigin/sensitivity.hpp"
#include "pulseorigin/sequence.hpp"

namespace pulseorigin::io {

/// Waveform files: {"dt_s", "omega0_rad_s", "slices_rad_s": [...], "label"}.
Waveform read_waveform(const std::filesystem::path& file);
void write_waveform(const std::filesystem::path& file, const Waveform& w);
Waveform waveform_from_json_text(const std::string& text);
std::string waveform_to_json_text(const Waveform& w);

/// Sequence description: pulse entries are waveform paths or the presets
/// "rect" (rectangular pi/2; "rect" for pulse 2 is a rectangular pi),
/// "perfect" (pulse 2 only) and "flip-reverse-of-1" (pulse 3 only).
/// Fields: pulse1, pulse2, pulse3, T_s, eps[3], omega0_rad_s?, tau_s?, dist?.
struct SequenceFile {
    SequenceSpec seq;
    MomentumDistribution dist;
    double omega0 = defaults::omega0;
    double tau = defaults::tau_rect;
};
SequenceFile read_sequence(const std::filesystem::path& file);

OptimizationConfig read_optimization_config(const std::filesystem::path& file);
void write_optimization_config(const std::filesystem::path& file,
                               const OptimizationConfig& cfg);

void write_characterization_json(const std::filesystem::path& file,
                                 const PulseCharacterization& c);
void write_characterization_csv(const std::filesystem::path& file,
                                const PulseCharacterization& c);

void write_scale_factor_report(const std::filesystem::path& file, const ScaleFactorReport& r);

/// Columns t_s, g, h, h_tilde (h shifted by h_start before t0).
void write_profile_csv(const std::filesystem::path& file, const SensitivityProfile& p,
                       double t0);

void write_bias_sweep_csv(const std::filesystem::path& file,
                          const std::vector<BiasSweepPoint>& points);

void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepCell>& cells);

void write_optimization_result(const std::filesystem::path& file,
                               const OptimizationResult& r);

/// 17-significant-digit float formatting, '.' decimal point, no locale.
std::string format_double(double v);

}  // namespace pulseorigin::io
