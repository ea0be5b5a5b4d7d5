// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ample/line_matrix.hpp"
#include "ample/rng.hpp"

namespace ample {

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Region-aware model: intercept, one exponent per region type, per-face
/// penetration loss and a log-frequency coefficient. Frequencies in GHz.
struct AmpleParams {
    double A = 0.0;
    std::vector<double> n;  // n[m-1] is the exponent of region code m
    double X = 0.0;
    double gamma = 0.0;
    double sigma = 0.0;

    int region_count() const noexcept { return static_cast<int>(n.size()); }
    bool operator==(const AmpleParams&) const = default;
};

/// Close-in free-space reference model.
struct CiParams {
    double n = 2.0;
    double sigma = 0.0;
    double d0 = 1.0;

    bool operator==(const CiParams&) const = default;
};

/// Alpha-beta-gamma floating-intercept model.
struct AbgParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma_abg = 0.0;
    double sigma = 0.0;

    bool operator==(const AbgParams&) const = default;
};

using ModelParams = std::variant<AmpleParams, CiParams, AbgParams>;

enum class ModelKind { Ample, Ci, Abg };

ModelKind kind_of(const ModelParams& params) noexcept;
std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);
double sigma_of(const ModelParams& params) noexcept;

/// Free-space loss in dB at `d0_m` meters for a carrier in GHz.
double fspl(double freq_ghz, double d0_m);

/// Per-region weights D_m: each segment r adds 10*log10(cum_r / cum_{r-1})
/// to its region, with the cumulative length starting at the close-in
/// distance. Returns one entry per region code 1..region_count.
std::vector<double> collapse_line(const LineMatrix& line, int region_count);

double predict_ample(const AmpleParams& params, const LineMatrix& line, double freq_ghz);
double predict_ample(const AmpleParams& params, std::span<const double> weights, double penetrations,
                     double freq_ghz);
double predict_ci(const CiParams& params, double freq_ghz, double distance_m);
double predict_abg(const AbgParams& params, double freq_ghz, double distance_m);

/// One N(0, sigma^2) draw in dB; sigma == 0 yields exactly 0.
double sample_shadowing(double sigma, Rng& rng);

// ---------------------------------------------------------------------------
// Parameter presets

enum class Scenario { UMa, UMi };
enum class Environment { Los, Nlos };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(Environment e) noexcept;
Scenario parse_scenario(std::string_view name);
Environment parse_environment(std::string_view name);

/// Published AMPLE parameters for 0.85-5 GHz (buildings, open space,
/// foliage, water).
AmpleParams ample_table_preset(Scenario scenario, Environment environment);

/// Published CI fits to ray-traced 2.1 GHz data; UMi LOS has no entry.
std::optional<CiParams> ci_table_preset(Scenario scenario, Environment environment);

/// A parameter set plus the labels carried in a preset file.
struct Preset {
    ModelParams params;
    std::string scenario;
    std::string environment;
};

Preset read_preset(std::istream& in, std::string_view source);
Preset load_preset(const std::filesystem::path& path);
void write_preset(std::ostream& out, const Preset& preset);
void save_preset(const std::filesystem::path& path, const Preset& preset);

/// Human-readable notes for values that are legal but physically odd.
std::vector<std::string> preset_warnings(const ModelParams& params);

}  // namespace ample
