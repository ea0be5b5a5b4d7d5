// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/models.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "ample/error.hpp"
#include "ample/text.hpp"

namespace ample {

ModelKind kind_of(const ModelParams& params) noexcept { return static_cast<ModelKind>(params.index()); }

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Ample: return "ample";
        case ModelKind::Ci: return "ci";
        case ModelKind::Abg: return "abg";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "ample") return ModelKind::Ample;
    if (name == "ci") return ModelKind::Ci;
    if (name == "abg") return ModelKind::Abg;
    throw Error(Errc::InvalidArgument, "unknown model '" + std::string(name) + "' (expected ample, ci or abg)");
}

double sigma_of(const ModelParams& params) noexcept {
    return std::visit([](const auto& p) { return p.sigma; }, params);
}

double fspl(double freq_ghz, double d0_m) {
    if (!(freq_ghz > 0.0) || !(d0_m > 0.0)) {
        throw Error(Errc::InvalidArgument, "free-space loss needs positive frequency and distance");
    }
    return 20.0 * std::log10(4.0 * std::numbers::pi * freq_ghz * 1e9 * d0_m / kSpeedOfLight);
}

std::vector<double> collapse_line(const LineMatrix& line, int region_count) {
    if (line.segments.empty() || line.segments.front().region != kCloseInRegion ||
        !(line.segments.front().length > 0.0)) {
        throw Error(Errc::InvalidLine, "line must start with a positive close-in segment");
    }
    std::vector<double> weights(static_cast<std::size_t>(region_count), 0.0);
    double cumulative = line.segments.front().length;
    for (std::size_t r = 1; r < line.segments.size(); ++r) {
        const auto& seg = line.segments[r];
        if (seg.region == kCloseInRegion || !(seg.length > 0.0)) {
            throw Error(Errc::InvalidLine, "segment " + std::to_string(r) + " is not a positive region segment");
        }
        if (seg.region > region_count) {
            throw Error(Errc::RegionCountMismatch, "line references region " + std::to_string(seg.region) +
                                                       " but the model has " + std::to_string(region_count));
        }
        const double previous = cumulative;
        cumulative += seg.length;
        weights[seg.region - 1] += 10.0 * std::log10(cumulative / previous);
    }
    return weights;
}

double predict_ample(const AmpleParams& params, std::span<const double> weights, double penetrations,
                     double freq_ghz) {
    if (weights.size() != params.n.size()) {
        throw Error(Errc::RegionCountMismatch, "weight count " + std::to_string(weights.size()) +
                                                   " does not match " + std::to_string(params.n.size()) + " exponents");
    }
    if (!(freq_ghz > 0.0)) throw Error(Errc::InvalidArgument, "frequency must be positive");
    double pl = params.A;
    for (std::size_t m = 0; m < weights.size(); ++m) pl += weights[m] * params.n[m];
    pl += penetrations * params.X;
    pl += 10.0 * params.gamma * std::log10(freq_ghz);
    return pl;
}

double predict_ample(const AmpleParams& params, const LineMatrix& line, double freq_ghz) {
    const auto weights = collapse_line(line, params.region_count());
    return predict_ample(params, weights, line.penetrations, freq_ghz);
}

double predict_ci(const CiParams& params, double freq_ghz, double distance_m) {
    if (distance_m < params.d0) {
        throw Error(Errc::DistanceBelowReference, "distance " + text::format_double(distance_m) +
                                                      " m is below the reference distance");
    }
    return fspl(freq_ghz, params.d0) + 10.0 * params.n * std::log10(distance_m / params.d0);
}

double predict_abg(const AbgParams& params, double freq_ghz, double distance_m) {
    if (!(distance_m > 0.0) || !(freq_ghz > 0.0)) {
        throw Error(Errc::InvalidArgument, "ABG needs positive distance and frequency");
    }
    return 10.0 * params.alpha * std::log10(distance_m) + params.beta + 10.0 * params.gamma_abg * std::log10(freq_ghz);
}

double sample_shadowing(double sigma, Rng& rng) {
    if (!(sigma >= 0.0)) throw Error(Errc::InvalidArgument, "shadowing sigma must be non-negative");
    if (sigma == 0.0) return 0.0;
    std::normal_distribution<double> normal(0.0, sigma);
    return normal(rng);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Scenario s) noexcept { return s == Scenario::UMa ? "UMa" : "UMi"; }
std::string_view to_string(Environment e) noexcept { return e == Environment::Los ? "LOS" : "NLOS"; }

Scenario parse_scenario(std::string_view name) {
    if (name == "UMa" || name == "uma") return Scenario::UMa;
    if (name == "UMi" || name == "umi") return Scenario::UMi;
    throw Error(Errc::InvalidArgument, "unknown scenario '" + std::string(name) + "' (expected UMa or UMi)");
}

Environment parse_environment(std::string_view name) {
    if (name == "LOS" || name == "los") return Environment::Los;
    if (name == "NLOS" || name == "nlos") return Environment::Nlos;
    throw Error(Errc::InvalidArgument, "unknown environment '" + std::string(name) + "' (expected LOS or NLOS)");
}

AmpleParams ample_table_preset(Scenario scenario, Environment environment) {
    if (scenario == Scenario::UMa) {
        if (environment == Environment::Los) return {59.86, {1.35, 1.14, 2.59, 1.79}, 0.09, 0.92, 5.40};
        return {59.79, {1.80, 1.64, 2.71, 1.93}, 0.28, 1.94, 9.53};
    }
    if (environment == Environment::Los) return {55.19, {1.59, 1.46, 2.70, 1.80}, 0.18, 1.97, 8.01};
    return {55.20, {1.78, 1.89, 2.70, 1.80}, 0.17, 1.98, 8.00};
}

std::optional<CiParams> ci_table_preset(Scenario scenario, Environment environment) {
    if (scenario == Scenario::UMa) {
        if (environment == Environment::Los) return CiParams{2.26, 5.06, 1.0};
        return CiParams{2.92, 10.08, 1.0};
    }
    if (environment == Environment::Nlos) return CiParams{2.62, 10.31, 1.0};
    return std::nullopt;
}

Preset read_preset(std::istream& in, std::string_view source) {
    auto kv = text::KeyValues::parse(in, source);
    Preset preset;
    const ModelKind kind = parse_model_kind(kv.take_required("model"));
    preset.scenario = kv.take("scenario").value_or("");
    preset.environment = kv.take("environment").value_or("");
    switch (kind) {
        case ModelKind::Ample: {
            AmpleParams p;
            p.A = kv.take_double_required("A");
            for (int m = 1; m <= kMaxRegionCount; ++m) {
                auto v = kv.take_double("n" + std::to_string(m));
                if (!v) break;
                p.n.push_back(*v);
            }
            if (p.n.empty()) throw Error(Errc::SchemaError, std::string(source) + ": AMPLE preset needs n1..nM");
            p.X = kv.take_double_required("X");
            p.gamma = kv.take_double_required("gamma");
            p.sigma = kv.take_double_required("sigma");
            preset.params = std::move(p);
            break;
        }
        case ModelKind::Ci: {
            CiParams p;
            p.n = kv.take_double_required("n");
            p.sigma = kv.take_double_required("sigma");
            p.d0 = kv.take_double("d0").value_or(1.0);
            if (!(p.d0 > 0.0)) throw Error(Errc::SchemaError, std::string(source) + ": d0 must be positive");
            preset.params = p;
            break;
        }
        case ModelKind::Abg: {
            AbgParams p;
            p.alpha = kv.take_double_required("alpha");
            p.beta = kv.take_double_required("beta");
            p.gamma_abg = kv.take_double_required("gamma_abg");
            p.sigma = kv.take_double_required("sigma");
            preset.params = p;
            break;
        }
    }
    kv.reject_unknown();
    if (!(sigma_of(preset.params) >= 0.0)) {
        throw Error(Errc::SchemaError, std::string(source) + ": sigma must be non-negative");
    }
    return preset;
}

Preset load_preset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open preset '" + path.string() + "'");
    return read_preset(in, path.string());
}

void write_preset(std::ostream& out, const Preset& preset) {
    const auto num = [](double v) { return text::format_double(v); };
    out << "model = " << to_string(kind_of(preset.params)) << '\n';
    if (!preset.scenario.empty()) out << "scenario = " << preset.scenario << '\n';
    if (!preset.environment.empty()) out << "environment = " << preset.environment << '\n';
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AmpleParams>) {
                out << "A = " << num(p.A) << '\n';
                for (std::size_t m = 0; m < p.n.size(); ++m) out << 'n' << (m + 1) << " = " << num(p.n[m]) << '\n';
                out << "X = " << num(p.X) << '\n' << "gamma = " << num(p.gamma) << '\n';
            } else if constexpr (std::is_same_v<T, CiParams>) {
                out << "n = " << num(p.n) << '\n' << "d0 = " << num(p.d0) << '\n';
            } else {
                out << "alpha = " << num(p.alpha) << '\n'
                    << "beta = " << num(p.beta) << '\n'
                    << "gamma_abg = " << num(p.gamma_abg) << '\n';
            }
            out << "sigma = " << num(p.sigma) << '\n';
        },
        preset.params);
}

void save_preset(const std::filesystem::path& path, const Preset& preset) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write preset '" + path.string() + "'");
    write_preset(out, preset);
}

std::vector<std::string> preset_warnings(const ModelParams& params) {
    std::vector<std::string> warnings;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AmpleParams>) {
                for (std::size_t m = 0; m < p.n.size(); ++m) {
                    if (p.n[m] < 0.0) warnings.push_back("n" + std::to_string(m + 1) + " is negative");
                }
                if (p.X < 0.0) warnings.push_back("penetration loss X is negative");
            } else if constexpr (std::is_same_v<T, CiParams>) {
                if (p.n < 0.0) warnings.push_back("path loss exponent n is negative");
            } else {
                if (p.alpha < 0.0) warnings.push_back("alpha is negative");
            }
        },
        params);
    return warnings;
}

}  // namespace ample
