// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ample/dataio.hpp"
#include "ample/error.hpp"
#include "ample/fitting.hpp"
#include "ample/metrics.hpp"
#include "ample/models.hpp"
#include "ample/synth.hpp"
#include "ample/text.hpp"
#include "cli_support.hpp"

namespace {

using namespace ample;
using namespace ample::cli;
using text::format_double;

struct Global {
    std::string out_dir = ".";
    bool verbose = false;
};

void note(const Global& g, const std::string& msg) {
    if (g.verbose) std::cerr << msg << '\n';
}

void add_data_options(CLI::App* cmd, DataOptions& o, bool need_dataset) {
    auto* d = cmd->add_option("--data", o.dataset, "Dataset CSV");
    if (need_dataset) d->required();
    cmd->add_option("--map", o.map, "Region map file");
    cmd->add_option("--tag", o.tag, "Keep only rows with this city tag");
    cmd->add_option("--visibility", o.visibility, "all, los or nlos")
        ->check(CLI::IsMember({"all", "los", "nlos", "LOS", "NLOS"}));
    cmd->add_option("--d0", o.d0, "Close-in distance for line tracing (m)");
    cmd->add_option("--max-pl", o.max_path_loss, "Drop path losses above this (dB)");
    cmd->add_option("--min-dist", o.min_distance, "Drop links shorter than this (m)");
    cmd->add_option("--max-dist", o.max_distance, "Drop links longer than this (m); 0 for no limit");
    cmd->add_option("--bin", o.bin, "Distance bin width (m)");
    cmd->add_option("--freqs", o.freqs, "Frequency whitelist (GHz)")->delimiter(',');
    cmd->add_flag("--average", o.average, "Average path loss per city, distance bin and frequency");
}

std::string describe(const ModelParams& params) {
    std::ostringstream os;
    write_preset(os, Preset{params, "", ""});
    return os.str();
}

double build_d0(const ModelParams& params, const DataOptions& opt) {
    if (const auto* ci = std::get_if<CiParams>(&params)) return ci->d0;
    return opt.d0;
}

// ---------------------------------------------------------------------------

struct FitOptions {
    DataOptions data;
    std::string model;
    std::string preset_out;
    std::string log_out;
    std::string init;
    std::string scenario;
    std::string environment;
    FitConfig cfg;
};

int run_fit(const Global& g, FitOptions& o) {
    const ModelKind kind = parse_model_kind(o.model);
    if (kind == ModelKind::Ample && o.data.map.empty()) throw UsageError("--map is required for the ample model");
    auto prep = prepare(o.data);
    auto build = to_fit_dataset(prep.raw, kind, prep.map ? &*prep.map : nullptr, o.data.d0);
    if (build.data.empty()) throw Error(Errc::EmptyDataset, "no usable points for fitting");
    if (!o.init.empty()) o.cfg.init = load_preset(o.init).params;
    note(g, "fitting " + std::to_string(build.data.size()) + " points");

    const FitResult res = fit(build.data, o.cfg);

    std::ostringstream log;
    log << "model = " << to_string(kind) << '\n'
        << "dataset = " << o.data.dataset << '\n'
        << "points_loaded = " << prep.loaded << '\n'
        << "points_filtered = " << prep.raw.size() << '\n';
    if (prep.report) {
        log << "classified_los = " << prep.report->los << '\n'
            << "classified_nlos = " << prep.report->nlos << '\n'
            << "los_flag_mismatches = " << prep.report->mismatches << '\n';
        for (const auto& w : prep.report->warnings) log << "warning = " << w << '\n';
    }
    log << "skipped_rx_indoor = " << build.skipped_indoor << '\n'
        << "points_fit = " << build.data.size() << '\n'
        << "step_size = " << format_double(o.cfg.step_size) << '\n'
        << "max_iters = " << o.cfg.max_iters << '\n'
        << "grad_tol = " << format_double(o.cfg.grad_tol) << '\n'
        << "sigma_floor = " << format_double(o.cfg.sigma_floor) << '\n'
        << "anchor_interval = " << o.cfg.anchor_interval << '\n';
    log << "[init]\n" << describe(o.cfg.init ? *o.cfg.init : default_init(build.data));
    log << "[trace]\niter nll sigma\n";
    for (const auto& t : res.trace) log << t.iter << ' ' << format_double(t.nll) << ' ' << format_double(t.sigma) << '\n';
    log << "[result]\n"
        << "iters = " << res.iters << '\n'
        << "rejected_steps = " << res.rejected << '\n'
        << "converged = " << (res.converged ? "true" : "false") << '\n'
        << "grad_norm = " << format_double(res.grad_norm) << '\n'
        << "final_nll = " << format_double(res.final_nll) << '\n'
        << "rank_deficient = " << (res.rank_deficient ? "true" : "false") << '\n';
    for (const auto& w : preset_warnings(res.params)) log << "warning = " << w << '\n';
    log << "[params]\n" << describe(res.params);

    const std::string stem(to_string(kind));
    std::ostringstream preset;
    write_preset(preset, Preset{res.params, o.scenario, o.environment});
    write_text(output_path(g.out_dir, o.preset_out, stem + "_preset.txt"), preset.str());
    write_text(output_path(g.out_dir, o.log_out, stem + "_fit.log"), log.str());
    if (res.rank_deficient) std::cerr << "warning: design matrix is rank deficient\n";
    if (!res.converged) {
        std::cerr << "fit did not converge within " << res.iters << " iterations\n";
        return kNotConverged;
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
    DataOptions data;
    std::string preset;
    std::string out;  // predict: csv path; evaluate: report path
    std::optional<double> thr_min;
    std::optional<double> thr_max;
    double thr_step = 1.0;
    std::size_t timing_rounds = 5;
};

struct Predicted {
    Prepared prep;
    Preset preset;
    FitBuild build;
    std::vector<double> pred;
    std::vector<double> ref;
};

Predicted predict_all(const EvalOptions& o) {
    Predicted p{.prep = {}, .preset = load_preset(o.preset), .build = {FitDataset::abg(), {}, 0}, .pred = {}, .ref = {}};
    const ModelKind kind = kind_of(p.preset.params);
    if (kind == ModelKind::Ample && o.data.map.empty()) throw UsageError("--map is required for an ample preset");
    p.prep = prepare(o.data);
    p.build = to_fit_dataset(p.prep.raw, kind, p.prep.map ? &*p.prep.map : nullptr, build_d0(p.preset.params, o.data));
    if (p.build.data.empty()) throw Error(Errc::EmptyDataset, "no usable points to evaluate");
    p.pred = p.build.data.predict(p.preset.params);
    p.ref = p.build.data.path_losses();
    return p;
}

int run_predict(const Global& g, const EvalOptions& o) {
    const auto p = predict_all(o);
    std::ostringstream csv;
    csv << "row,freq_ghz,distance3d_m,predicted_db,measured_db\n";
    for (std::size_t i = 0; i < p.pred.size(); ++i) {
        const auto& sp = p.prep.raw.points[p.build.kept[i]];
        csv << p.build.kept[i] << ',' << format_double(sp.freq_ghz) << ',' << format_double(sp.distance3d) << ','
            << format_double(p.pred[i]) << ',' << format_double(p.ref[i]) << '\n';
    }
    write_text(output_path(g.out_dir, o.out, "predictions.csv"), csv.str());
    note(g, "predicted " + std::to_string(p.pred.size()) + " points");
    return kOk;
}

ThrRange pick_range(const EvalOptions& o, const Predicted& p, std::vector<std::string>& notices) {
    if (o.thr_min || o.thr_max) {
        ThrRange r;
        r.lt_min = o.thr_min.value_or(r.lt_min);
        r.lt_max = o.thr_max.value_or(r.lt_max);
        r.step = o.thr_step;
        r.validate();
        return r;
    }
    std::size_t los = 0;
    std::size_t nlos = 0;
    for (auto i : p.build.kept) {
        const auto& v = p.prep.raw.points[i].los;
        if (v) (*v == Visibility::Los ? los : nlos) += 1;
    }
    ThrRange r = nlos > los ? ThrRange::nlos() : ThrRange::los();
    if (los > 0 && nlos > 0) notices.push_back("mixed visibility; threshold range follows the majority class");
    if (los == 0 && nlos == 0) notices.push_back("no visibility flags; using the line-of-sight threshold range");
    r.step = o.thr_step;
    return r;
}

void write_dist(std::ostream& os, const char* prefix, const DistFit& d) {
    os << prefix << "_family = " << to_string(d.family) << '\n';
    for (int k = 0; k < parameter_count(d.family); ++k) {
        os << prefix << "_param" << k + 1 << " = " << format_double(d.params[k]) << '\n';
    }
    os << prefix << "_aic = " << format_double(d.aic) << '\n';
}

void print_table(std::ostream& os, std::string_view model, const MetricsReport& m, const ThrRange& r, double tp) {
    auto row = [&](std::string_view name, double v, std::string_view unit) {
        os << "  " << std::left << std::setw(8) << name << std::right << std::setw(12) << std::fixed
           << std::setprecision(3) << v;
        if (!unit.empty()) os << "  " << unit;
        os << '\n';
    };
    os << "model " << model << ", " << m.points << " points, thresholds " << r.lt_min << ".." << r.lt_max << " dB\n";
    row("RMSE", m.rmse, "dB");
    row("MAE", m.mae, "dB");
    row("AHRE", m.ahre, "%");
    row("PMDE", m.pmde, "");
    row("t_p", tp, "ns");
    os << "  pred ~ " << to_string(m.pred_dist.family) << ", ref ~ " << to_string(m.ref_dist.family) << '\n';
    os.unsetf(std::ios::floatfield);
}

int run_evaluate(const Global& g, const EvalOptions& o) {
    if (!(o.thr_step > 0.0)) throw UsageError("--thr-step must be positive");
    if (o.thr_min && o.thr_max && !(*o.thr_min <= *o.thr_max)) throw UsageError("--thr-min exceeds --thr-max");
    if (o.timing_rounds == 0) throw UsageError("--timing-rounds must be at least 1");
    const auto p = predict_all(o);
    std::vector<std::string> notices;
    const ThrRange range = pick_range(o, p, notices);
    const MetricsReport m = evaluate_predictions(p.pred, p.ref, range);
    notices.insert(notices.end(), m.notices.begin(), m.notices.end());

    std::ostringstream rep;
    rep << "model = " << to_string(kind_of(p.preset.params)) << '\n'
        << "points = " << m.points << '\n'
        << "rmse_db = " << format_double(m.rmse) << '\n'
        << "mae_db = " << format_double(m.mae) << '\n'
        << "ahre_percent = " << format_double(m.ahre) << '\n'
        << "thr_min_db = " << format_double(range.lt_min) << '\n'
        << "thr_max_db = " << format_double(range.lt_max) << '\n'
        << "thr_step_db = " << format_double(range.step) << '\n'
        << "pmde = " << format_double(m.pmde) << '\n';
    write_dist(rep, "pred_dist", m.pred_dist);
    write_dist(rep, "ref_dist", m.ref_dist);
    for (const auto& n : notices) rep << "notice = " << n << '\n';

    std::ostringstream cdf;
    cdf << "abs_error_db,cdf\n";
    for (const auto& [e, c] : abs_error_cdf(p.pred, p.ref)) cdf << format_double(e) << ',' << format_double(c) << '\n';

    const FitDataset& fd = p.build.data;
    const ModelParams params = p.preset.params;
    const double tp = mean_sim_time(
        [&](std::span<double> out) {
            const auto v = fd.predict(params);
            std::copy(v.begin(), v.end(), out.begin());
        },
        fd.size(), o.timing_rounds);
    std::ostringstream timing;
    timing << "t_p_ns = " << format_double(tp) << '\n' << "rounds = " << o.timing_rounds << '\n';

    write_text(output_path(g.out_dir, o.out, "report.txt"), rep.str());
    write_text(output_path(g.out_dir, "", "abs_error_cdf.csv"), cdf.str());
    write_text(output_path(g.out_dir, "", "timing.txt"), timing.str());
    print_table(std::cout, to_string(kind_of(p.preset.params)), m, range, tp);
    return kOk;
}

// ---------------------------------------------------------------------------

struct SynthOptions {
    std::string recipe;
    std::optional<std::uint64_t> seed;
    std::string dataset_out;
    std::string map_out;
    std::string manifest_out;
};

int run_synth(const Global& g, const SynthOptions& o) {
    std::ifstream in(o.recipe, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open recipe '" + o.recipe + "'");
    const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::istringstream is(body);
    SynthSpec spec = read_synth_recipe(is, o.recipe, std::filesystem::path(o.recipe).parent_path());
    if (o.seed) spec.seed = *o.seed;
    const auto out = generate_dataset(spec);
    const std::uint64_t hash = text::fnv1a64("seed=" + std::to_string(spec.seed), text::fnv1a64(body));

    std::ostringstream ds, mp, mf;
    write_dataset(ds, out.data);
    write_region_map(mp, out.map);
    write_manifest(mf, spec, out, hash);
    write_text(output_path(g.out_dir, o.dataset_out, "dataset.csv"), ds.str());
    write_text(output_path(g.out_dir, o.map_out, "map.txt"), mp.str());
    write_text(output_path(g.out_dir, o.manifest_out, "manifest.txt"), mf.str());
    note(g, "emitted " + std::to_string(out.data.size()) + " points");
    return kOk;
}

// ---------------------------------------------------------------------------

struct HeatOptions {
    std::string preset;
    std::string map;
    std::optional<double> tx_lat;
    std::optional<double> tx_lon;
    double freq = 0.0;
    double resolution = 0.0;  // 0: map cell size
    double tx_height = 30.0;
    double rx_height = 1.5;
    double d0 = kDefaultCloseInDistance;
    std::string reference;
    std::string out;
    std::string error_out;
};

GeoPoint tx_of(const RegionMap& map, std::optional<double> lat, std::optional<double> lon) {
    if (lat.has_value() != lon.has_value()) throw UsageError("--tx-lat and --tx-lon go together");
    if (lat) return {*lat, *lon};
    return map.to_geo({map.extent_x() / 2.0, map.extent_y() / 2.0});
}

// Prediction for one link, or nullopt for links the model does not cover.
std::optional<double> link_prediction(const ModelParams& params, const RegionMap& map, PlanarPoint tx, PlanarPoint rx,
                                      double d3, double freq, double d0) {
    const double ground = std::hypot(rx.x - tx.x, rx.y - tx.y);
    const double ref_d = std::holds_alternative<CiParams>(params) ? std::get<CiParams>(params).d0 : d0;
    if (!(ground > ref_d)) return std::nullopt;
    const LineMatrix line = trace_line(map, tx, rx, d0);
    if (line.rx_indoor) return std::nullopt;
    return std::visit(
        [&](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AmpleParams>) {
                return predict_ample(p, line, freq);
            } else if constexpr (std::is_same_v<T, CiParams>) {
                return predict_ci(p, freq, d3);
            } else {
                return predict_abg(p, freq, d3);
            }
        },
        params);
}

int run_heatmap(const Global& g, const HeatOptions& o) {
    if (!(o.freq > 0.0)) throw UsageError("--freq must be positive");
    const Preset preset = load_preset(o.preset);
    const RegionMap map = load_region_map(o.map);
    const PlanarPoint tx = map.to_planar(tx_of(map, o.tx_lat, o.tx_lon));
    const double res = o.resolution > 0.0 ? o.resolution : map.cell_size();
    const double dh = o.tx_height - o.rx_height;

    ValueGrid grid;
    grid.width = static_cast<int>(std::floor(map.extent_x() / res + 1e-9));
    grid.height = static_cast<int>(std::floor(map.extent_y() / res + 1e-9));
    if (grid.width <= 0 || grid.height <= 0) throw UsageError("--resolution exceeds the map extent");
    grid.cell_size = res;
    grid.origin = map.origin();
    grid.values.assign(static_cast<std::size_t>(grid.width) * grid.height, grid.nodata);
    for (int iy = 0; iy < grid.height; ++iy) {
        for (int ix = 0; ix < grid.width; ++ix) {
            const PlanarPoint rx{(ix + 0.5) * res, (iy + 0.5) * res};
            const double d3 = std::hypot(std::hypot(rx.x - tx.x, rx.y - tx.y), dh);
            if (auto v = link_prediction(preset.params, map, tx, rx, d3, o.freq, o.d0)) grid.at(ix, iy) = *v;
        }
    }
    std::ostringstream heat;
    write_value_grid(heat, grid, "dB");
    write_text(output_path(g.out_dir, o.out, "heatmap.txt"), heat.str());

    if (!o.reference.empty()) {
        const RawDataset ref = load_dataset(o.reference);
        ValueGrid err = grid;
        std::vector<double> sum(err.values.size(), 0.0);
        std::vector<std::size_t> count(err.values.size(), 0);
        for (const auto& p : ref.points) {
            if (std::fabs(p.freq_ghz - o.freq) > 1e-9 * std::max(1.0, o.freq)) continue;
            const PlanarPoint prx = map.to_planar(p.rx);
            const PlanarPoint ptx = map.to_planar(p.tx);
            const auto v = link_prediction(preset.params, map, ptx, prx, p.distance3d, p.freq_ghz, o.d0);
            if (!v) continue;
            const int ix = std::min(static_cast<int>(prx.x / res), err.width - 1);
            const int iy = std::min(static_cast<int>(prx.y / res), err.height - 1);
            const auto k = static_cast<std::size_t>(err.height - 1 - iy) * err.width + ix;
            sum[k] += std::fabs(*v - p.path_loss);
            ++count[k];
        }
        for (std::size_t k = 0; k < sum.size(); ++k) {
            err.values[k] = count[k] ? sum[k] / static_cast<double>(count[k]) : err.nodata;
        }
        std::ostringstream eo;
        write_value_grid(eo, err, "dB");
        write_text(output_path(g.out_dir, o.error_out, "error.txt"), eo.str());
    }
    return kOk;
}

// ---------------------------------------------------------------------------

struct TraceOptions {
    std::string map;
    double tx_lat = 0, tx_lon = 0, rx_lat = 0, rx_lon = 0;
    double d0 = kDefaultCloseInDistance;
    std::string out;
};

int run_trace(const Global&, const TraceOptions& o) {
    const RegionMap map = load_region_map(o.map);
    const GeoPoint tx{o.tx_lat, o.tx_lon};
    const GeoPoint rx{o.rx_lat, o.rx_lon};
    const LineMatrix line = trace_line(map, tx, rx, o.d0);
    std::ostringstream os;
    os << "region,length_m\n";
    for (const auto& s : line.segments) os << int(s.region) << ',' << format_double(s.length) << '\n';
    os << "penetrations = " << line.penetrations << '\n'
       << "total_length_m = " << format_double(line.total_length) << '\n'
       << "rx_indoor = " << (line.rx_indoor ? "true" : "false") << '\n'
       << "visibility = " << (classify_los(map, tx, rx) == Visibility::Los ? "LOS" : "NLOS") << '\n';
    if (o.out.empty()) {
        std::cout << os.str();
    } else {
        write_text(o.out, os.str());
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AMPLE path loss toolkit"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    Global g;
    std::string config_unused;
    app.add_option("--config", config_unused, "key = value file; its entries override command-line flags");
    app.add_option("-o,--out-dir", g.out_dir, "Directory for default output names");
    app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");

    FitOptions fit_o;
    auto* fit_cmd = app.add_subcommand("fit", "Extract model parameters from a dataset");
    fit_cmd->add_option("--model", fit_o.model, "ample, ci or abg")->required()->check(CLI::IsMember({"ample", "ci", "abg"}));
    add_data_options(fit_cmd, fit_o.data, true);
    fit_cmd->add_option("--preset-out", fit_o.preset_out, "Output preset path");
    fit_cmd->add_option("--log-out", fit_o.log_out, "Output run log path");
    fit_cmd->add_option("--init", fit_o.init, "Starting preset");
    fit_cmd->add_option("--scenario", fit_o.scenario, "Scenario label stored in the preset");
    fit_cmd->add_option("--environment", fit_o.environment, "Environment label stored in the preset");
    fit_cmd->add_option("--step-size", fit_o.cfg.step_size, "Gradient step");
    fit_cmd->add_option("--max-iters", fit_o.cfg.max_iters, "Iteration cap");
    fit_cmd->add_option("--grad-tol", fit_o.cfg.grad_tol, "Gradient infinity-norm tolerance");
    fit_cmd->add_option("--sigma-floor", fit_o.cfg.sigma_floor, "Lower bound on sigma");
    fit_cmd->add_option("--anchor-interval", fit_o.cfg.anchor_interval, "Iterations between exact re-evaluations");
    fit_cmd->add_option("--seed", "Accepted for uniformity; fitting is deterministic");

    EvalOptions pred_o;
    auto* pred_cmd = app.add_subcommand("predict", "Predict path loss for every dataset row");
    pred_cmd->add_option("--preset", pred_o.preset, "Model preset")->required();
    add_data_options(pred_cmd, pred_o.data, true);
    pred_cmd->add_option("--out", pred_o.out, "Output CSV path");
    pred_cmd->add_option("--seed", "Accepted for uniformity; prediction is deterministic");

    EvalOptions eval_o;
    auto* eval_cmd = app.add_subcommand("evaluate", "Metric report for a preset against a dataset");
    eval_cmd->add_option("--preset", eval_o.preset, "Model preset")->required();
    add_data_options(eval_cmd, eval_o.data, true);
    eval_cmd->add_option("--out", eval_o.out, "Report path");
    eval_cmd->add_option("--thr-min", eval_o.thr_min, "Lowest threshold (dB)");
    eval_cmd->add_option("--thr-max", eval_o.thr_max, "Highest threshold (dB)");
    eval_cmd->add_option("--thr-step", eval_o.thr_step, "Threshold step (dB)");
    eval_cmd->add_option("--timing-rounds", eval_o.timing_rounds, "Full passes for the timing figure")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--seed", "Accepted for uniformity; evaluation is deterministic");

    SynthOptions synth_o;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a map and dataset from a recipe");
    synth_cmd->add_option("--recipe", synth_o.recipe, "Recipe file")->required();
    synth_cmd->add_option("--seed", synth_o.seed, "Overrides the recipe seed");
    synth_cmd->add_option("--dataset-out", synth_o.dataset_out, "Dataset path");
    synth_cmd->add_option("--map-out", synth_o.map_out, "Map path");
    synth_cmd->add_option("--manifest-out", synth_o.manifest_out, "Manifest path");

    HeatOptions heat_o;
    auto* heat_cmd = app.add_subcommand("heatmap", "Prediction grid and optional absolute error grid");
    heat_cmd->add_option("--preset", heat_o.preset, "Model preset")->required();
    heat_cmd->add_option("--map", heat_o.map, "Region map")->required();
    heat_cmd->add_option("--freq", heat_o.freq, "Frequency (GHz)")->required();
    heat_cmd->add_option("--tx-lat", heat_o.tx_lat, "Transmitter latitude; default map centre");
    heat_cmd->add_option("--tx-lon", heat_o.tx_lon, "Transmitter longitude");
    heat_cmd->add_option("--resolution", heat_o.resolution, "Grid spacing (m); default map cell size");
    heat_cmd->add_option("--tx-height", heat_o.tx_height, "Transmitter height (m)");
    heat_cmd->add_option("--rx-height", heat_o.rx_height, "Receiver height (m)");
    heat_cmd->add_option("--d0", heat_o.d0, "Close-in distance (m)");
    heat_cmd->add_option("--reference", heat_o.reference, "Dataset for the error grid");
    heat_cmd->add_option("--out", heat_o.out, "Prediction grid path");
    heat_cmd->add_option("--error-out", heat_o.error_out, "Error grid path");
    heat_cmd->add_option("--seed", "Accepted for uniformity; heatmaps are deterministic");

    TraceOptions trace_o;
    auto* trace_cmd = app.add_subcommand("trace", "Line matrix of one link");
    trace_cmd->add_option("--map", trace_o.map, "Region map")->required();
    trace_cmd->add_option("--tx-lat", trace_o.tx_lat)->required();
    trace_cmd->add_option("--tx-lon", trace_o.tx_lon)->required();
    trace_cmd->add_option("--rx-lat", trace_o.rx_lat)->required();
    trace_cmd->add_option("--rx-lon", trace_o.rx_lon)->required();
    trace_cmd->add_option("--d0", trace_o.d0, "Close-in distance (m)");
    trace_cmd->add_option("--out", trace_o.out, "Output path; stdout when empty");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        auto args = expand_config(argc, argv);
        std::vector<const char*> cargs;
        for (const auto& a : args) cargs.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(cargs.size()), cargs.data());
        } catch (const CLI::ParseError& e) {
            const int rc = app.exit(e);
            return rc == 0 ? kOk : kUsage;
        }
        if (fit_cmd->parsed()) return run_fit(g, fit_o);
        if (pred_cmd->parsed()) return run_predict(g, pred_o);
        if (eval_cmd->parsed()) return run_evaluate(g, eval_o);
        if (synth_cmd->parsed()) return run_synth(g, synth_o);
        if (heat_cmd->parsed()) return run_heatmap(g, heat_o);
        if (trace_cmd->parsed()) return run_trace(g, trace_o);
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == Errc::Diverged ? kNotConverged : kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
}
