#include "cavity_cs/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cavity_cs/csv.hpp"
#include "cavity_cs/svg.hpp"

namespace cavity_cs {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const FullConfig& cfg,
                    json extra = json::object()) {
    json m{{"command", command}, {"config", config_to_json(cfg)}};
    for (auto& [k, v] : extra.items()) m[k] = v;
    io::atomic_write(dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<double> times(const ComplexSeries& s) {
    std::vector<double> t(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        t[i] = s.grid.time_at(static_cast<int>(i) + 1);
    return t;
}

std::vector<double> channel(const ComplexSeries& s, bool imag) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        v[i] = imag ? s.values[i].imag() : s.values[i].real();
    return v;
}

svg::LinePlot drive_panel(const FullConfig& cfg) {
    const TimeGrid& grid = cfg.experiment.grid;
    svg::Curve f;
    f.label = "f(t)";
    f.color = "#1a6faa";
    // a few samples per step so square edges stay visible
    const int per_step = 2;
    for (int i = 0; i <= grid.steps * per_step; ++i) {
        const double t = grid.t0 + (grid.t_end - grid.t0) * i / (grid.steps * per_step);
        f.x.push_back(t);
        f.y.push_back(eval_drive(cfg.experiment.protocol, std::min(t, grid.t_end)));
    }
    svg::LinePlot p;
    p.title = "driving field";
    p.x_label = "t (1/omega0)";
    p.y_label = "f (omega0)";
    p.curves.push_back(std::move(f));
    return p;
}

svg::LinePlot alpha_panel(const std::string& title, const ComplexSeries& original,
                          const ComplexSeries* recovered, bool imag) {
    svg::LinePlot p;
    p.title = title;
    p.x_label = "t (1/omega0)";
    p.y_label = imag ? "Im alpha" : "Re alpha";
    svg::Curve orig;
    orig.label = "original";
    orig.color = "#2255cc";
    orig.dashed = true;
    orig.x = times(original);
    orig.y = channel(original, imag);
    p.curves.push_back(std::move(orig));
    if (recovered != nullptr) {
        svg::Curve rec;
        rec.label = "recovered";
        rec.color = "#cc2222";
        rec.x = times(*recovered);
        rec.y = channel(*recovered, imag);
        p.curves.push_back(std::move(rec));
    }
    return p;
}

struct PipelineData {
    ComplexSeries beta;
    ComplexSeries alpha;
    SensingMatrix matrix;
    MeasurementVector measured;
};

PipelineData run_pipeline_front(const FullConfig& cfg) {
    const ExperimentConfig& e = cfg.experiment;
    PipelineData d;
    d.beta = discretize_beta(e.protocol, e.detuning, e.grid, e.noise);
    d.alpha = accumulate_alpha(d.beta);
    d.matrix = build_matrix(matrix_seed(e.seed), e.measurements, e.flips, e.grid.steps);
    d.measured = measure(d.matrix, d.beta);
    return d;
}

}  // namespace

void emit_simulate(const FullConfig& cfg, const fs::path& dir) {
    ensure_dir(dir);
    const ExperimentConfig& e = cfg.experiment;
    const ComplexSeries beta = discretize_beta(e.protocol, e.detuning, e.grid, e.noise);
    const ComplexSeries alpha = accumulate_alpha(beta);
    io::atomic_write(dir / "drive.csv", io::drive_csv(e.protocol, e.grid));
    io::save_series(dir / "beta.csv", beta);
    io::save_series(dir / "alpha.csv", alpha);
    io::atomic_write(dir / "drive.svg", svg::render_line_plot(drive_panel(cfg)));
    io::atomic_write(dir / "alpha.svg",
                     svg::render_panels({alpha_panel("coherent amplitude", alpha, nullptr, false),
                                         alpha_panel("coherent amplitude", alpha, nullptr, true)}));
    write_manifest(dir, "simulate", cfg);
}

void emit_measure(const FullConfig& cfg, const fs::path& dir) {
    ensure_dir(dir);
    const PipelineData d = run_pipeline_front(cfg);
    io::atomic_write(dir / "drive.csv", io::drive_csv(cfg.experiment.protocol, cfg.experiment.grid));
    io::save_series(dir / "beta.csv", d.beta);
    io::save_matrix(dir / "matrix.csv", dir / "schedules.csv", d.matrix);
    io::save_measurements(dir / "measurements.csv", d.measured);
    write_manifest(dir, "measure", cfg);
}

void emit_recover(const FullConfig& cfg, const fs::path& dir, const RecoverInputs& inputs) {
    ensure_dir(dir);
    const ExperimentConfig& e = cfg.experiment;
    if (inputs.matrix.has_value() != inputs.schedules.has_value())
        throw ConfigError("recover: matrix and schedules files must be given together");
    if (inputs.measurements && !inputs.matrix)
        throw ConfigError("recover: a measurements file requires --matrix and --schedules");

    if (inputs.matrix) {
        // file-driven: recover from externally supplied measurements
        const SensingMatrix matrix = io::load_matrix(*inputs.matrix, *inputs.schedules);
        MeasurementVector measured;
        if (inputs.measurements) {
            measured = io::load_measurements(*inputs.measurements);
        } else {
            throw ConfigError("recover: measurements file required with an external matrix");
        }
        if (measured.values.size() != matrix.rows())
            throw std::runtime_error("recover: measurement count does not match matrix rows");
        if (matrix.cols() != e.grid.steps)
            throw std::runtime_error(
                "recover: matrix has " + std::to_string(matrix.cols()) +
                " columns but the config grid has " + std::to_string(e.grid.steps) + " steps");
        const DctBasis basis = dct_matrix(static_cast<int>(matrix.cols()));
        RecoveryConfig rc;
        const ComplexSeries beta_clean = discretize_beta(e.protocol, e.detuning, e.grid, {});
        const ResolvedRecovery resolved = resolve_recovery(e, beta_clean, basis);
        rc.max_support = resolved.max_support;
        rc.normalize_columns = resolved.normalize_columns;
        rc.residual_tol = std::max(resolved.residual_tol_re, resolved.residual_tol_im);
        if (!e.recovery.residual_tol && !e.noise.enabled)
            rc.residual_tol = 1e-6 * measured.values.norm();
        const RecoveryResult r = recover_beta(matrix, measured, basis, rc);
        io::atomic_write(dir / "recovery.csv", io::recovery_csv(r.beta, r.alpha));
        std::ostringstream diag;
        diag << "support_size_re = " << r.support_re.size() << '\n'
             << "support_size_im = " << r.support_im.size() << '\n'
             << "residual_re = " << io::format_double(r.residual_re) << '\n'
             << "residual_im = " << io::format_double(r.residual_im) << '\n'
             << "rank_deficient = " << (r.rank_deficient ? "true" : "false") << '\n';
        io::atomic_write(dir / "diagnostics.txt", diag.str());
        io::atomic_write(dir / "recovery.svg",
                         svg::render_panels({alpha_panel("recovered amplitude", r.alpha, nullptr, false),
                                             alpha_panel("recovered amplitude", r.alpha, nullptr, true)}));
        write_manifest(dir, "recover", cfg,
                       json{{"inputs",
                             {{"matrix", inputs.matrix->string()},
                              {"schedules", inputs.schedules->string()},
                              {"measurements", inputs.measurements->string()}}}});
        return;
    }

    const ExperimentResult r = run_recovery_experiment(e);
    io::atomic_write(dir / "recovery.csv", io::recovery_csv(r.beta_recovered, r.alpha_recovered));
    io::atomic_write(dir / "diagnostics.txt", io::recovery_diagnostics(r));
    io::atomic_write(dir / "recovery.svg",
                     svg::render_panels(
                         {alpha_panel("Re alpha: original vs recovered", r.alpha, &r.alpha_recovered, false),
                          alpha_panel("Im alpha: original vs recovered", r.alpha, &r.alpha_recovered, true)}));
    write_manifest(dir, "recover", cfg);
}

ExperimentResult emit_figure2(const FullConfig& cfg, const fs::path& dir) {
    ensure_dir(dir);
    const ExperimentConfig& e = cfg.experiment;
    const ExperimentResult r = run_recovery_experiment(e);
    io::atomic_write(dir / "drive.csv", io::drive_csv(e.protocol, e.grid));
    io::save_series(dir / "alpha.csv", r.alpha);
    io::save_series(dir / "alpha_recovered.csv", r.alpha_recovered);
    io::atomic_write(dir / "recovery.csv", io::recovery_csv(r.beta_recovered, r.alpha_recovered));
    io::atomic_write(dir / "diagnostics.txt", io::recovery_diagnostics(r));
    io::atomic_write(
        dir / "figure2.svg",
        svg::render_panels({drive_panel(cfg),
                            alpha_panel("Re alpha: original vs recovered", r.alpha,
                                        &r.alpha_recovered, false),
                            alpha_panel("Im alpha: original vs recovered", r.alpha,
                                        &r.alpha_recovered, true)}));
    write_manifest(dir, "figure2", cfg,
                   json{{"mse",
                         {{"alpha_re", r.mse_alpha_re},
                          {"alpha_im", r.mse_alpha_im},
                          {"beta_re", r.mse_beta_re},
                          {"beta_im", r.mse_beta_im},
                          {"alpha_re_measured", r.mse_alpha_re_measured},
                          {"alpha_im_measured", r.mse_alpha_im_measured},
                          {"max_alpha_sq", r.max_alpha_sq}}}});
    return r;
}

SweepReport emit_sweep(const FullConfig& cfg, const fs::path& dir) {
    ensure_dir(dir);
    const SweepReport report =
        success_sweep(cfg.experiment, cfg.sweep_measurements, cfg.sweep_flips);
    io::atomic_write(dir / "sweep.csv", io::sweep_csv(report));

    svg::HeatMap map;
    map.title = "success probability";
    map.x_label = "flips per measurement K";
    map.y_label = "measurements M";
    map.x_values = cfg.sweep_flips;
    map.y_values = cfg.sweep_measurements;
    map.cells.assign(cfg.sweep_measurements.size(),
                     std::vector<double>(cfg.sweep_flips.size(), 0.0));
    for (const SweepCell& c : report.cells) {
        const auto yi = static_cast<std::size_t>(
            std::find(cfg.sweep_measurements.begin(), cfg.sweep_measurements.end(),
                      c.measurements) -
            cfg.sweep_measurements.begin());
        const auto xi = static_cast<std::size_t>(
            std::find(cfg.sweep_flips.begin(), cfg.sweep_flips.end(), c.flips) -
            cfg.sweep_flips.begin());
        map.cells[yi][xi] = c.probability;
    }
    io::atomic_write(dir / "sweep.svg", svg::render_heat_map(map));

    json cells = json::array();
    for (const SweepCell& c : report.cells) {
        cells.push_back({{"M", c.measurements},
                         {"K", c.flips},
                         {"trials", c.trials},
                         {"successes", c.successes},
                         {"probability", c.probability},
                         {"mean_mse", c.mean_summed_mse},
                         {"max_mse", c.max_summed_mse},
                         {"cell_seed", c.cell_seed}});
    }
    write_manifest(dir, "sweep", cfg,
                   json{{"cells", cells},
                        {"success_threshold", report.success_threshold},
                        {"noise_enabled", report.noise_enabled}});
    return report;
}

std::string info_text(const FullConfig& cfg) {
    const ExperimentConfig& e = cfg.experiment;
    const DctBasis basis = dct_matrix(e.grid.steps);
    NoiseSpec off;
    const ComplexSeries beta_clean = discretize_beta(e.protocol, e.detuning, e.grid, off);
    const int s_est = sparsity_estimate(beta_clean, basis);
    const ResolvedRecovery resolved = resolve_recovery(e, beta_clean, basis);

    std::ostringstream out;
    out << "grid: N=" << e.grid.steps << " steps of tau=" << e.grid.tau() << " over ["
        << e.grid.t0 << ", " << e.grid.t_end << "], " << e.grid.substeps
        << " quadrature substeps\n";
    out << "detuning: " << e.detuning << " omega0\n";
    out << "noise: " << (e.noise.enabled ? "on" : "off") << ", strength " << e.noise.strength
        << ", seed " << e.noise.seed << "\n";
    out << "measurements M=" << e.measurements << ", flips K=" << e.flips << ", seed " << e.seed
        << "\n";
    out << "sparsity estimate (0.999 energy): S=" << s_est << "\n";
    if (s_est > 0 && s_est < e.grid.steps) {
        out << "measurement lower bound ceil(S*log2(N/S)): "
            << min_measurements(s_est, e.grid.steps, 1.0) << "\n";
    }
    out << "resolved max_support: " << resolved.max_support << "\n";
    char ratio[32];
    std::snprintf(ratio, sizeof(ratio), "%.2f",
                  static_cast<double>(e.grid.steps) / static_cast<double>(e.measurements));
    out << "compression ratio N/M: " << ratio << "\n";
    return out.str();
}

}  // namespace cavity_cs
