#include "cavity_cs/experiments.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cavity_cs {

namespace {

// per-step integral of exp(-i*delta*s); sets the scale of the noise
// contribution to each beta component
std::vector<std::complex<double>> step_phase_integrals(const TimeGrid& grid, double delta) {
    std::vector<std::complex<double>> w(static_cast<std::size_t>(grid.steps));
    for (int n = 0; n < grid.steps; ++n) {
        const double a = grid.time_at(n);
        const double b = grid.time_at(n + 1);
        if (delta == 0.0) {
            w[static_cast<std::size_t>(n)] = {b - a, 0.0};
        } else {
            const std::complex<double> num =
                std::exp(std::complex<double>(0.0, -delta * b)) -
                std::exp(std::complex<double>(0.0, -delta * a));
            w[static_cast<std::size_t>(n)] = num / std::complex<double>(0.0, -delta);
        }
    }
    return w;
}

struct Channels {
    Eigen::VectorXd re;
    Eigen::VectorXd im;
};

Channels split(const ComplexSeries& s) {
    const auto n = static_cast<Eigen::Index>(s.size());
    Channels c{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        c.re(i) = s.values[static_cast<std::size_t>(i)].real();
        c.im(i) = s.values[static_cast<std::size_t>(i)].imag();
    }
    return c;
}

double channel_mse(const ComplexSeries& a, const ComplexSeries& b, bool imag) {
    const auto ca = split(a);
    const auto cb = split(b);
    const Eigen::VectorXd& x = imag ? ca.im : ca.re;
    const Eigen::VectorXd& y = imag ? cb.im : cb.re;
    return mse(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
               std::span<const double>(y.data(), static_cast<std::size_t>(y.size())));
}

struct RunContext {
    DctBasis basis;
    ComplexSeries beta_clean;
    ComplexSeries alpha_clean;
    int sparsity = 0;
};

RunContext make_context(const ExperimentConfig& cfg) {
    RunContext ctx;
    ctx.basis = dct_matrix(cfg.grid.steps);
    NoiseSpec off;
    ctx.beta_clean = discretize_beta(cfg.protocol, cfg.detuning, cfg.grid, off);
    ctx.alpha_clean = accumulate_alpha(ctx.beta_clean);
    ctx.sparsity = sparsity_estimate(ctx.beta_clean, ctx.basis);
    return ctx;
}

ExperimentResult run_with_context(const ExperimentConfig& cfg, const RunContext& ctx) {
    cfg.validate();
    ExperimentResult result;
    result.beta_clean = ctx.beta_clean;
    result.alpha_clean = ctx.alpha_clean;

    try {
        result.beta = cfg.noise.enabled
                          ? discretize_beta(cfg.protocol, cfg.detuning, cfg.grid, cfg.noise)
                          : ctx.beta_clean;
        result.alpha = accumulate_alpha(result.beta);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("simulate stage: ") + e.what());
    }

    SensingMatrix matrix;
    MeasurementVector measured;
    try {
        matrix = build_matrix(matrix_seed(cfg.seed), cfg.measurements, cfg.flips,
                              cfg.grid.steps);
        measured = measure(matrix, result.beta);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("measure stage: ") + e.what());
    }

    try {
        const ResolvedRecovery resolved = resolve_recovery(cfg, ctx.beta_clean, ctx.basis);
        RecoveryConfig rc;
        rc.max_support = resolved.max_support;
        rc.normalize_columns = resolved.normalize_columns;

        double tol_re = resolved.residual_tol_re;
        double tol_im = resolved.residual_tol_im;
        if (!cfg.recovery.residual_tol && !cfg.noise.enabled) {
            tol_re = 1e-6 * measured.values.real().norm();
            tol_im = 1e-6 * measured.values.imag().norm();
        }
        result.max_support_used = resolved.max_support;
        result.residual_tol_re = tol_re;
        result.residual_tol_im = tol_im;

        const Eigen::MatrixXd a_eff = sensing_in_basis(matrix, ctx.basis);
        rc.residual_tol = tol_re;
        const SparseSolution re = omp(a_eff, measured.values.real(), rc);
        rc.residual_tol = tol_im;
        const SparseSolution im = omp(a_eff, measured.values.imag(), rc);

        const Eigen::VectorXd beta_re = ctx.basis.matrix.transpose() * re.coefficients;
        const Eigen::VectorXd beta_im = ctx.basis.matrix.transpose() * im.coefficients;
        std::vector<std::complex<double>> vals(static_cast<std::size_t>(ctx.basis.dim));
        for (int j = 0; j < ctx.basis.dim; ++j)
            vals[static_cast<std::size_t>(j)] = {beta_re(j), beta_im(j)};
        result.beta_recovered = ComplexSeries(SeriesKind::beta, cfg.grid, std::move(vals));
        result.alpha_recovered = accumulate_alpha(result.beta_recovered);

        result.recovery.beta = result.beta_recovered;
        result.recovery.alpha = result.alpha_recovered;
        result.recovery.support_re = re.support;
        result.recovery.support_im = im.support;
        result.recovery.residual_re = re.residual_norm;
        result.recovery.residual_im = im.residual_norm;
        result.recovery.rank_deficient = re.rank_deficient || im.rank_deficient;
        result.recovery.coefficients_re = re.coefficients;
        result.recovery.coefficients_im = im.coefficients;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("recover stage: ") + e.what());
    }

    result.mse_beta_re = channel_mse(result.beta_clean, result.beta_recovered, false);
    result.mse_beta_im = channel_mse(result.beta_clean, result.beta_recovered, true);
    result.mse_alpha_re = channel_mse(result.alpha_clean, result.alpha_recovered, false);
    result.mse_alpha_im = channel_mse(result.alpha_clean, result.alpha_recovered, true);
    result.mse_beta_re_measured = channel_mse(result.beta, result.beta_recovered, false);
    result.mse_beta_im_measured = channel_mse(result.beta, result.beta_recovered, true);
    result.mse_alpha_re_measured = channel_mse(result.alpha, result.alpha_recovered, false);
    result.mse_alpha_im_measured = channel_mse(result.alpha, result.alpha_recovered, true);
    double peak = 0.0;
    for (const auto& v : result.alpha_clean.values) peak = std::max(peak, std::norm(v));
    result.max_alpha_sq = peak;
    return result;
}

}  // namespace

void ExperimentConfig::validate() const {
    grid.validate();
    if (measurements < 1) throw std::invalid_argument("config: measurements must be >= 1");
    if (flips < 0 || flips > grid.steps - 1)
        throw std::invalid_argument("config: flips must be in [0, steps-1]");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (noise.strength < 0.0) throw std::invalid_argument("config: noise strength must be >= 0");
    if (!(success_threshold > 0.0))
        throw std::invalid_argument("config: success threshold must be positive");
    if (recovery.max_support && *recovery.max_support < 0)
        throw std::invalid_argument("config: recovery.max_support must be >= 0");
    if (recovery.residual_tol && *recovery.residual_tol < 0.0)
        throw std::invalid_argument("config: recovery.residual_tol must be >= 0");
}

ResolvedRecovery resolve_recovery(const ExperimentConfig& cfg, const ComplexSeries& beta_clean,
                                  const DctBasis& basis) {
    ResolvedRecovery r;
    r.normalize_columns = cfg.recovery.normalize_columns;
    r.sparsity = sparsity_estimate(beta_clean, basis);
    if (cfg.recovery.max_support) {
        r.max_support = *cfg.recovery.max_support;
    } else {
        // estimate + margin, capped to keep the support least squares
        // overdetermined even when the estimate approaches N
        const int cap = std::max(1, cfg.measurements / 4);
        r.max_support = std::min(r.sparsity + 10, cap);
    }
    if (cfg.recovery.residual_tol) {
        r.residual_tol_re = r.residual_tol_im = *cfg.recovery.residual_tol;
    } else if (cfg.noise.enabled) {
        // expected l2 norm of the noise contribution to each channel of
        // the measurement vector: Var(xi) = 1/3, rows have unit entries
        const auto w = step_phase_integrals(cfg.grid, cfg.detuning);
        double sum_re = 0.0;
        double sum_im = 0.0;
        for (const auto& v : w) {
            sum_re += v.real() * v.real();
            sum_im += v.imag() * v.imag();
        }
        const double scale = cfg.noise.strength * std::sqrt(static_cast<double>(cfg.measurements) / 3.0);
        r.residual_tol_re = scale * std::sqrt(sum_re);
        r.residual_tol_im = scale * std::sqrt(sum_im);
    }
    return r;
}

ExperimentResult run_recovery_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    return run_with_context(cfg, make_context(cfg));
}

std::uint64_t trial_seed(std::uint64_t master, int measurements, int flips, int trial) {
    return derive_stream(master, 0x7e1a15ULL, static_cast<std::uint64_t>(measurements),
                         static_cast<std::uint64_t>(flips), static_cast<std::uint64_t>(trial));
}

std::uint64_t matrix_seed(std::uint64_t master) {
    return derive_stream(master, 0xA11ULL);
}

SweepReport success_sweep(const ExperimentConfig& cfg, const std::vector<int>& m_list,
                          const std::vector<int>& k_list) {
    if (m_list.empty() || k_list.empty())
        throw std::invalid_argument("success_sweep: M and K lists must be non-empty");
    cfg.validate();

    SweepReport report;
    report.success_threshold = cfg.success_threshold;
    report.trials_per_cell = cfg.trials;
    report.master_seed = cfg.seed;
    report.noise_enabled = cfg.noise.enabled;

    const RunContext ctx = make_context(cfg);

    for (const int m : m_list) {
        for (const int k : k_list) {
            SweepCell cell;
            cell.measurements = m;
            cell.flips = k;
            cell.trials = cfg.trials;
            cell.cell_seed = derive_stream(cfg.seed, 0xce11ULL, static_cast<std::uint64_t>(m),
                                           static_cast<std::uint64_t>(k));

            std::vector<double> summed(static_cast<std::size_t>(cfg.trials), 0.0);
            std::string failure;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
            for (int t = 0; t < cfg.trials; ++t) {
                try {
                    ExperimentConfig trial_cfg = cfg;
                    trial_cfg.measurements = m;
                    trial_cfg.flips = k;
                    trial_cfg.seed = trial_seed(cfg.seed, m, k, t);
                    trial_cfg.noise.seed = derive_stream(trial_cfg.seed, 0x0115eULL);
                    const ExperimentResult res = run_with_context(trial_cfg, ctx);
                    summed[static_cast<std::size_t>(t)] = res.summed_beta_mse();
                } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                    failure = e.what();
                }
            }
            if (!failure.empty()) throw std::runtime_error("sweep trial failed: " + failure);

            double mean = 0.0;
            double worst = 0.0;
            for (const double v : summed) {
                if (v < cfg.success_threshold) ++cell.successes;
                mean += v;
                worst = std::max(worst, v);
            }
            cell.mean_summed_mse = mean / static_cast<double>(cfg.trials);
            cell.max_summed_mse = worst;
            cell.probability =
                static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
            report.cells.push_back(cell);
        }
    }
    return report;
}

ComplexSeries nyquist_baseline(const ExperimentConfig& cfg) {
    cfg.validate();
    return accumulate_alpha(discretize_beta(cfg.protocol, cfg.detuning, cfg.grid, cfg.noise));
}

}  // namespace cavity_cs
