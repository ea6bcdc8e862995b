#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cavity_cs/drive.hpp"
#include "cavity_cs/recovery.hpp"
#include "cavity_cs/sensing.hpp"
#include "cavity_cs/series.hpp"
#include "cavity_cs/signal_model.hpp"

namespace cavity_cs {

// Recovery settings with auto-resolved defaults: max_support falls back to
// sparsity_estimate(clean beta) + 10 capped at measurements/4, residual_tol
// to 1e-6*||y|| per channel (noiseless) or the expected noise norm (noisy).
struct RecoverySettings {
    std::optional<int> max_support;
    std::optional<double> residual_tol;
    bool normalize_columns = true;
};

struct ExperimentConfig {
    DrivingProtocol protocol = SquarePulse{};
    double detuning = 0.02;
    TimeGrid grid{0.0, 1000.0, 1000, 32};
    NoiseSpec noise{true, 0.05, 0};
    int measurements = 220;
    int flips = 30;
    RecoverySettings recovery;
    int trials = 200;
    std::uint64_t seed = 1;
    double success_threshold = 2e-3;  // on the summed beta-channel MSE

    void validate() const;
};

struct ExperimentResult {
    ComplexSeries beta;        // measured signal (noisy when noise is on)
    ComplexSeries alpha;
    ComplexSeries beta_clean;  // noise-free reference
    ComplexSeries alpha_clean;
    ComplexSeries beta_recovered;
    ComplexSeries alpha_recovered;
    RecoveryResult recovery;
    // against the clean reference
    double mse_beta_re = 0.0, mse_beta_im = 0.0;
    double mse_alpha_re = 0.0, mse_alpha_im = 0.0;
    // against the measured (noisy) series
    double mse_beta_re_measured = 0.0, mse_beta_im_measured = 0.0;
    double mse_alpha_re_measured = 0.0, mse_alpha_im_measured = 0.0;
    double max_alpha_sq = 0.0;  // max_n |alpha_clean_n|^2
    int max_support_used = 0;
    double residual_tol_re = 0.0, residual_tol_im = 0.0;

    double summed_beta_mse() const { return mse_beta_re + mse_beta_im; }
};

// the resolved OMP settings for one experiment (exposed for diagnostics)
struct ResolvedRecovery {
    int max_support = 0;
    double residual_tol_re = 0.0;
    double residual_tol_im = 0.0;
    bool normalize_columns = true;
    int sparsity = 0;  // estimate on the clean beta
};
ResolvedRecovery resolve_recovery(const ExperimentConfig& cfg, const ComplexSeries& beta_clean,
                                  const DctBasis& basis);

// one full pipeline pass: discretize -> build matrix -> measure -> recover
ExperimentResult run_recovery_experiment(const ExperimentConfig& cfg);

struct SweepCell {
    int measurements = 0;
    int flips = 0;
    int trials = 0;
    int successes = 0;
    double probability = 0.0;
    double mean_summed_mse = 0.0;
    double max_summed_mse = 0.0;
    std::uint64_t cell_seed = 0;
};

struct SweepReport {
    std::vector<SweepCell> cells;
    double success_threshold = 2e-3;
    int trials_per_cell = 0;
    std::uint64_t master_seed = 0;
    bool noise_enabled = false;
};

// Success fraction over fresh seeded trials per (M, K) cell. Success is
// summed beta-channel MSE against the clean reference below the threshold.
SweepReport success_sweep(const ExperimentConfig& cfg, const std::vector<int>& m_list,
                          const std::vector<int>& k_list);

// identity-sensing reference: the N-measurement Nyquist sampling
ComplexSeries nyquist_baseline(const ExperimentConfig& cfg);

// per-trial seed derivation, exposed so reports are reproducible externally
std::uint64_t trial_seed(std::uint64_t master, int measurements, int flips, int trial);

// seed for one run's sensing matrix, shared by every pipeline front end
std::uint64_t matrix_seed(std::uint64_t master);

}  // namespace cavity_cs
