#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cavity_cs/config.hpp"
#include "cavity_cs/experiments.hpp"

namespace cavity_cs {

// Each emitter writes its complete file set into `dir` (created when
// missing) using write-then-rename, so failures never leave partial files.

// drive.csv, beta.csv, alpha.csv, drive.svg, alpha.svg, manifest.json
void emit_simulate(const FullConfig& cfg, const std::filesystem::path& dir);

// adds matrix.csv, schedules.csv, measurements.csv
void emit_measure(const FullConfig& cfg, const std::filesystem::path& dir);

// recovery.csv, diagnostics.txt, recovery.svg, manifest.json; matrix and
// measurements may come from files instead of the seeded pipeline
struct RecoverInputs {
    std::optional<std::filesystem::path> matrix;
    std::optional<std::filesystem::path> schedules;
    std::optional<std::filesystem::path> measurements;
};
void emit_recover(const FullConfig& cfg, const std::filesystem::path& dir,
                  const RecoverInputs& inputs = {});

// drive.csv, alpha.csv, alpha_recovered.csv, figure2.svg, manifest.json,
// plus recovery.csv and diagnostics.txt
ExperimentResult emit_figure2(const FullConfig& cfg, const std::filesystem::path& dir);

// sweep.csv, sweep.svg, manifest.json
SweepReport emit_sweep(const FullConfig& cfg, const std::filesystem::path& dir);

// resolved-config summary with sparsity estimate, measurement bound and
// compression ratio
std::string info_text(const FullConfig& cfg);

}  // namespace cavity_cs
