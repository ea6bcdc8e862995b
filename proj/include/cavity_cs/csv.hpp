#pragma once

#include <filesystem>
#include <string>

#include "cavity_cs/drive.hpp"
#include "cavity_cs/experiments.hpp"
#include "cavity_cs/sensing.hpp"
#include "cavity_cs/series.hpp"

namespace cavity_cs::io {

// All writers assemble the full payload and then write-and-rename, so a
// failed write never leaves a partial file behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// doubles formatted with %.17g so re-imports round-trip exactly
std::string format_double(double v);

// columns: n, t, re, im (n is the 1-based step index, t = t_n)
std::string series_csv(const ComplexSeries& s);
void save_series(const std::filesystem::path& path, const ComplexSeries& s);

// +-1 entries, one row per measurement
std::string matrix_csv(const SensingMatrix& a);
// sidecar: m, k_1, ..., k_K per row
std::string schedules_csv(const SensingMatrix& a);
void save_matrix(const std::filesystem::path& entries_path,
                 const std::filesystem::path& schedules_path, const SensingMatrix& a);
// loads both files and cross-checks entries against the schedules
SensingMatrix load_matrix(const std::filesystem::path& entries_path,
                          const std::filesystem::path& schedules_path);

// columns: m, re, im, provenance
std::string measurements_csv(const MeasurementVector& v);
void save_measurements(const std::filesystem::path& path, const MeasurementVector& v);
MeasurementVector load_measurements(const std::filesystem::path& path);

// columns: n, beta_re, beta_im, alpha_re, alpha_im
std::string recovery_csv(const ComplexSeries& beta, const ComplexSeries& alpha);
// human-readable key = value diagnostics block
std::string recovery_diagnostics(const ExperimentResult& r);

// columns: m, k, trials, successes, probability, mean_mse
std::string sweep_csv(const SweepReport& r);

// drive samples, columns: t, f
std::string drive_csv(const DrivingProtocol& p, const TimeGrid& grid);
// parses a t,f table with uniform spacing into a tabulated protocol
Tabulated load_tabulated(const std::filesystem::path& path);

}  // namespace cavity_cs::io
