#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cavity_cs/drive.hpp"
#include "cavity_cs/rng.hpp"
#include "cavity_cs/series.hpp"
#include "cavity_cs/signal_model.hpp"

namespace cavity_cs {

// K strictly increasing flip indices in [1, N-1]; a flip at index k means
// the cavity amplitude is negated at time t0 + k*tau.
struct FlipSchedule {
    std::vector<int> flips;
    int label = 0;

    int flip_count() const { return static_cast<int>(flips.size()); }
};

// K distinct indices drawn uniformly from {1..steps-1}, sorted
FlipSchedule sample_flip_schedule(Rng& stream, int flip_count, int steps);

// Row entries: segment k of the schedule (t_{k-1} < n*tau <= t_k, with
// t_0 = start and t_{K+1} = end) carries sign (-1)^(K-k+1), so the last
// segment is +1 and signs alternate backwards from the end.
Eigen::RowVectorXd build_row(const FlipSchedule& s, int steps);

struct SensingMatrix {
    Eigen::MatrixXd entries;  // M x N, entries +-1
    std::vector<FlipSchedule> schedules;

    Eigen::Index rows() const { return entries.rows(); }
    Eigen::Index cols() const { return entries.cols(); }
};

// M schedules from independent per-row streams derived from the master seed
SensingMatrix build_matrix(std::uint64_t seed, int measurements, int flip_count, int steps);

struct MeasurementVector {
    enum class Provenance { matrix, simulated };
    Eigen::VectorXcd values;
    Provenance provenance = Provenance::matrix;
};

// compressed measurement by matrix action on the increment vector
MeasurementVector measure(const SensingMatrix& a, const ComplexSeries& beta);

// Independent route to the same number: evolve the scalar amplitude
// segment by segment, negating at every flip, then free evolution to the
// end of the window.
std::complex<double> simulate_measurement(const DrivingProtocol& p, double delta,
                                          const TimeGrid& grid, const FlipSchedule& s,
                                          const NoiseSpec& noise = {});

// same evolution, also reporting the amplitude just before and just after
// each flip
struct MeasurementTrace {
    std::vector<std::complex<double>> before_flip;
    std::vector<std::complex<double>> after_flip;
    std::complex<double> final_amplitude;
};
MeasurementTrace simulate_measurement_trace(const DrivingProtocol& p, double delta,
                                            const TimeGrid& grid, const FlipSchedule& s,
                                            const NoiseSpec& noise = {});

}  // namespace cavity_cs
