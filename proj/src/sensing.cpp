#include "cavity_cs/sensing.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cavity_cs {

FlipSchedule sample_flip_schedule(Rng& stream, int flip_count, int steps) {
    if (flip_count < 0) throw std::invalid_argument("sample_flip_schedule: negative flip count");
    if (flip_count > steps - 1)
        throw std::invalid_argument("sample_flip_schedule: flip count exceeds steps-1");
    // partial Fisher-Yates over {1..steps-1}
    std::vector<int> pool(static_cast<std::size_t>(steps - 1));
    std::iota(pool.begin(), pool.end(), 1);
    FlipSchedule s;
    s.flips.reserve(static_cast<std::size_t>(flip_count));
    for (int j = 0; j < flip_count; ++j) {
        const auto pick = static_cast<std::size_t>(j) +
                          static_cast<std::size_t>(stream.below(pool.size() - static_cast<std::size_t>(j)));
        std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
        s.flips.push_back(pool[static_cast<std::size_t>(j)]);
    }
    std::sort(s.flips.begin(), s.flips.end());
    return s;
}

Eigen::RowVectorXd build_row(const FlipSchedule& s, int steps) {
    const int k_count = s.flip_count();
    for (int j = 0; j < k_count; ++j) {
        if (s.flips[static_cast<std::size_t>(j)] < 1 ||
            s.flips[static_cast<std::size_t>(j)] > steps - 1)
            throw std::invalid_argument("build_row: flip index out of [1, steps-1]");
        if (j > 0 && s.flips[static_cast<std::size_t>(j)] <= s.flips[static_cast<std::size_t>(j - 1)])
            throw std::invalid_argument("build_row: flip indices must be strictly increasing");
    }
    Eigen::RowVectorXd row(steps);
    int seg = 0;  // 0-based segment; sign = (-1)^(K - seg)
    double sign = (k_count % 2 == 0) ? 1.0 : -1.0;
    for (int n = 1; n <= steps; ++n) {
        while (seg < k_count && n > s.flips[static_cast<std::size_t>(seg)]) {
            ++seg;
            sign = -sign;
        }
        row(n - 1) = sign;
    }
    return row;
}

SensingMatrix build_matrix(std::uint64_t seed, int measurements, int flip_count, int steps) {
    if (measurements < 1) throw std::invalid_argument("build_matrix: measurements must be >= 1");
    SensingMatrix a;
    a.entries.resize(measurements, steps);
    a.schedules.reserve(static_cast<std::size_t>(measurements));
    for (int m = 0; m < measurements; ++m) {
        Rng stream(derive_stream(seed, 0x5c4edULL, static_cast<std::uint64_t>(m)));
        FlipSchedule s = sample_flip_schedule(stream, flip_count, steps);
        s.label = m;
        a.entries.row(m) = build_row(s, steps);
        a.schedules.push_back(std::move(s));
    }
    return a;
}

MeasurementVector measure(const SensingMatrix& a, const ComplexSeries& beta) {
    if (beta.kind != SeriesKind::beta)
        throw std::invalid_argument("measure: series must be tagged beta");
    if (a.cols() != static_cast<Eigen::Index>(beta.size()))
        throw std::invalid_argument("measure: matrix columns must equal series length");
    const auto n = static_cast<Eigen::Index>(beta.size());
    Eigen::VectorXd re(n);
    Eigen::VectorXd im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        re(i) = beta.values[static_cast<std::size_t>(i)].real();
        im(i) = beta.values[static_cast<std::size_t>(i)].imag();
    }
    const Eigen::VectorXd yre = a.entries * re;
    const Eigen::VectorXd yim = a.entries * im;
    MeasurementVector out;
    out.values.resize(a.rows());
    for (Eigen::Index m = 0; m < a.rows(); ++m)
        out.values(m) = std::complex<double>(yre(m), yim(m));
    out.provenance = MeasurementVector::Provenance::matrix;
    return out;
}

MeasurementTrace simulate_measurement_trace(const DrivingProtocol& p, double delta,
                                            const TimeGrid& grid, const FlipSchedule& s,
                                            const NoiseSpec& noise) {
    const int k_count = s.flip_count();
    for (int j = 0; j < k_count; ++j) {
        if (s.flips[static_cast<std::size_t>(j)] < 1 ||
            s.flips[static_cast<std::size_t>(j)] > grid.steps - 1)
            throw std::invalid_argument("simulate_measurement: flip index outside grid");
        if (j > 0 && s.flips[static_cast<std::size_t>(j)] <= s.flips[static_cast<std::size_t>(j - 1)])
            throw std::invalid_argument("simulate_measurement: flips must be strictly increasing");
    }
    MeasurementTrace trace;
    trace.before_flip.reserve(static_cast<std::size_t>(k_count));
    trace.after_flip.reserve(static_cast<std::size_t>(k_count));
    std::complex<double> amp{0.0, 0.0};
    double t_prev = grid.t0;
    for (int j = 0; j < k_count; ++j) {
        const double t_flip = grid.time_at(s.flips[static_cast<std::size_t>(j)]);
        amp += integrate_alpha(p, delta, t_prev, t_flip, grid, noise);
        trace.before_flip.push_back(amp);
        amp = -amp;
        trace.after_flip.push_back(amp);
        t_prev = t_flip;
    }
    amp += integrate_alpha(p, delta, t_prev, grid.t_end, grid, noise);
    trace.final_amplitude = amp;
    return trace;
}

std::complex<double> simulate_measurement(const DrivingProtocol& p, double delta,
                                          const TimeGrid& grid, const FlipSchedule& s,
                                          const NoiseSpec& noise) {
    return simulate_measurement_trace(p, delta, grid, s, noise).final_amplitude;
}

}  // namespace cavity_cs
