#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "cavity_cs/time_grid.hpp"

namespace cavity_cs {

// Periodic square pulses: f(t) = amplitude inside the on-window of each
// period, 0 outside. The on-window is the first duty*period of the period
// (half-open, so the switch instants belong to the segment they start).
struct SquarePulse {
    double amplitude = 0.1;
    double period = 200.0;
    double duty = 0.2;
    double offset = 0.0;
};

// Band-limited random drive, fully determined by the seed:
//   f(t) = rms * sqrt(2/H) * sum_h cos(2*pi*m_h*(t - window_start)/window + phi_h)
// with the H harmonic indices m_h drawn without replacement from
// {1..max_harmonic} and phases uniform in [0, 2*pi).
class RandomSmooth {
public:
    RandomSmooth(std::uint64_t seed, int harmonics, int max_harmonic, double rms,
                 double window_start, double window_end);

    double operator()(double t) const;

    std::uint64_t seed() const { return seed_; }
    int harmonics() const { return static_cast<int>(modes_.size()); }
    int max_harmonic() const { return max_harmonic_; }
    double rms() const { return rms_; }
    double window_start() const { return window_start_; }
    double window_end() const { return window_end_; }

private:
    std::uint64_t seed_;
    int max_harmonic_;
    double rms_;
    double window_start_;
    double window_end_;
    std::vector<int> modes_;
    std::vector<double> phases_;
};

// Uniformly spaced samples, linearly interpolated. Queries outside
// [t_start, t_start + (n-1)*dt] are a domain error.
struct Tabulated {
    double t_start = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    double t_last() const { return t_start + dt * (static_cast<double>(values.size()) - 1.0); }
};

using DrivingProtocol = std::variant<SquarePulse, RandomSmooth, Tabulated>;

// Additive drive noise f_xi(t) = f(t) + strength * xi, with xi drawn
// uniformly from [-1, 1] once per grid step and held constant across the
// step's quadrature substeps. Counter-based, so xi for a given step is
// reproducible without drawing the preceding steps.
struct NoiseSpec {
    bool enabled = false;
    double strength = 0.05;
    std::uint64_t seed = 0;
};

// the per-step deviate xi_n in [-1, 1]
double noise_xi(const NoiseSpec& noise, int step);

double eval_drive(const DrivingProtocol& p, double t);
double eval_drive(const DrivingProtocol& p, double t, const NoiseSpec& noise,
                  const TimeGrid& grid);

// Discontinuities / kinks of f strictly inside (t1, t2), ascending.
// Quadrature splits substeps at these points.
std::vector<double> drive_breakpoints(const DrivingProtocol& p, double t1, double t2);

// true when f is constant between consecutive breakpoints (square pulses)
bool piecewise_constant(const DrivingProtocol& p);

}  // namespace cavity_cs
