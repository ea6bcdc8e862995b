#pragma once

#include <stdexcept>

namespace cavity_cs {

// Uniform sampling grid: N steps of width tau() covering [t0, t_end],
// each step subdivided into `substeps` quadrature intervals.
// Times are in units of 1/omega0, frequencies in units of omega0.
struct TimeGrid {
    double t0 = 0.0;
    double t_end = 1000.0;
    int steps = 1000;
    int substeps = 32;

    TimeGrid() = default;
    TimeGrid(double t0_, double t_end_, int steps_, int substeps_ = 32)
        : t0(t0_), t_end(t_end_), steps(steps_), substeps(substeps_) {
        validate();
    }

    void validate() const {
        if (steps < 1) throw std::invalid_argument("TimeGrid: steps must be >= 1");
        if (substeps < 1) throw std::invalid_argument("TimeGrid: substeps must be >= 1");
        if (!(t_end > t0)) throw std::invalid_argument("TimeGrid: t_end must exceed t0");
    }

    double tau() const { return (t_end - t0) / steps; }
    double substep_width() const { return tau() / substeps; }
    double time_at(int n) const { return t0 + n * tau(); }

    // step containing time t, half-open [t_n, t_{n+1}); t_end maps to the last step
    int step_of(double t) const {
        int n = static_cast<int>((t - t0) / tau());
        if (n < 0) n = 0;
        if (n > steps - 1) n = steps - 1;
        return n;
    }
};

}  // namespace cavity_cs
