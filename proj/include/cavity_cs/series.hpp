#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "cavity_cs/time_grid.hpp"

namespace cavity_cs {

enum class SeriesKind { beta, alpha };

// Length-N complex vector bound to its grid. `beta` holds per-step
// increments, `alpha` the cumulative amplitudes alpha_n = sum_{l<=n} beta_l.
struct ComplexSeries {
    SeriesKind kind = SeriesKind::beta;
    TimeGrid grid;
    std::vector<std::complex<double>> values;

    ComplexSeries() = default;
    ComplexSeries(SeriesKind kind_, TimeGrid grid_, std::vector<std::complex<double>> values_)
        : kind(kind_), grid(std::move(grid_)), values(std::move(values_)) {
        if (values.size() != static_cast<std::size_t>(grid.steps))
            throw std::invalid_argument("ComplexSeries: length must equal grid step count");
    }

    std::size_t size() const { return values.size(); }
};

}  // namespace cavity_cs
