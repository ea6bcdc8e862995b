#pragma once

#include <complex>

#include "cavity_cs/drive.hpp"
#include "cavity_cs/series.hpp"
#include "cavity_cs/time_grid.hpp"

namespace cavity_cs {

// Coherent amplitude accumulated between t1 and t2 under drive f at
// detuning delta:  alpha(t2, t1) = integral_{t1}^{t2} f(s) exp(-i*delta*s) ds.
//
// Composite trapezoid over the grid's quadrature substeps, with substeps
// split at drive discontinuities; a noiseless square pulse takes an exact
// piecewise closed form instead. t1 and t2 must lie on substep boundaries.
std::complex<double> integrate_alpha(const DrivingProtocol& p, double delta, double t1,
                                     double t2, const TimeGrid& grid,
                                     const NoiseSpec& noise = {});

// forces the trapezoid route even where the closed form applies, so the
// two routes can be checked against each other
std::complex<double> integrate_alpha_quadrature(const DrivingProtocol& p, double delta,
                                                double t1, double t2, const TimeGrid& grid,
                                                const NoiseSpec& noise = {});

// beta_n = alpha(t_n, t_{n-1}) for n = 1..N; one shared noise realization
ComplexSeries discretize_beta(const DrivingProtocol& p, double delta, const TimeGrid& grid,
                              const NoiseSpec& noise = {});

// alpha_n = sum_{l=1..n} beta_l, summed left to right
ComplexSeries accumulate_alpha(const ComplexSeries& beta);

}  // namespace cavity_cs
