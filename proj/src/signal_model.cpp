#include "cavity_cs/signal_model.hpp"

#include <cmath>
#include <stdexcept>

namespace cavity_cs {

namespace {

using cplx = std::complex<double>;

// exp(-i*delta*b) - exp(-i*delta*a), written to avoid cancellation for
// small delta*(b-a)
cplx phase_difference(double delta, double a, double b) {
    const double d = delta * (b - a);
    const double s = std::sin(0.5 * d);
    const cplx diff(-2.0 * s * s, -std::sin(d));
    return std::exp(cplx(0.0, -delta * a)) * diff;
}

// exact integral of c * exp(-i*delta*s) over [a, b]
cplx constant_segment(double c, double delta, double a, double b) {
    if (delta == 0.0) return {c * (b - a), 0.0};
    return c * phase_difference(delta, a, b) / cplx(0.0, -delta);
}

long long snap_substep(double t, const TimeGrid& grid) {
    const double h = grid.substep_width();
    const auto idx = std::llround((t - grid.t0) / h);
    if (std::abs(t - (grid.t0 + static_cast<double>(idx) * h)) > 1e-6 * h)
        throw std::invalid_argument("integrate_alpha: time not on a quadrature substep boundary");
    return idx;
}

struct KahanSum {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};
    void add(cplx x) {
        const cplx y = x - comp;
        const cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

cplx closed_form_square(const DrivingProtocol& p, double delta, long long s1, long long s2,
                        const TimeGrid& grid) {
    const double h = grid.substep_width();
    const double a = grid.t0 + static_cast<double>(s1) * h;
    const double b = grid.t0 + static_cast<double>(s2) * h;
    std::vector<double> cuts = drive_breakpoints(p, a, b);
    cuts.insert(cuts.begin(), a);
    cuts.push_back(b);
    KahanSum acc;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i];
        const double hi = cuts[i + 1];
        const double c = eval_drive(p, 0.5 * (lo + hi));
        acc.add(constant_segment(c, delta, lo, hi));
    }
    return acc.sum;
}

cplx quadrature(const DrivingProtocol& p, double delta, long long s1, long long s2,
                const TimeGrid& grid, const NoiseSpec& noise) {
    const double h = grid.substep_width();
    const bool constant_pieces = piecewise_constant(p);
    const double t_lo = grid.t0 + static_cast<double>(s1) * h;
    const double t_hi = grid.t0 + static_cast<double>(s2) * h;
    const std::vector<double> all_cuts = drive_breakpoints(p, t_lo, t_hi);
    std::size_t next_cut = 0;

    KahanSum acc;
    int noise_step = -1;
    double add = 0.0;
    std::vector<double> bounds;
    for (long long sub = s1; sub < s2; ++sub) {
        const double a = grid.t0 + static_cast<double>(sub) * h;
        const double b = grid.t0 + static_cast<double>(sub + 1) * h;
        if (noise.enabled) {
            const int step = static_cast<int>(sub / grid.substeps);
            if (step != noise_step) {
                noise_step = step;
                add = noise.strength * noise_xi(noise, step);
            }
        }

        bounds.clear();
        bounds.push_back(a);
        while (next_cut < all_cuts.size() && all_cuts[next_cut] < b) {
            if (all_cuts[next_cut] > a) bounds.push_back(all_cuts[next_cut]);
            ++next_cut;
        }
        bounds.push_back(b);
        for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
            const double lo = bounds[i];
            const double hi = bounds[i + 1];
            if (constant_pieces) {
                // f is constant on the piece; trapezoid applies to the phase factor
                const double c = eval_drive(p, 0.5 * (lo + hi)) + add;
                const cplx g = std::exp(cplx(0.0, -delta * lo)) + std::exp(cplx(0.0, -delta * hi));
                acc.add(0.5 * c * g * (hi - lo));
            } else {
                const double flo = eval_drive(p, lo) + add;
                const double fhi = eval_drive(p, hi) + add;
                const cplx g = flo * std::exp(cplx(0.0, -delta * lo)) +
                               fhi * std::exp(cplx(0.0, -delta * hi));
                acc.add(0.5 * g * (hi - lo));
            }
        }
    }
    return acc.sum;
}

}  // namespace

std::complex<double> integrate_alpha(const DrivingProtocol& p, double delta, double t1,
                                     double t2, const TimeGrid& grid,
                                     const NoiseSpec& noise) {
    if (t2 < t1) throw std::invalid_argument("integrate_alpha: t2 < t1");
    const long long s1 = snap_substep(t1, grid);
    const long long s2 = snap_substep(t2, grid);
    if (s1 == s2) return {0.0, 0.0};
    if (piecewise_constant(p) && !noise.enabled)
        return closed_form_square(p, delta, s1, s2, grid);
    return quadrature(p, delta, s1, s2, grid, noise);
}

std::complex<double> integrate_alpha_quadrature(const DrivingProtocol& p, double delta,
                                                double t1, double t2, const TimeGrid& grid,
                                                const NoiseSpec& noise) {
    if (t2 < t1) throw std::invalid_argument("integrate_alpha: t2 < t1");
    const long long s1 = snap_substep(t1, grid);
    const long long s2 = snap_substep(t2, grid);
    if (s1 == s2) return {0.0, 0.0};
    return quadrature(p, delta, s1, s2, grid, noise);
}

ComplexSeries discretize_beta(const DrivingProtocol& p, double delta, const TimeGrid& grid,
                              const NoiseSpec& noise) {
    std::vector<std::complex<double>> beta(static_cast<std::size_t>(grid.steps));
    for (int n = 0; n < grid.steps; ++n) {
        beta[static_cast<std::size_t>(n)] =
            integrate_alpha(p, delta, grid.time_at(n), grid.time_at(n + 1), grid, noise);
    }
    return {SeriesKind::beta, grid, std::move(beta)};
}

ComplexSeries accumulate_alpha(const ComplexSeries& beta) {
    if (beta.kind != SeriesKind::beta)
        throw std::invalid_argument("accumulate_alpha: input series must be tagged beta");
    std::vector<std::complex<double>> alpha(beta.values.size());
    std::complex<double> running{0.0, 0.0};
    for (std::size_t n = 0; n < beta.values.size(); ++n) {
        running += beta.values[n];
        alpha[n] = running;
    }
    return {SeriesKind::alpha, beta.grid, std::move(alpha)};
}

}  // namespace cavity_cs
