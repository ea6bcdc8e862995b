#include "cavity_cs/drive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cavity_cs/rng.hpp"

namespace cavity_cs {

RandomSmooth::RandomSmooth(std::uint64_t seed, int harmonics, int max_harmonic,
                           double rms, double window_start, double window_end)
    : seed_(seed),
      max_harmonic_(max_harmonic),
      rms_(rms),
      window_start_(window_start),
      window_end_(window_end) {
    if (harmonics < 1) throw std::invalid_argument("RandomSmooth: harmonics must be >= 1");
    if (max_harmonic < harmonics)
        throw std::invalid_argument("RandomSmooth: max_harmonic must be >= harmonics");
    if (!(window_end > window_start))
        throw std::invalid_argument("RandomSmooth: window_end must exceed window_start");

    Rng rng(derive_stream(seed, 0x5303937ULL));
    std::vector<int> pool(static_cast<std::size_t>(max_harmonic));
    for (int i = 0; i < max_harmonic; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    modes_.reserve(static_cast<std::size_t>(harmonics));
    phases_.reserve(static_cast<std::size_t>(harmonics));
    for (int h = 0; h < harmonics; ++h) {
        const auto j = static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(h))) +
                       static_cast<std::size_t>(h);
        std::swap(pool[static_cast<std::size_t>(h)], pool[j]);
        modes_.push_back(pool[static_cast<std::size_t>(h)]);
        phases_.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
}

double RandomSmooth::operator()(double t) const {
    const double x = (t - window_start_) / (window_end_ - window_start_);
    const double amp = rms_ * std::sqrt(2.0 / static_cast<double>(modes_.size()));
    double f = 0.0;
    for (std::size_t h = 0; h < modes_.size(); ++h) {
        f += std::cos(2.0 * std::numbers::pi * modes_[h] * x + phases_[h]);
    }
    return amp * f;
}

namespace {

double eval_square(const SquarePulse& p, double t) {
    double phase = std::fmod(t - p.offset, p.period);
    if (phase < 0.0) phase += p.period;
    return phase < p.duty * p.period ? p.amplitude : 0.0;
}

double eval_tabulated(const Tabulated& p, double t) {
    if (p.values.size() < 2) throw std::invalid_argument("Tabulated: needs at least 2 samples");
    const double last = p.t_last();
    if (t < p.t_start || t > last)
        throw std::domain_error("Tabulated: query outside sample domain");
    const double u = (t - p.t_start) / p.dt;
    auto i = static_cast<std::size_t>(u);
    if (i >= p.values.size() - 1) i = p.values.size() - 2;
    const double w = u - static_cast<double>(i);
    return p.values[i] * (1.0 - w) + p.values[i + 1] * w;
}

}  // namespace

double noise_xi(const NoiseSpec& noise, int step) {
    // counter-based: cheap enough to query per quadrature substep
    std::uint64_t s = derive_stream(noise.seed, 0xd01feULL, static_cast<std::uint64_t>(step));
    const double u01 = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
    return 2.0 * u01 - 1.0;
}

double eval_drive(const DrivingProtocol& p, double t) {
    return std::visit(
        [t](const auto& proto) -> double {
            using T = std::decay_t<decltype(proto)>;
            if constexpr (std::is_same_v<T, SquarePulse>) return eval_square(proto, t);
            else if constexpr (std::is_same_v<T, RandomSmooth>) return proto(t);
            else return eval_tabulated(proto, t);
        },
        p);
}

double eval_drive(const DrivingProtocol& p, double t, const NoiseSpec& noise,
                  const TimeGrid& grid) {
    double f = eval_drive(p, t);
    if (noise.enabled) f += noise.strength * noise_xi(noise, grid.step_of(t));
    return f;
}

std::vector<double> drive_breakpoints(const DrivingProtocol& p, double t1, double t2) {
    std::vector<double> pts;
    if (const auto* sq = std::get_if<SquarePulse>(&p)) {
        // switch instants: offset + k*period (on) and offset + (k+duty)*period (off)
        const double per = sq->period;
        const auto k0 = static_cast<long long>(std::floor((t1 - sq->offset) / per)) - 1;
        for (long long k = k0;; ++k) {
            const double on = sq->offset + static_cast<double>(k) * per;
            const double off = on + sq->duty * per;
            if (on > t2 && off > t2) break;
            if (on > t1 && on < t2) pts.push_back(on);
            if (off > t1 && off < t2) pts.push_back(off);
        }
        std::sort(pts.begin(), pts.end());
    } else if (const auto* tab = std::get_if<Tabulated>(&p)) {
        const auto n = static_cast<long long>(tab->values.size());
        for (long long i = 1; i + 1 < n; ++i) {
            const double knot = tab->t_start + tab->dt * static_cast<double>(i);
            if (knot > t1 && knot < t2) pts.push_back(knot);
        }
    }
    return pts;
}

bool piecewise_constant(const DrivingProtocol& p) {
    return std::holds_alternative<SquarePulse>(p);
}

}  // namespace cavity_cs
