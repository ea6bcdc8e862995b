#include "cavity_cs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "cavity_cs/signal_model.hpp"

namespace cavity_cs {

DctBasis dct_matrix(int dim) {
    if (dim < 1) throw std::invalid_argument("dct_matrix: dim must be >= 1");
    DctBasis basis;
    basis.dim = dim;
    basis.matrix.resize(dim, dim);
    const double n = dim;
    for (int i = 1; i <= dim; ++i) {
        const double scale = std::sqrt((i == 1 ? 1.0 : 2.0) / n);
        for (int j = 1; j <= dim; ++j) {
            basis.matrix(i - 1, j - 1) =
                scale * std::cos(std::numbers::pi / (2.0 * n) * (i - 1) * (2.0 * j - 1.0));
        }
    }
    basis.column_prefix.resize(dim + 1, dim);
    basis.column_prefix.row(0).setZero();
    for (int j = 1; j <= dim; ++j) {
        basis.column_prefix.row(j) =
            basis.column_prefix.row(j - 1) + basis.matrix.col(j - 1).transpose();
    }
    return basis;
}

SparseSolution omp(const Eigen::MatrixXd& a_eff, const Eigen::VectorXd& y,
                   const RecoveryConfig& cfg) {
    const Eigen::Index m = a_eff.rows();
    const Eigen::Index n = a_eff.cols();
    if (y.size() != m) throw std::invalid_argument("omp: dimension mismatch");
    if (cfg.max_support < 0) throw std::invalid_argument("omp: max_support must be >= 0");
    if (cfg.residual_tol < 0.0) throw std::invalid_argument("omp: residual_tol must be >= 0");

    Eigen::VectorXd norms(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        norms(j) = a_eff.col(j).norm();
        if (cfg.normalize_columns && norms(j) == 0.0)
            throw std::invalid_argument("omp: zero column with normalization enabled");
    }

    SparseSolution sol;
    sol.coefficients = Eigen::VectorXd::Zero(n);

    const auto cap = std::min<Eigen::Index>(cfg.max_support, m);
    std::vector<bool> in_support(static_cast<std::size_t>(n), false);
    Eigen::VectorXd residual = y;
    Eigen::VectorXd fitted;
    Eigen::MatrixXd a_sub(m, cap > 0 ? cap : 1);

    while (residual.norm() > cfg.residual_tol &&
           static_cast<Eigen::Index>(sol.support.size()) < cap) {
        const Eigen::VectorXd corr = a_eff.transpose() * residual;
        Eigen::Index best = -1;
        double best_score = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (in_support[static_cast<std::size_t>(j)]) continue;
            const double denom = cfg.normalize_columns ? norms(j) : 1.0;
            if (denom == 0.0) continue;
            const double score = std::abs(corr(j)) / denom;
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        if (best < 0 || best_score == 0.0) break;  // residual orthogonal to all columns

        in_support[static_cast<std::size_t>(best)] = true;
        sol.support.push_back(static_cast<int>(best));
        const auto s = static_cast<Eigen::Index>(sol.support.size());
        a_sub.col(s - 1) = a_eff.col(best);

        // minimum-norm least squares on the raw support columns
        const auto block = a_sub.leftCols(s);
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(block);
        if (cod.rank() < s) sol.rank_deficient = true;
        const Eigen::VectorXd x_sub = cod.solve(y);
        fitted = block * x_sub;
        residual = y - fitted;
        ++sol.iterations;

        for (Eigen::Index k = 0; k < s; ++k)
            sol.coefficients(sol.support[static_cast<std::size_t>(k)]) = x_sub(k);
    }
    sol.residual_norm = residual.norm();
    return sol;
}

Eigen::MatrixXd sensing_in_basis(const SensingMatrix& a, const DctBasis& basis) {
    if (a.cols() != basis.dim)
        throw std::invalid_argument("sensing_in_basis: dimension mismatch");
    const auto m = a.rows();
    const int n = basis.dim;
    Eigen::MatrixXd out(m, n);
    for (Eigen::Index row = 0; row < m; ++row) {
        const FlipSchedule& s = a.schedules[static_cast<std::size_t>(row)];
        const int k_count = s.flip_count();
        double sign = (k_count % 2 == 0) ? 1.0 : -1.0;
        int lo = 0;  // segment covers columns (lo, hi] in 1-based step indices
        Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n);
        for (int seg = 0; seg <= k_count; ++seg) {
            const int hi = (seg == k_count) ? n : s.flips[static_cast<std::size_t>(seg)];
            acc += sign * (basis.column_prefix.row(hi) - basis.column_prefix.row(lo));
            sign = -sign;
            lo = hi;
        }
        out.row(row) = acc;
    }
    return out;
}

RecoveryResult recover_beta(const SensingMatrix& a, const MeasurementVector& measured,
                            const DctBasis& basis, const RecoveryConfig& cfg) {
    if (measured.values.size() != a.rows())
        throw std::invalid_argument("recover_beta: measurement count mismatch");
    if (a.cols() != basis.dim)
        throw std::invalid_argument("recover_beta: basis dimension mismatch");
    if (a.schedules.size() != static_cast<std::size_t>(a.rows()))
        throw std::invalid_argument("recover_beta: matrix lacks its generating schedules");

    const Eigen::MatrixXd a_eff = sensing_in_basis(a, basis);
    const SparseSolution re = omp(a_eff, measured.values.real(), cfg);
    const SparseSolution im = omp(a_eff, measured.values.imag(), cfg);

    const Eigen::VectorXd beta_re = basis.matrix.transpose() * re.coefficients;
    const Eigen::VectorXd beta_im = basis.matrix.transpose() * im.coefficients;

    RecoveryResult out;
    const int n = basis.dim;
    // the recovered series lives on the measurement grid when one is known;
    // recover_beta itself only needs the length, so use a unit grid
    TimeGrid grid(0.0, static_cast<double>(n), n);
    std::vector<std::complex<double>> beta(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        beta[static_cast<std::size_t>(j)] = {beta_re(j), beta_im(j)};
    out.beta = ComplexSeries(SeriesKind::beta, grid, std::move(beta));
    out.alpha = accumulate_alpha(out.beta);
    out.support_re = re.support;
    out.support_im = im.support;
    out.residual_re = re.residual_norm;
    out.residual_im = im.residual_norm;
    out.rank_deficient = re.rank_deficient || im.rank_deficient;
    out.coefficients_re = re.coefficients;
    out.coefficients_im = im.coefficients;
    return out;
}

double mse(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("mse: length mismatch");
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
    }
    return acc / static_cast<double>(x.size());
}

int sparsity_estimate(const ComplexSeries& b, const DctBasis& basis, double energy_fraction) {
    if (!(energy_fraction > 0.0 && energy_fraction < 1.0))
        throw std::invalid_argument("sparsity_estimate: energy fraction must be in (0,1)");
    if (static_cast<int>(b.size()) != basis.dim)
        throw std::invalid_argument("sparsity_estimate: dimension mismatch");
    const auto n = static_cast<Eigen::Index>(b.size());
    Eigen::VectorXd re(n);
    Eigen::VectorXd im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        re(i) = b.values[static_cast<std::size_t>(i)].real();
        im(i) = b.values[static_cast<std::size_t>(i)].imag();
    }
    int worst = 0;
    for (const auto& channel : {re, im}) {
        Eigen::VectorXd coef = basis.matrix * channel;
        std::vector<double> energy(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) energy[static_cast<std::size_t>(i)] = coef(i) * coef(i);
        std::sort(energy.begin(), energy.end(), std::greater<>());
        const double total = std::accumulate(energy.begin(), energy.end(), 0.0);
        if (total == 0.0) continue;  // zero channel needs no coefficients
        double cum = 0.0;
        int s = 0;
        for (std::size_t i = 0; i < energy.size(); ++i) {
            cum += energy[i];
            s = static_cast<int>(i) + 1;
            if (cum >= energy_fraction * total) break;
        }
        worst = std::max(worst, s);
    }
    return worst;
}

long min_measurements(int sparsity, int dim, double constant) {
    if (sparsity <= 0 || sparsity >= dim)
        throw std::invalid_argument("min_measurements: need 0 < S < N");
    if (!(constant > 0.0)) throw std::invalid_argument("min_measurements: C must be positive");
    const double bound = constant * static_cast<double>(sparsity) *
                         std::log2(static_cast<double>(dim) / static_cast<double>(sparsity));
    return static_cast<long>(std::ceil(bound));
}

}  // namespace cavity_cs
