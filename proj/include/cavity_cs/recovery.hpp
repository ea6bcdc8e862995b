#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cavity_cs/sensing.hpp"
#include "cavity_cs/series.hpp"

namespace cavity_cs {

// Orthonormal DCT-II basis,
//   Phi(i, j) = sqrt((2 - delta_{1,i}) / N) * cos(pi*(i-1)*(2j-1) / (2N)),
// together with column prefix sums of Phi^T used to apply flip-segment
// rows without a dense matrix product.
struct DctBasis {
    int dim = 0;
    Eigen::MatrixXd matrix;          // N x N
    Eigen::MatrixXd column_prefix;   // (N+1) x N; row j = sum of first j rows of Phi^T
};

DctBasis dct_matrix(int dim);

struct RecoveryConfig {
    int max_support = 1;
    double residual_tol = 0.0;        // l2, same units as the measurements
    bool normalize_columns = true;    // normalization affects selection only
};

struct SparseSolution {
    Eigen::VectorXd coefficients;  // dense N-vector supported on `support`
    std::vector<int> support;      // in selection order
    double residual_norm = 0.0;
    bool rank_deficient = false;   // least squares hit a rank-deficient support
    int iterations = 0;
};

// Greedy pursuit: select the column of largest normalized correlation with
// the residual (ties to the lowest index), refit by least squares on the
// support (raw columns, minimum-norm solve), stop at residual_tol or
// min(max_support, rows) columns.
SparseSolution omp(const Eigen::MatrixXd& a_eff, const Eigen::VectorXd& y,
                   const RecoveryConfig& cfg);

struct RecoveryResult {
    ComplexSeries beta;   // Phi^T x per channel
    ComplexSeries alpha;  // prefix sums of beta
    std::vector<int> support_re;
    std::vector<int> support_im;
    double residual_re = 0.0;
    double residual_im = 0.0;
    bool rank_deficient = false;
    Eigen::VectorXd coefficients_re;
    Eigen::VectorXd coefficients_im;
};

// Real and imaginary channels recovered independently against A*Phi^T.
RecoveryResult recover_beta(const SensingMatrix& a, const MeasurementVector& measured,
                            const DctBasis& basis, const RecoveryConfig& cfg);

// A * Phi^T assembled from the flip segments via basis prefix sums;
// equals entries * matrix.transpose() up to rounding.
Eigen::MatrixXd sensing_in_basis(const SensingMatrix& a, const DctBasis& basis);

double mse(std::span<const double> x, std::span<const double> y);

// Smallest S whose S largest-magnitude DCT coefficients capture the given
// energy fraction, per channel, channels combined by max.
int sparsity_estimate(const ComplexSeries& b, const DctBasis& basis,
                      double energy_fraction = 0.999);

// ceil(C * S * log2(N / S)), the measurement lower bound
long min_measurements(int sparsity, int dim, double constant);

}  // namespace cavity_cs
