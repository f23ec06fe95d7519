#pragma once

#include <Eigen/Dense>

#include "fiscast/errors.hpp"

namespace fiscast::detail {

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd std_errors;  // conventional OLS errors, dof-corrected
    Eigen::VectorXd residuals;
    double ssr = 0.0;
    Eigen::Index rank = 0;
};

/// Least-squares fit via column-pivoted QR. Throws singular_regression when
/// the design matrix is numerically rank-deficient.
inline OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const auto n = X.rows();
    const auto k = X.cols();
    if (n <= k) raise(errc::too_few_observations, "need more observations than regressors");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) raise(errc::singular_regression, "design matrix is rank deficient");

    OlsFit fit;
    fit.rank = qr.rank();
    fit.beta = qr.solve(y);
    fit.residuals = y - X * fit.beta;
    fit.ssr = fit.residuals.squaredNorm();

    const double sigma2 = fit.ssr / static_cast<double>(n - k);
    Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    fit.std_errors = (sigma2 * xtx_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();
    return fit;
}

/// Gaussian log-likelihood of a residual vector with MLE variance ssr/n.
/// The variance is floored so an exact fit yields a large finite value.
inline double gaussian_loglik(double ssr, std::size_t n) {
    constexpr double ln_2pi = 1.8378770664093453;
    const double nn = static_cast<double>(n);
    const double sigma2 = std::max(ssr / nn, 1e-300);
    return -0.5 * nn * (ln_2pi + std::log(sigma2) + 1.0);
}

}  // namespace fiscast::detail
