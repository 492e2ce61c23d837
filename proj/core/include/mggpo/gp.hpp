#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mggpo/core.hpp"

namespace mggpo {
class RngStream;
}

namespace mggpo::gp {

/// Squared-exponential kernel hyper-parameters: signal scale and one
/// correlation length per decision variable.
struct KernelParams {
    double sigma_f = 1.0;
    std::vector<double> lengths;
};

/// sigma_f^2 * exp(-1/2 * sum_i ((x_i - x2_i) / lengths_i)^2)
[[nodiscard]] double kernel(std::span<const double> x, std::span<const double> x2, const KernelParams& p);

enum class FitMethod {
    gradient,  // quasi-Newton (BFGS) on the analytic likelihood gradient
    simplex,   // derivative-free Nelder-Mead
};

struct FitOptions {
    bool ard = true;
    FitMethod method = FitMethod::gradient;
    std::size_t restarts = 3;
    std::size_t max_evals = 200;  // likelihood (and gradient) evaluations per restart
    double length_lower = 1e-3;
    double length_upper = 1e1;
    double isotropic_guess = 0.3;
    double sigma_f_floor = 1e-6;
    double sigma_f_ceiling = 1e6;
    /// Replace the data-std signal scale by its likelihood optimum for the fitted lengths.
    bool profile_sigma_f = false;
    double svd_tau = 1e-10;  // relative singular-value cutoff
};

struct Prediction {
    double mean = 0.0;
    double sigma = 0.0;
};

/// Posterior Gaussian process for one objective with a constant prior mean.
/// The kernel matrix is factored by SVD; singular values below
/// svd_tau * max(s) are dropped from the pseudo-inverse, which makes
/// duplicate training rows harmless. Immutable once built.
class GpModel {
public:
    GpModel() = default;

    /// Build the posterior for fixed hyper-parameters.
    static GpModel with_params(Eigen::MatrixXd X, Eigen::VectorXd y, double prior_mean, KernelParams params,
                               double svd_tau = FitOptions{}.svd_tau);

    [[nodiscard]] Prediction predict(std::span<const double> x) const;

    /// Row-wise prediction for a candidate matrix (one point per row).
    void predict_batch(const Eigen::MatrixXd& candidates, Eigen::VectorXd& mean, Eigen::VectorXd& sigma) const;

    [[nodiscard]] const Eigen::MatrixXd& inputs() const noexcept { return X_; }
    [[nodiscard]] const Eigen::VectorXd& targets() const noexcept { return y_; }
    [[nodiscard]] double prior_mean() const noexcept { return prior_mean_; }
    [[nodiscard]] const KernelParams& params() const noexcept { return params_; }
    [[nodiscard]] double svd_tau() const noexcept { return tau_; }
    [[nodiscard]] const Eigen::VectorXd& singular_values() const noexcept { return s_; }
    [[nodiscard]] const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t rank() const noexcept { return rank_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(X_.rows()); }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(X_.cols()); }

private:
    Eigen::MatrixXd X_;
    Eigen::VectorXd y_;
    double prior_mean_ = 0.0;
    KernelParams params_;
    double tau_ = 0.0;
    Eigen::MatrixXd U_;
    Eigen::VectorXd s_;
    Eigen::MatrixXd V_;
    std::size_t rank_ = 0;
    Eigen::VectorXd alpha_;    // K^+ (y - prior_mean)
    Eigen::MatrixXd k_pinv_;   // K^+
    Eigen::RowVectorXd inv_lengths_;
};

[[nodiscard]] Eigen::MatrixXd to_matrix(std::span<const DecisionVector> rows);

/// Log marginal likelihood of the targets under the zero-noise GP with the
/// given prior mean and kernel. Exact duplicate rows are dropped (they carry
/// no information for a deterministic function) and a relative diagonal
/// jitter of 1e-8 (escalating if needed) keeps the Cholesky factor defined.
/// Returns -inf if the kernel matrix cannot be factored.
[[nodiscard]] double log_marginal_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double prior_mean,
                                             const KernelParams& params);

struct FitResult {
    GpModel model;
    double log_likelihood = 0.0;
    double initial_log_likelihood = 0.0;  // best value among the restart seeds
    std::size_t evaluations = 0;
};

/// Fit a model: prior mean and sigma_f from target statistics, correlation
/// lengths by maximizing the log marginal likelihood over log-lengths
/// (BFGS on the analytic gradient, or Nelder-Mead). Restart seeds are `warm_start` (when given), an isotropic
/// guess and random draws. Throws Error on empty or non-finite data.
[[nodiscard]] FitResult fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const FitOptions& options,
                            RngStream& rng, const std::vector<double>* warm_start = nullptr);

/// Lower confidence bound mean - kappa * sigma.
[[nodiscard]] inline double lcb(double mean, double sigma, double kappa) noexcept { return mean - kappa * sigma; }

/// Geometric exploration schedule: current = initial * rho^steps.
struct KappaSchedule {
    double initial = 2.0;
    double rho = 0.85;
    double current = 2.0;
    std::size_t steps = 0;

    static KappaSchedule start(double initial, double rho) { return {initial, rho, initial, 0}; }
    [[nodiscard]] KappaSchedule step() const { return {initial, rho, current * rho, steps + 1}; }
};

} // namespace mggpo::gp
