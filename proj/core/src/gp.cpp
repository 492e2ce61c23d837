#include "mggpo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/SVD>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "mggpo/nelder_mead.hpp"
#include "mggpo/rng.hpp"

namespace mggpo::gp {

namespace {

constexpr double kInitialJitter = 1e-8;
constexpr double kMaxJitter = 1e-4;
constexpr double kSimplexStep = 0.7;  // in log-length units

void check_lengths(std::size_t dim, const KernelParams& p, const char* what) {
    if (p.lengths.size() != dim) throw DimensionError(p.lengths.size(), dim, what);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X, const KernelParams& p) {
    const Eigen::Index n = X.rows();
    const double sf2 = p.sigma_f * p.sigma_f;
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = sf2;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double sq = 0.0;
            for (Eigen::Index d = 0; d < X.cols(); ++d) {
                const double t = (X(i, d) - X(j, d)) / p.lengths[static_cast<std::size_t>(d)];
                sq += t * t;
            }
            K(i, j) = K(j, i) = sf2 * std::exp(-0.5 * sq);
        }
    }
    return K;
}

// Row indices of X with exact duplicates (earlier occurrence kept) removed.
std::vector<Eigen::Index> unique_rows(const Eigen::MatrixXd& X) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        bool dup = false;
        for (Eigen::Index k : keep) {
            if (X.row(i) == X.row(k)) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(i);
    }
    return keep;
}

/// Precomputed pairwise squared coordinate differences over unique rows, so
/// each likelihood evaluation is a matrix-vector product plus a Cholesky.
class LikelihoodEvaluator {
public:
    /// With `profile` set, sigma_f is ignored and the signal variance takes
    /// its closed-form optimum r^T C^-1 r / n for each set of lengths.
    LikelihoodEvaluator(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double prior_mean, double sigma_f,
                        bool profile = false)
        : sigma_f_(sigma_f), profile_(profile) {
        const auto rows = unique_rows(X);
        n_ = static_cast<Eigen::Index>(rows.size());
        dim_ = X.cols();
        r_.resize(n_);
        for (Eigen::Index i = 0; i < n_; ++i) r_(i) = y(rows[static_cast<std::size_t>(i)]) - prior_mean;
        const Eigen::Index pairs = n_ * (n_ - 1) / 2;
        sqdiff_.resize(pairs, dim_);
        Eigen::Index row = 0;
        for (Eigen::Index i = 0; i < n_; ++i) {
            for (Eigen::Index j = i + 1; j < n_; ++j, ++row) {
                const auto a = X.row(rows[static_cast<std::size_t>(i)]);
                const auto b = X.row(rows[static_cast<std::size_t>(j)]);
                sqdiff_.row(row) = (a - b).array().square();
            }
        }
    }

    double operator()(std::span<const double> lengths) const { return evaluate(lengths, nullptr); }

    /// Log marginal likelihood; when `grad` is given it receives the
    /// derivative with respect to each log length,
    /// 1/2 * sum_ij (a a^T - K^-1)_ij K_ij (x_id - x_jd)^2 / l_d^2.
    double evaluate(std::span<const double> lengths, Eigen::VectorXd* grad, double* signal_variance = nullptr) const {
        Eigen::VectorXd w(dim_);
        for (Eigen::Index d = 0; d < dim_; ++d) {
            const double l = lengths[static_cast<std::size_t>(d)];
            w(d) = 1.0 / (l * l);
        }
        const Eigen::VectorXd sq = sqdiff_ * w;
        // Correlations; the signal variance is applied afterwards.
        Eigen::MatrixXd C(n_, n_);
        Eigen::VectorXd cp(sq.size());
        Eigen::Index row = 0;
        for (Eigen::Index i = 0; i < n_; ++i) {
            for (Eigen::Index j = i + 1; j < n_; ++j, ++row) C(j, i) = cp(row) = std::exp(-0.5 * sq(row));
        }
        const double n = static_cast<double>(n_);
        for (double jitter = kInitialJitter; jitter <= kMaxJitter; jitter *= 10.0) {
            C.diagonal().setConstant(1.0 + jitter);
            Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(C);
            if (llt.info() != Eigen::Success) continue;
            const Eigen::VectorXd a = llt.matrixL().solve(r_);
            const double log_det_c = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
            double sf2 = sigma_f_ * sigma_f_;
            if (profile_) sf2 = std::max(a.squaredNorm() / n, 1e-300);
            const double v = -0.5 * a.squaredNorm() / sf2 - 0.5 * (log_det_c + n * std::log(sf2)) -
                             0.5 * n * std::log(2.0 * std::numbers::pi);
            if (!std::isfinite(v)) continue;
            if (signal_variance) *signal_variance = sf2;
            if (grad) {
                // With K = sf2 C: (a a^T - K^-1) o K = (b b^T / sf2 - C^-1) o C, b = C^-1 r.
                // For the profiled variance the envelope theorem gives the same form.
                const Eigen::VectorXd b = llt.solve(r_);
                const Eigen::MatrixXd Cinv = llt.solve(Eigen::MatrixXd::Identity(n_, n_));
                Eigen::VectorXd c(sq.size());
                row = 0;
                for (Eigen::Index i = 0; i < n_; ++i) {
                    for (Eigen::Index j = i + 1; j < n_; ++j, ++row)
                        c(row) = (b(i) * b(j) / sf2 - Cinv(i, j)) * cp(row);
                }
                // Symmetric pairs counted once, which cancels the 1/2.
                *grad = (sqdiff_.transpose() * c).cwiseProduct(w);
            }
            return v;
        }
        if (grad) grad->setZero(dim_);
        return -std::numeric_limits<double>::infinity();
    }

    [[nodiscard]] Eigen::Index dimension() const noexcept { return dim_; }

private:
    double sigma_f_;
    bool profile_ = false;
    Eigen::Index n_ = 0;
    Eigen::Index dim_ = 0;
    Eigen::VectorXd r_;
    Eigen::MatrixXd sqdiff_;
};

/// Maximizes the likelihood over box-bounded log lengths with BFGS. Bounds
/// are enforced by the map z -> lo + (hi - lo) * logistic(z).
class BoundedAscent {
public:
    BoundedAscent(const LikelihoodEvaluator& lml, bool ard, double log_lo, double log_hi, std::size_t max_evals)
        : lml_(lml), ard_(ard), lo_(log_lo), hi_(log_hi), max_evals_(max_evals) {}

    struct Result {
        std::vector<double> log_lengths;  // free parameters, one or dim
        double value = -std::numeric_limits<double>::infinity();
        std::size_t evaluations = 0;
    };

    Result run(const std::vector<double>& start) {
        // GSL aborts by default; errors here are reported through return codes.
        static const auto previous_handler = gsl_set_error_handler_off();
        (void)previous_handler;
        const std::size_t k = start.size();
        evaluations_ = 0;
        best_ = Result{start, -std::numeric_limits<double>::infinity(), 0};
        gsl_vector* z = gsl_vector_alloc(k);
        for (std::size_t i = 0; i < k; ++i) gsl_vector_set(z, i, to_free(start[i]));

        gsl_multimin_function_fdf fdf;
        fdf.n = k;
        fdf.params = this;
        fdf.f = [](const gsl_vector* v, void* self) { return static_cast<BoundedAscent*>(self)->value_grad(v, nullptr); };
        fdf.df = [](const gsl_vector* v, void* self, gsl_vector* g) { static_cast<BoundedAscent*>(self)->value_grad(v, g); };
        fdf.fdf = [](const gsl_vector* v, void* self, double* f, gsl_vector* g) {
            *f = static_cast<BoundedAscent*>(self)->value_grad(v, g);
        };

        gsl_multimin_fdfminimizer* m = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, k);
        gsl_multimin_fdfminimizer_set(m, &fdf, z, 0.1, 0.1);
        while (evaluations_ < max_evals_) {
            if (gsl_multimin_fdfminimizer_iterate(m) != GSL_SUCCESS) break;
            if (gsl_multimin_test_gradient(m->gradient, 1e-6) == GSL_SUCCESS) break;
        }
        gsl_multimin_fdfminimizer_free(m);
        gsl_vector_free(z);
        best_.evaluations = evaluations_;
        return best_;
    }

private:
    double to_free(double log_len) const {
        const double t = std::clamp((log_len - lo_) / (hi_ - lo_), 1e-6, 1.0 - 1e-6);
        return std::log(t / (1.0 - t));
    }

    // Negative likelihood in the free parameters; the best point seen is kept.
    double value_grad(const gsl_vector* v, gsl_vector* g) {
        ++evaluations_;
        const std::size_t k = v->size;
        const auto dim = static_cast<std::size_t>(lml_.dimension());
        std::vector<double> log_len(k), slope(k), lengths(dim);
        for (std::size_t i = 0; i < k; ++i) {
            const double s = 1.0 / (1.0 + std::exp(-gsl_vector_get(v, i)));
            log_len[i] = lo_ + (hi_ - lo_) * s;
            slope[i] = (hi_ - lo_) * s * (1.0 - s);
        }
        for (std::size_t d = 0; d < dim; ++d) lengths[d] = std::exp(log_len[ard_ ? d : 0]);
        Eigen::VectorXd grad;
        const double value = lml_.evaluate(lengths, g ? &grad : nullptr);
        if (value > best_.value) {
            best_.value = value;
            best_.log_lengths = log_len;
        }
        if (g) {
            for (std::size_t i = 0; i < k; ++i) {
                const double gi = ard_ ? grad(static_cast<Eigen::Index>(i)) : grad.sum();
                gsl_vector_set(g, i, std::isfinite(value) ? -gi * slope[i] : 0.0);
            }
        }
        return std::isfinite(value) ? -value : std::numeric_limits<double>::max();
    }

    const LikelihoodEvaluator& lml_;
    bool ard_;
    double lo_;
    double hi_;
    std::size_t max_evals_;
    std::size_t evaluations_ = 0;
    Result best_;
};

double population_std(const Eigen::VectorXd& y, double mean) {
    return std::sqrt((y.array() - mean).square().sum() / static_cast<double>(y.size()));
}

} // namespace

double kernel(std::span<const double> x, std::span<const double> x2, const KernelParams& p) {
    if (x.size() != x2.size()) throw DimensionError(x.size(), x2.size(), "kernel");
    check_lengths(x.size(), p, "kernel lengths");
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = (x[i] - x2[i]) / p.lengths[i];
        sq += t * t;
    }
    return p.sigma_f * p.sigma_f * std::exp(-0.5 * sq);
}

Eigen::MatrixXd to_matrix(std::span<const DecisionVector> rows) {
    if (rows.empty()) return {};
    const auto dim = static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != dim)
            throw DimensionError(static_cast<std::size_t>(dim), rows[i].size(), "to_matrix");
        for (Eigen::Index d = 0; d < dim; ++d) X(static_cast<Eigen::Index>(i), d) = rows[i][static_cast<std::size_t>(d)];
    }
    return X;
}

GpModel GpModel::with_params(Eigen::MatrixXd X, Eigen::VectorXd y, double prior_mean, KernelParams params,
                             double svd_tau) {
    if (X.rows() == 0) throw Error("GP: empty training set");
    if (X.rows() != y.size()) throw DimensionError(static_cast<std::size_t>(X.rows()), static_cast<std::size_t>(y.size()), "GP targets");
    check_lengths(static_cast<std::size_t>(X.cols()), params, "GP kernel lengths");
    if (!y.allFinite()) throw Error("GP: non-finite training targets");

    GpModel m;
    m.X_ = std::move(X);
    m.y_ = std::move(y);
    m.prior_mean_ = prior_mean;
    m.params_ = std::move(params);
    m.tau_ = svd_tau;
    m.inv_lengths_.resize(m.X_.cols());
    for (Eigen::Index d = 0; d < m.X_.cols(); ++d) m.inv_lengths_(d) = 1.0 / m.params_.lengths[static_cast<std::size_t>(d)];

    const Eigen::MatrixXd K = kernel_matrix(m.X_, m.params_);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeThinU | Eigen::ComputeThinV);
    m.U_ = svd.matrixU();
    m.s_ = svd.singularValues();
    m.V_ = svd.matrixV();

    const double cutoff = m.tau_ * (m.s_.size() > 0 ? m.s_(0) : 0.0);
    Eigen::VectorXd s_inv = Eigen::VectorXd::Zero(m.s_.size());
    m.rank_ = 0;
    for (Eigen::Index i = 0; i < m.s_.size(); ++i) {
        if (m.s_(i) > cutoff) {
            s_inv(i) = 1.0 / m.s_(i);
            ++m.rank_;
        }
    }
    m.k_pinv_ = m.V_ * s_inv.asDiagonal() * m.U_.transpose();
    m.alpha_ = m.k_pinv_ * (m.y_.array() - m.prior_mean_).matrix();
    if (!m.alpha_.allFinite()) throw Error("GP: non-finite posterior weights");
    return m;
}

Prediction GpModel::predict(std::span<const double> x) const {
    if (x.size() != dimension()) throw DimensionError(dimension(), x.size(), "GP predict");
    const double sf2 = params_.sigma_f * params_.sigma_f;
    Eigen::VectorXd k(X_.rows());
    for (Eigen::Index i = 0; i < X_.rows(); ++i) {
        double sq = 0.0;
        for (Eigen::Index d = 0; d < X_.cols(); ++d) {
            const double t = (X_(i, d) - x[static_cast<std::size_t>(d)]) * inv_lengths_(d);
            sq += t * t;
        }
        k(i) = sf2 * std::exp(-0.5 * sq);
    }
    const double mean = k.dot(alpha_) + prior_mean_;
    const double var = sf2 - k.dot(k_pinv_ * k);
    return {mean, std::sqrt(std::max(var, 0.0))};
}

void GpModel::predict_batch(const Eigen::MatrixXd& candidates, Eigen::VectorXd& mean, Eigen::VectorXd& sigma) const {
    if (candidates.cols() != X_.cols())
        throw DimensionError(dimension(), static_cast<std::size_t>(candidates.cols()), "GP predict_batch");
    const Eigen::MatrixXd Zc = candidates.array().rowwise() * inv_lengths_.array();
    const Eigen::MatrixXd Zt = X_.array().rowwise() * inv_lengths_.array();
    Eigen::MatrixXd sq = -2.0 * Zc * Zt.transpose();
    sq.colwise() += Zc.rowwise().squaredNorm();
    sq.rowwise() += Zt.rowwise().squaredNorm().transpose();
    const double sf2 = params_.sigma_f * params_.sigma_f;
    const Eigen::MatrixXd Kc = sf2 * (-0.5 * sq.array().max(0.0)).exp();
    mean = (Kc * alpha_).array() + prior_mean_;
    const Eigen::VectorXd reduction = ((Kc * k_pinv_).array() * Kc.array()).rowwise().sum();
    sigma = (sf2 - reduction.array()).max(0.0).sqrt();
}

double log_marginal_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double prior_mean,
                               const KernelParams& params) {
    check_lengths(static_cast<std::size_t>(X.cols()), params, "likelihood lengths");
    LikelihoodEvaluator lml(X, y, prior_mean, params.sigma_f);
    return lml(params.lengths);
}

FitResult fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const FitOptions& options, RngStream& rng,
              const std::vector<double>* warm_start) {
    if (X.rows() == 0 || y.size() == 0) throw Error("GP fit: empty training set");
    if (X.rows() != y.size()) throw DimensionError(static_cast<std::size_t>(X.rows()), static_cast<std::size_t>(y.size()), "GP fit targets");
    if (!X.allFinite() || !y.allFinite()) throw Error("GP fit: non-finite training data");

    const auto dim = static_cast<std::size_t>(X.cols());
    const double prior_mean = y.mean();
    const double sigma_f = std::clamp(population_std(y, prior_mean), options.sigma_f_floor, options.sigma_f_ceiling);

    const double log_lo = std::log(options.length_lower);
    const double log_hi = std::log(options.length_upper);
    const std::size_t free_dims = options.ard ? dim : 1;

    LikelihoodEvaluator lml(X, y, prior_mean, sigma_f, options.profile_sigma_f);
    std::vector<double> lengths(dim);
    const auto expand = [&](const std::vector<double>& z) {
        for (std::size_t d = 0; d < dim; ++d) lengths[d] = std::exp(std::clamp(z[options.ard ? d : 0], log_lo, log_hi));
        return lengths;
    };
    const auto objective = [&](const std::vector<double>& z) { return -lml(expand(z)); };

    // Restart seeds in log space.
    std::vector<std::vector<double>> seeds;
    if (warm_start && warm_start->size() == dim) {
        std::vector<double> z(free_dims);
        if (options.ard) {
            for (std::size_t d = 0; d < dim; ++d) z[d] = std::log((*warm_start)[d]);
        } else {
            double acc = 0.0;
            for (double l : *warm_start) acc += std::log(l);
            z[0] = acc / static_cast<double>(dim);
        }
        seeds.push_back(std::move(z));
    }
    if (seeds.size() < options.restarts) seeds.emplace_back(free_dims, std::log(options.isotropic_guess));
    // Random seeds are log-uniform over [0.1, 10] clipped to the bounds.
    const double rand_lo = std::max(log_lo, std::log(0.1));
    const double rand_hi = std::min(log_hi, std::log(10.0));
    while (seeds.size() < std::max<std::size_t>(options.restarts, 1)) {
        std::vector<double> z(free_dims);
        for (double& v : z) v = rng.uniform(rand_lo, rand_hi);
        seeds.push_back(std::move(z));
    }

    FitResult result;
    result.initial_log_likelihood = -std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_z = seeds.front();
    BoundedAscent ascent(lml, options.ard, log_lo, log_hi, options.max_evals);
    for (const auto& seed : seeds) {
        const double start_value = -objective(seed);
        result.initial_log_likelihood = std::max(result.initial_log_likelihood, start_value);
        std::vector<double> z;
        double value;
        if (options.method == FitMethod::simplex) {
            const auto nm = nelder_mead(objective, seed, kSimplexStep, options.max_evals);
            result.evaluations += nm.evaluations;
            z = nm.x;
            value = nm.value;
        } else {
            const auto r = ascent.run(seed);
            result.evaluations += r.evaluations;
            z = r.log_lengths;
            value = -r.value;
        }
        // The search never ends below its starting point.
        if (!(value <= -start_value)) {
            z = seed;
            value = -start_value;
        }
        if (value < best) {
            best = value;
            best_z = z;
        }
    }

    double fitted_sigma_f = sigma_f;
    if (options.profile_sigma_f) {
        double sf2 = sigma_f * sigma_f;
        (void)lml.evaluate(expand(best_z), nullptr, &sf2);
        fitted_sigma_f = std::clamp(std::sqrt(sf2), options.sigma_f_floor, options.sigma_f_ceiling);
    }
    KernelParams params{fitted_sigma_f, expand(best_z)};
    result.log_likelihood = -best;
    result.model = GpModel::with_params(X, y, prior_mean, std::move(params), options.svd_tau);
    return result;
}

} // namespace mggpo::gp
