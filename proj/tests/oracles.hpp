#pragma once

// Independent reference implementations used to cross-check the library.
// Nothing here calls into mggpo beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vec = std::vector<double>;

inline bool dominates(const Vec& a, const Vec& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        strict = strict || a[i] < b[i];
    }
    return strict;
}

/// Repeatedly strip the points nobody left dominates. O(n^2 * fronts).
inline std::vector<std::vector<std::size_t>> peel_fronts(const std::vector<Vec>& pts) {
    std::vector<std::size_t> left(pts.size());
    std::iota(left.begin(), left.end(), 0);
    std::vector<std::vector<std::size_t>> fronts;
    while (!left.empty()) {
        std::vector<std::size_t> front, rest;
        for (std::size_t i : left) {
            bool beaten = false;
            for (std::size_t j : left) beaten = beaten || dominates(pts[j], pts[i]);
            (beaten ? rest : front).push_back(i);
        }
        fronts.push_back(front);
        left = rest;
    }
    return fronts;
}

struct DenseGp {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    double mu = 0.0;
    double sf = 1.0;
    Vec lengths;

    double k(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) const {
        double r = 0.0;
        for (Eigen::Index d = 0; d < a.size(); ++d) {
            const double t = (a(d) - b(d)) / lengths[static_cast<std::size_t>(d)];
            r += t * t;
        }
        return sf * sf * std::exp(-0.5 * r);
    }

    Eigen::MatrixXd gram() const {
        const auto n = X.rows();
        Eigen::MatrixXd K(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) K(i, j) = k(X.row(i), X.row(j));
        return K;
    }

    /// Mean and variance by direct LU solves, no factor reuse.
    std::pair<double, double> predict(const Eigen::RowVectorXd& x) const {
        const Eigen::MatrixXd K = gram();
        Eigen::VectorXd kv(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) kv(i) = k(x, X.row(i));
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
        const Eigen::VectorXd a = lu.solve(y - Eigen::VectorXd::Constant(y.size(), mu));
        const Eigen::VectorXd b = lu.solve(kv);
        return {mu + kv.dot(a), sf * sf - kv.dot(b)};
    }
};

/// Two-sided exact rank-sum p-value by enumerating every way to pick the
/// first sample's positions from the pooled midranks.
inline double rank_sum_p_enumerated(const Vec& a, const Vec& b) {
    Vec pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t N = pooled.size();
    Vec rank(N);
    for (std::size_t i = 0; i < N; ++i) {
        double less = 0.0, equal = 0.0;
        for (double v : pooled) {
            less += v < pooled[i];
            equal += v == pooled[i];
        }
        rank[i] = less + (equal + 1.0) / 2.0;
    }
    const std::size_t n = a.size();
    double observed = 0.0;
    for (std::size_t i = 0; i < n; ++i) observed += rank[i];
    const double centre = static_cast<double>(n) * static_cast<double>(N + 1) / 2.0;
    const double dev = std::abs(observed - centre);

    std::vector<bool> pick(N, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n), true);
    std::uint64_t total = 0, extreme = 0;
    // prev_permutation over a sorted-descending mask visits every subset once.
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            if (pick[i]) s += rank[i];
        ++total;
        extreme += std::abs(s - centre) >= dev - 1e-9;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return static_cast<double>(extreme) / static_cast<double>(total);
}

/// Monte Carlo hypervolume in the box [lo, ref]; returns (estimate, standard error).
/// A sample is covered when some point with f1 <= p0 has f2 <= p1, found by a
/// prefix minimum over the f1-sorted front.
inline std::pair<double, double> hv_monte_carlo(std::vector<Vec> front, const Vec& lo, const Vec& ref,
                                                std::size_t samples, std::uint64_t seed) {
    std::sort(front.begin(), front.end());
    Vec f1(front.size()), best(front.size());
    for (std::size_t i = 0; i < front.size(); ++i) {
        f1[i] = front[i][0];
        best[i] = i ? std::min(best[i - 1], front[i][1]) : front[i][1];
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u0(lo[0], ref[0]), u1(lo[1], ref[1]);
    std::size_t hit = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double p0 = u0(gen), p1 = u1(gen);
        const auto k = static_cast<std::size_t>(std::upper_bound(f1.begin(), f1.end(), p0) - f1.begin());
        hit += k > 0 && best[k - 1] <= p1;
    }
    const double box = (ref[0] - lo[0]) * (ref[1] - lo[1]);
    const double p = static_cast<double>(hit) / static_cast<double>(samples);
    return {box * p, box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

/// Mean of the SBX spread factor for index eta by midpoint quadrature of
/// its density: (eta+1)/2 b^eta on [0,1], (eta+1)/2 b^-(eta+2) above.
inline double sbx_beta_mean(double eta) {
    const std::size_t steps = 2000000;
    double lower = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double b = (static_cast<double>(i) + 0.5) / static_cast<double>(steps);
        lower += b * 0.5 * (eta + 1.0) * std::pow(b, eta);
    }
    lower /= static_cast<double>(steps);
    // Upper branch with the substitution b = 1/t, t in (0,1].
    double upper = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(steps);
        const double b = 1.0 / t;
        upper += b * 0.5 * (eta + 1.0) * std::pow(b, -(eta + 2.0)) / (t * t);
    }
    upper /= static_cast<double>(steps);
    return lower + upper;
}

} // namespace oracle
