#include "mggpo/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mggpo {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                             double step, std::size_t max_evals, double ftol) {
    const std::size_t dim = start.size();
    std::size_t evals = 0;
    const auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> simplex(dim + 1, start);
    std::vector<double> values(dim + 1);
    values[0] = eval(start);
    for (std::size_t i = 0; i < dim && evals < max_evals; ++i) {
        simplex[i + 1][i] += step;
        values[i + 1] = eval(simplex[i + 1]);
    }
    // Budget ran out while building the simplex: keep the best vertex seen.
    std::size_t live = std::min(dim + 1, evals);

    std::vector<std::size_t> order(live);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);

    const auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t, std::vector<double>& out) {
        for (std::size_t j = 0; j < dim; ++j) out[j] = a[j] + t * (b[j] - a[j]);
    };

    while (live == dim + 1 && evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];
        if (std::isfinite(values[worst]) && std::abs(values[worst] - values[best]) <= ftol * (1.0 + std::abs(values[best])))
            break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        // reflection
        blend(centroid, simplex[worst], -1.0, trial);
        const double fr = eval(trial);
        if (fr < values[best]) {
            if (evals >= max_evals) {
                simplex[worst] = trial;
                values[worst] = fr;
                break;
            }
            blend(centroid, simplex[worst], -2.0, trial2);
            const double fe = eval(trial2);
            if (fe < fr) {
                simplex[worst] = trial2;
                values[worst] = fe;
            } else {
                simplex[worst] = trial;
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second]) {
            simplex[worst] = trial;
            values[worst] = fr;
            continue;
        }
        if (evals >= max_evals) break;
        // contraction, outside or inside
        const bool outside = fr < values[worst];
        blend(centroid, outside ? trial : simplex[worst], 0.5, trial2);
        const double fc = eval(trial2);
        if (fc < (outside ? fr : values[worst])) {
            simplex[worst] = trial2;
            values[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= dim && evals < max_evals; ++i) {
            if (i == best) continue;
            blend(simplex[best], simplex[i], 0.5, simplex[i]);
            values[i] = eval(simplex[i]);
        }
    }

    const auto it = std::min_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(live));
    const auto idx = static_cast<std::size_t>(it - values.begin());
    return {simplex[idx], values[idx], evals};
}

} // namespace mggpo
