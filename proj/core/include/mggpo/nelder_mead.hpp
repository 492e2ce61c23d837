#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mggpo {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Minimizes `f` from `start` with an axis-aligned initial simplex of edge `step`.
/// Stops after `max_evals` objective calls (initial simplex included) or when
/// the simplex value spread drops below `ftol`. The returned value is never
/// worse than f(start).
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double step, std::size_t max_evals,
                             double ftol = 1e-10);

} // namespace mggpo
