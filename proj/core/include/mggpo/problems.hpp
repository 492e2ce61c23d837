#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mggpo/core.hpp"

namespace mggpo::problems {

// ZDT test functions on [0,1]^P with two minimized objectives.
// Each throws DimensionError for P < 2.
[[nodiscard]] ObjectiveVector zdt1(std::span<const double> x);
[[nodiscard]] ObjectiveVector zdt2(std::span<const double> x);
[[nodiscard]] ObjectiveVector zdt3(std::span<const double> x);
[[nodiscard]] ObjectiveVector zdt6(std::span<const double> x);

/// Problem ids accepted by make_problem / reference_front.
[[nodiscard]] const std::vector<std::string>& known_problems();

/// Builds the problem with unit bounds. Throws ConfigError for an unknown id.
[[nodiscard]] ProblemSpec make_problem(std::string_view id, std::size_t dimension);

inline constexpr std::size_t kDefaultFrontResolution = 1000;
/// Grid density used to extract fronts by dominance filtering.
inline constexpr std::size_t kFrontGridPoints = 100000;

/// Analytic Pareto front sample, mutually non-dominated, ascending in f1.
struct ReferenceFront {
    std::string problem;
    std::vector<ObjectiveVector> points;

    [[nodiscard]] std::size_t resolution() const noexcept { return points.size(); }
};

[[nodiscard]] ReferenceFront reference_front(std::string_view id, std::size_t resolution = kDefaultFrontResolution);

} // namespace mggpo::problems
