#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mggpo/core.hpp"
#include "mggpo/problems.hpp"

namespace mggpo::metrics {

/// Exact area dominated by `front` inside the box bounded by `ref`. Points
/// not strictly better than `ref` in both objectives contribute nothing.
/// Throws DimensionError unless every vector has two components.
[[nodiscard]] double hypervolume_2d(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref);

/// Mean distance from each reference point to its nearest front point.
/// Throws Error on empty inputs.
[[nodiscard]] double igd(const std::vector<ObjectiveVector>& front, const std::vector<ObjectiveVector>& reference);
[[nodiscard]] inline double igd(const std::vector<ObjectiveVector>& front, const problems::ReferenceFront& reference) {
    return igd(front, reference.points);
}

struct IndicatorResult {
    double hv = 0.0;
    double igd = 0.0;
    std::uint64_t eval_count = 0;
    ObjectiveVector reference_point;
};

// -- Wilcoxon rank-sum ------------------------------------------------------

/// Samples with min(n, m) up to this size get an exact p-value.
inline constexpr std::size_t kExactRankSumLimit = 10;

struct RankSumResult {
    double rank_sum_a = 0.0;  // sum of midranks of sample a
    double p_value = 1.0;     // two-sided
    bool exact = false;
};

/// Two-sided rank-sum test with midranks for ties. Exact permutation
/// distribution (conditional on ties) for small samples, normal approximation
/// with tie and continuity correction otherwise.
[[nodiscard]] RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b);

enum class Direction { minimize, maximize };
enum class Outcome { win_a, win_b, no_winner };

/// Significant (p < alpha) difference decided by the better median; the mean
/// rank breaks equal medians. Samples need at least 3 values each.
[[nodiscard]] Outcome wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double alpha = 0.05,
                                        Direction direction = Direction::minimize);

/// Outcome coded 1 (a wins), 0, -1.
[[nodiscard]] int outcome_code(Outcome o) noexcept;

[[nodiscard]] double median(std::vector<double> v);

} // namespace mggpo::metrics
