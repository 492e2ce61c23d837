#pragma once

#include <cstddef>
#include <vector>

#include "mggpo/core.hpp"

namespace mggpo::selection {

/// Pareto dominance for minimization. Throws DimensionError on length mismatch.
[[nodiscard]] bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

struct SortedFronts {
    std::vector<std::vector<std::size_t>> fronts;  // front 0 is non-dominated, indices ascending
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

/// Fast non-dominated sort plus per-front crowding distance.
[[nodiscard]] SortedFronts non_dominated_sort(const std::vector<ObjectiveVector>& objs);

/// Crowding distance of the members of one front (indices into objs),
/// returned in the same order as `front`. Boundary points get +inf and an
/// objective with zero range contributes nothing.
[[nodiscard]] std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& objs,
                                                    const std::vector<std::size_t>& front);

/// How the last, partially admitted front is cut down.
enum class Truncation {
    one_shot,   // rank by crowding computed once over the whole front
    iterative,  // drop the most crowded member and recompute, until it fits
};

/// Indices of the N best vectors: whole fronts in rank order, the last one
/// truncated by descending crowding distance, ties to the lower index.
/// Returned sorted by (rank, -crowding, index); with iterative truncation the
/// last front keeps ascending index order. Throws Error if objs.size() < n.
[[nodiscard]] std::vector<std::size_t> select_best(const std::vector<ObjectiveVector>& objs, std::size_t n,
                                                   Truncation truncation = Truncation::one_shot);

/// Indices of the non-dominated members (front 0), ascending.
[[nodiscard]] std::vector<std::size_t> non_dominated_indices(const std::vector<ObjectiveVector>& objs);

} // namespace mggpo::selection
