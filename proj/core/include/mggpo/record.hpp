#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mggpo/core.hpp"

namespace mggpo {

/// Per-generation snapshot emitted by every optimizer.
struct GenerationRecord {
    std::size_t generation = 0;
    std::uint64_t eval_count = 0;
    /// Non-dominated objective vectors of the current population.
    std::vector<ObjectiveVector> front;
    std::optional<double> kappa;
    double wall_time_s = 0.0;
    std::vector<std::string> warnings;
};

using Observer = std::function<void(const GenerationRecord&)>;

/// Objective vectors of the non-dominated members of a population.
[[nodiscard]] std::vector<ObjectiveVector> population_front(const Population& pop);

} // namespace mggpo
