#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mggpo/error.hpp"

namespace mggpo {

/// Point in the (normalized) decision space.
using DecisionVector = std::vector<double>;
/// Objective values, minimization sense.
using ObjectiveVector = std::vector<double>;

/// Objective value assigned to every component when an evaluation yields NaN/Inf.
inline constexpr double kFailedObjective = 1e30;

struct Individual {
    DecisionVector x;
    std::optional<ObjectiveVector> f;
    std::uint64_t eval_index = 0;
    bool eval_failed = false;

    Individual() = default;
    explicit Individual(DecisionVector x_) : x(std::move(x_)) {}

    [[nodiscard]] bool evaluated() const noexcept { return f.has_value(); }
    [[nodiscard]] const ObjectiveVector& objectives() const { return f.value(); }
};

/// Ordered multiset of individuals with a target size.
struct Population {
    std::vector<Individual> members;
    std::size_t capacity = 0;

    [[nodiscard]] std::size_t size() const noexcept { return members.size(); }
    [[nodiscard]] bool empty() const noexcept { return members.empty(); }
    [[nodiscard]] std::vector<ObjectiveVector> objectives() const;
    [[nodiscard]] std::vector<DecisionVector> decisions() const;
};

using EvaluateFn = std::function<ObjectiveVector(std::span<const double>)>;

struct ProblemSpec {
    std::string name;
    std::size_t dimension = 0;
    std::size_t objectives = 0;
    std::vector<double> lower;
    std::vector<double> upper;
    /// Must be pure and deterministic.
    EvaluateFn evaluate;

    /// Throws ConfigError when bounds are inconsistent.
    void validate() const;
};

/// Monotone global evaluation counter.
class EvalCounter {
public:
    explicit EvalCounter(std::uint64_t start = 0) : count_(start) {}
    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
    std::uint64_t claim() noexcept { return count_++; }

private:
    std::uint64_t count_;
};

/// Affine map of a raw vector into [0,1]^P. Throws BoundsError naming the
/// first offending dimension.
[[nodiscard]] DecisionVector normalize(std::span<const double> raw, const ProblemSpec& spec);
[[nodiscard]] std::vector<double> denormalize(std::span<const double> unit, const ProblemSpec& spec);

/// Evaluate every individual in order, assigning consecutive eval indices.
/// Individuals carry normalized decision vectors; the problem sees raw values.
/// Non-finite objective components are replaced by kFailedObjective and the
/// individual is flagged.
std::vector<Individual> evaluate_batch(std::vector<Individual> batch, const ProblemSpec& spec, EvalCounter& counter);

/// Population of `n` points drawn uniformly from [0,1]^P (unevaluated).
class RngStream;
[[nodiscard]] std::vector<Individual> uniform_individuals(std::size_t n, std::size_t dimension, RngStream& rng);

} // namespace mggpo
