#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mggpo/core.hpp"
#include "mggpo/gp.hpp"
#include "mggpo/record.hpp"
#include "mggpo/rng.hpp"
#include "mggpo/selection.hpp"
#include "mggpo/variation.hpp"

namespace mggpo {

struct MggpoConfig {
    std::size_t population = 80;
    std::size_t generations = 50;
    variation::VariationParams variation;
    double kappa_initial = 2.0;
    double rho = 0.85;
    gp::FitOptions gp;
    /// Cut of the last admitted front when reselecting the elite. The candidate
    /// pick always uses one-shot crowding.
    selection::Truncation truncation = selection::Truncation::iterative;
    std::uint64_t seed = 1;
    /// Test hook: score candidates with the true objectives instead of the
    /// surrogate. These evaluations are not counted.
    bool score_with_truth = false;

    void validate() const;
};

/// Loop state between generations. Everything needed for an exact resume.
struct GenerationState {
    std::size_t generation = 0;
    Population elite;   // best N so far
    Population latest;  // solutions evaluated in this generation
    std::vector<gp::GpModel> models;  // one per objective, trained on latest + elite
    gp::KappaSchedule kappa;
    EvalCounter counter;
    RngStream variation_rng;
    RngStream gp_rng;
    std::vector<std::string> warnings;  // raised during the last transition
};

/// Draw and evaluate N uniform points and fit the initial models.
[[nodiscard]] GenerationState initialize(const ProblemSpec& problem, const MggpoConfig& config);

/// One generation: decay kappa, generate (m1+m2)N candidates from the elite,
/// pick N by non-dominated sorting of their LCB vectors under the previous
/// models, evaluate them, reselect the elite from elite + new, and refit.
/// A failed refit keeps the previous models and records a warning.
[[nodiscard]] GenerationState step(GenerationState state, const ProblemSpec& problem, const MggpoConfig& config);

[[nodiscard]] GenerationRecord snapshot(const GenerationState& state);

/// initialize + `config.generations` steps; one record per generation
/// including the initial one. The observer sees each record as it is made.
std::vector<GenerationRecord> run_mggpo(const ProblemSpec& problem, const MggpoConfig& config,
                                        const Observer& observer = {});

/// Continue a loaded state up to `config.generations`.
std::vector<GenerationRecord> resume_mggpo(GenerationState state, const ProblemSpec& problem,
                                           const MggpoConfig& config, const Observer& observer = {});

// Checkpoints are versioned JSON documents.
inline constexpr int kCheckpointSchemaVersion = 1;
[[nodiscard]] std::string checkpoint_to_json(const GenerationState& state);
[[nodiscard]] GenerationState checkpoint_from_json(const std::string& text);
void save_checkpoint(const GenerationState& state, const std::string& path);
[[nodiscard]] GenerationState load_checkpoint(const std::string& path);

} // namespace mggpo
