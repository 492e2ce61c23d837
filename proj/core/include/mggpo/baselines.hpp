#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mggpo/core.hpp"
#include "mggpo/record.hpp"
#include "mggpo/rng.hpp"

namespace mggpo::baselines {

struct Nsga2Config {
    std::size_t population = 80;
    std::size_t generations = 50;
    double p_crossover = 0.9;
    double eta_c = 20.0;
    double eta_m = 20.0;
    double p_mut = 0.0;  // <= 0 means 1/P
    double sbx_per_variable = 0.5;
    bool sbx_swap = true;
    std::uint64_t seed = 1;

    void validate() const;
};

struct Nsga2State {
    std::size_t generation = 0;
    Population population;
    Population offspring;  // last generation's evaluated offspring
    EvalCounter counter;
    RngStream rng;
};

[[nodiscard]] Nsga2State nsga2_initialize(const ProblemSpec& problem, const Nsga2Config& config);
/// Binary tournament on (rank, crowding), SBX with probability p_crossover
/// per pair, polynomial mutation, then elitist reselection of N from
/// parents + offspring.
[[nodiscard]] Nsga2State nsga2_step(Nsga2State state, const ProblemSpec& problem, const Nsga2Config& config);
std::vector<GenerationRecord> nsga2_run(const ProblemSpec& problem, const Nsga2Config& config,
                                        const Observer& observer = {});

struct MopsoConfig {
    std::size_t population = 80;
    std::size_t generations = 50;
    double w = 0.4;   // inertia
    double r1 = 1.0;  // personal-best attraction
    double r2 = 1.0;  // global-best attraction
    double v_max = 0.5;
    double eta_m = 20.0;
    double p_mut = 0.0;            // <= 0 means 1/P
    std::size_t archive_capacity = 0;  // 0 means population
    std::uint64_t seed = 1;

    void validate() const;
};

struct Particle {
    DecisionVector x;
    std::vector<double> v;
    Individual current;
    Individual pbest;
};

struct MopsoState {
    std::size_t generation = 0;
    std::vector<Particle> swarm;
    /// Mutually non-dominated external archive; this is the reported population.
    Population archive;
    EvalCounter counter;
    RngStream rng;
};

[[nodiscard]] MopsoState mopso_initialize(const ProblemSpec& problem, const MopsoConfig& config);
/// v <- w v + r1 u1 (pbest - x) + r2 u2 (gbest - x), clamped to v_max;
/// x <- clip(x + v), then polynomial mutation. gbest is drawn uniformly from
/// the less crowded half of the archive; pbest moves only when dominated.
[[nodiscard]] MopsoState mopso_step(MopsoState state, const ProblemSpec& problem, const MopsoConfig& config);
std::vector<GenerationRecord> mopso_run(const ProblemSpec& problem, const MopsoConfig& config,
                                        const Observer& observer = {});

/// Merge candidates into an archive: keep the non-dominated set (first copy of
/// identical objective vectors) and truncate to `capacity` by crowding distance.
[[nodiscard]] Population update_archive(const Population& archive, const std::vector<Individual>& candidates,
                                        std::size_t capacity);

} // namespace mggpo::baselines
