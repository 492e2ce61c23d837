#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "mggpo/core.hpp"
#include "mggpo/rng.hpp"

namespace mggpo::variation {

struct SbxOptions {
    double eta_c = 20.0;
    /// Probability that an individual variable is recombined.
    double per_variable = 0.5;
    /// Exchange the two children's values per variable with probability 0.5.
    bool swap = true;
};

/// Spread factor beta for a uniform draw u in [0,1): (2u)^(1/(eta+1)) below
/// one half, (1/(2(1-u)))^(1/(eta+1)) above.
[[nodiscard]] double sbx_spread(double u, double eta_c);

/// Simulated binary crossover on [0,1]^P. Recombined variables become
/// mean -/+ beta*|p1-p2|/2, clipped to [0,1]; others are inherited unchanged.
[[nodiscard]] std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1, const DecisionVector& p2,
                                                                      const SbxOptions& options, RngStream& rng);

enum class MutationBounds {
    bounded,  // the perturbation density is rescaled to stay inside [0,1]
    clipped,  // plain polynomial step on the unit range, then clipped
};

/// Polynomial perturbation of a single variable in [0,1] for a uniform draw u.
[[nodiscard]] double polynomial_perturb(double x, double u, double eta_m,
                                        MutationBounds bounds = MutationBounds::bounded);

/// Each variable is perturbed independently with probability p_mut.
[[nodiscard]] DecisionVector polynomial_mutation(const DecisionVector& x, double eta_m, double p_mut, RngStream& rng,
                                                 MutationBounds bounds = MutationBounds::bounded);

struct VariationParams {
    double eta_c = 20.0;
    double eta_m = 20.0;
    std::size_t m1 = 20;  // mutants per parent
    std::size_t m2 = 20;  // crossover children per parent
    double p_mut = 0.0;   // <= 0 means max(1/P, kDefaultMutationFloor)
    double sbx_per_variable = 0.5;
    bool sbx_swap = true;
    MutationBounds mutation_bounds = MutationBounds::clipped;

    void validate() const;
    [[nodiscard]] double mutation_rate(std::size_t dimension) const {
        return p_mut > 0.0 ? p_mut : std::max(1.0 / static_cast<double>(dimension), kDefaultMutationFloor);
    }

    static constexpr double kDefaultMutationFloor = 0.15;
};

/// (m1 + m2) candidates per parent, parent-major: m1 mutants of the parent,
/// then m2 SBX children against partners drawn uniformly from all parents,
/// keeping one child of each pair at random.
[[nodiscard]] std::vector<DecisionVector> generate_candidates(const std::vector<DecisionVector>& parents,
                                                              const VariationParams& params, RngStream& rng);

} // namespace mggpo::variation
