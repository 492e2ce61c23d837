#include "mggpo/variation.hpp"

#include <algorithm>
#include <cmath>

namespace mggpo::variation {

namespace {

constexpr double kMinSpan = 1e-14;

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

} // namespace

double sbx_spread(double u, double eta_c) {
    const double e = 1.0 / (eta_c + 1.0);
    if (u <= 0.5) return std::pow(2.0 * u, e);
    return std::pow(1.0 / (2.0 * (1.0 - u)), e);
}

std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1, const DecisionVector& p2,
                                                        const SbxOptions& options, RngStream& rng) {
    if (p1.size() != p2.size()) throw DimensionError(p1.size(), p2.size(), "sbx_crossover");
    DecisionVector c1 = p1;
    DecisionVector c2 = p2;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        // All draws are consumed for every variable so streams stay aligned.
        const bool apply = rng.uniform() < options.per_variable;
        const double u = rng.uniform();
        const bool exchange = options.swap && rng.coin();
        if (!apply || std::abs(p1[i] - p2[i]) < kMinSpan) continue;
        const double beta = sbx_spread(u, options.eta_c);
        const double mid = 0.5 * (p1[i] + p2[i]);
        const double half = 0.5 * beta * (p2[i] - p1[i]);
        c1[i] = clip01(exchange ? mid + half : mid - half);
        c2[i] = clip01(exchange ? mid - half : mid + half);
    }
    return {std::move(c1), std::move(c2)};
}

double polynomial_perturb(double x, double u, double eta_m, MutationBounds bounds) {
    const double pw = 1.0 / (eta_m + 1.0);
    double dq;
    if (bounds == MutationBounds::clipped) {
        dq = u < 0.5 ? std::pow(2.0 * u, pw) - 1.0 : 1.0 - std::pow(2.0 * (1.0 - u), pw);
        return clip01(x + dq);
    }
    if (u < 0.5) {
        const double xy = 1.0 - x;  // 1 - distance to the lower bound
        const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta_m + 1.0);
        dq = std::pow(val, pw) - 1.0;
    } else {
        const double xy = x;  // 1 - distance to the upper bound
        const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta_m + 1.0);
        dq = 1.0 - std::pow(val, pw);
    }
    return clip01(x + dq);
}

DecisionVector polynomial_mutation(const DecisionVector& x, double eta_m, double p_mut, RngStream& rng,
                                   MutationBounds bounds) {
    DecisionVector out = x;
    for (double& v : out) {
        if (rng.uniform() < p_mut) v = polynomial_perturb(v, rng.uniform(), eta_m, bounds);
    }
    return out;
}

void VariationParams::validate() const {
    if (!(eta_c > 0.0)) throw ConfigError("eta_c must be positive");
    if (!(eta_m > 0.0)) throw ConfigError("eta_m must be positive");
    if (p_mut > 1.0) throw ConfigError("p_mut must be in (0, 1]");
    if (!(sbx_per_variable >= 0.0 && sbx_per_variable <= 1.0)) throw ConfigError("sbx per-variable probability must be in [0, 1]");
}

std::vector<DecisionVector> generate_candidates(const std::vector<DecisionVector>& parents, const VariationParams& params,
                                                RngStream& rng) {
    std::vector<DecisionVector> out;
    if (parents.empty()) return out;
    const std::size_t dim = parents.front().size();
    const double p_mut = params.mutation_rate(dim);
    const SbxOptions sbx{params.eta_c, params.sbx_per_variable, params.sbx_swap};
    out.reserve((params.m1 + params.m2) * parents.size());
    for (const auto& parent : parents) {
        for (std::size_t k = 0; k < params.m1; ++k) out.push_back(polynomial_mutation(parent, params.eta_m, p_mut, rng, params.mutation_bounds));
        for (std::size_t k = 0; k < params.m2; ++k) {
            const auto& partner = parents[rng.below(parents.size())];
            auto children = sbx_crossover(parent, partner, sbx, rng);
            out.push_back(rng.coin() ? std::move(children.first) : std::move(children.second));
        }
    }
    return out;
}

} // namespace mggpo::variation
