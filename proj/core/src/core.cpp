#include "mggpo/core.hpp"

#include <cmath>

#include "mggpo/rng.hpp"

namespace mggpo {

std::vector<ObjectiveVector> Population::objectives() const {
    std::vector<ObjectiveVector> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.objectives());
    return out;
}

std::vector<DecisionVector> Population::decisions() const {
    std::vector<DecisionVector> out;
    out.reserve(members.size());
    for (const auto& m : members) out.push_back(m.x);
    return out;
}

void ProblemSpec::validate() const {
    if (dimension == 0) throw ConfigError("problem '" + name + "': dimension must be positive");
    if (objectives == 0) throw ConfigError("problem '" + name + "': objective count must be positive");
    if (lower.size() != dimension || upper.size() != dimension)
        throw ConfigError("problem '" + name + "': bound vectors must have length " + std::to_string(dimension));
    for (std::size_t i = 0; i < dimension; ++i) {
        if (!(lower[i] < upper[i]))
            throw ConfigError("problem '" + name + "': lower[" + std::to_string(i) + "] >= upper[" + std::to_string(i) + "]");
    }
    if (!evaluate) throw ConfigError("problem '" + name + "': no evaluation function");
}

DecisionVector normalize(std::span<const double> raw, const ProblemSpec& spec) {
    if (raw.size() != spec.dimension) throw DimensionError(spec.dimension, raw.size(), "normalize");
    DecisionVector out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double lo = spec.lower[i];
        const double hi = spec.upper[i];
        if (!(raw[i] >= lo && raw[i] <= hi)) throw BoundsError(i, raw[i], lo, hi);
        out[i] = (raw[i] - lo) / (hi - lo);
    }
    return out;
}

std::vector<double> denormalize(std::span<const double> unit, const ProblemSpec& spec) {
    if (unit.size() != spec.dimension) throw DimensionError(spec.dimension, unit.size(), "denormalize");
    std::vector<double> out(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) {
        if (!(unit[i] >= 0.0 && unit[i] <= 1.0)) throw BoundsError(i, unit[i], 0.0, 1.0);
        out[i] = spec.lower[i] + unit[i] * (spec.upper[i] - spec.lower[i]);
    }
    return out;
}

std::vector<Individual> evaluate_batch(std::vector<Individual> batch, const ProblemSpec& spec, EvalCounter& counter) {
    for (auto& ind : batch) {
        if (ind.x.size() != spec.dimension) throw DimensionError(spec.dimension, ind.x.size(), "evaluate_batch");
        if (ind.evaluated()) throw Error("evaluate_batch: individual already evaluated (eval_index " + std::to_string(ind.eval_index) + ")");
        ObjectiveVector f = spec.evaluate(denormalize(ind.x, spec));
        if (f.size() != spec.objectives) throw DimensionError(spec.objectives, f.size(), "objective vector");
        bool failed = false;
        for (double& v : f) {
            if (!std::isfinite(v)) {
                v = kFailedObjective;
                failed = true;
            }
        }
        if (failed) {
            for (double& v : f) v = kFailedObjective;
        }
        ind.f = std::move(f);
        ind.eval_failed = failed;
        ind.eval_index = counter.claim();
    }
    return batch;
}

std::vector<Individual> uniform_individuals(std::size_t n, std::size_t dimension, RngStream& rng) {
    std::vector<Individual> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        DecisionVector x(dimension);
        for (double& v : x) v = rng.uniform();
        out.emplace_back(std::move(x));
    }
    return out;
}

} // namespace mggpo
