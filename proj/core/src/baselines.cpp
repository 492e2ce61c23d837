#include "mggpo/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "mggpo/selection.hpp"
#include "mggpo/variation.hpp"

namespace mggpo::baselines {

namespace {

using Clock = std::chrono::steady_clock;

double rate_or_default(double p, std::size_t dim) { return p > 0.0 ? p : 1.0 / static_cast<double>(dim); }

std::vector<ObjectiveVector> objectives_of(const std::vector<Individual>& v) {
    std::vector<ObjectiveVector> out;
    out.reserve(v.size());
    for (const auto& ind : v) out.push_back(ind.objectives());
    return out;
}

template <class State, class Step, class Snapshot>
std::vector<GenerationRecord> drive(State state, std::size_t generations, const Observer& observer, Step&& step_fn,
                                    Snapshot&& snap, Clock::time_point t0) {
    std::vector<GenerationRecord> records;
    const auto emit = [&](const State& s) {
        auto rec = snap(s);
        rec.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (observer) observer(rec);
        records.push_back(std::move(rec));
    };
    emit(state);
    while (state.generation < generations) {
        state = step_fn(std::move(state));
        emit(state);
    }
    return records;
}

} // namespace

void Nsga2Config::validate() const {
    if (population < 2) throw ConfigError("population must be >= 2");
    if (!(p_crossover >= 0.0 && p_crossover <= 1.0)) throw ConfigError("p_crossover must be in [0, 1]");
    if (!(p_mut <= 1.0)) throw ConfigError("p_mut must be <= 1");
    if (!(eta_c > 0.0 && eta_m > 0.0)) throw ConfigError("distribution indices must be positive");
}

Nsga2State nsga2_initialize(const ProblemSpec& problem, const Nsga2Config& config) {
    config.validate();
    problem.validate();
    Nsga2State s;
    s.rng = RngStream::split(config.seed, "nsga2/variation");
    auto init_rng = RngStream::split(config.seed, "init");
    s.population.capacity = config.population;
    s.population.members = evaluate_batch(uniform_individuals(config.population, problem.dimension, init_rng), problem, s.counter);
    s.offspring.capacity = config.population;
    return s;
}

Nsga2State nsga2_step(Nsga2State s, const ProblemSpec& problem, const Nsga2Config& config) {
    ++s.generation;
    const std::size_t n = config.population;
    const auto& parents = s.population.members;
    const auto sorted = selection::non_dominated_sort(s.population.objectives());

    std::vector<std::size_t> pool(n);
    for (auto& slot : pool) {
        const auto a = static_cast<std::size_t>(s.rng.below(parents.size()));
        const auto b = static_cast<std::size_t>(s.rng.below(parents.size()));
        if (sorted.rank[a] != sorted.rank[b]) slot = sorted.rank[a] < sorted.rank[b] ? a : b;
        else if (sorted.crowding[a] != sorted.crowding[b]) slot = sorted.crowding[a] > sorted.crowding[b] ? a : b;
        else slot = s.rng.coin() ? a : b;
    }

    const double p_mut = rate_or_default(config.p_mut, problem.dimension);
    const variation::SbxOptions sbx{config.eta_c, config.sbx_per_variable, config.sbx_swap};
    std::vector<Individual> children;
    children.reserve(n);
    for (std::size_t i = 0; children.size() < n; i += 2) {
        const auto& p1 = parents[pool[i % n]].x;
        const auto& p2 = parents[pool[(i + 1) % n]].x;
        std::pair<DecisionVector, DecisionVector> kids{p1, p2};
        if (s.rng.uniform() < config.p_crossover) kids = variation::sbx_crossover(p1, p2, sbx, s.rng);
        children.emplace_back(variation::polynomial_mutation(kids.first, config.eta_m, p_mut, s.rng));
        if (children.size() < n) children.emplace_back(variation::polynomial_mutation(kids.second, config.eta_m, p_mut, s.rng));
    }
    s.offspring.members = evaluate_batch(std::move(children), problem, s.counter);

    std::vector<Individual> combined = s.population.members;
    combined.insert(combined.end(), s.offspring.members.begin(), s.offspring.members.end());
    const auto keep = selection::select_best(objectives_of(combined), n);
    Population next;
    next.capacity = n;
    for (std::size_t i : keep) next.members.push_back(combined[i]);
    s.population = std::move(next);
    return s;
}

std::vector<GenerationRecord> nsga2_run(const ProblemSpec& problem, const Nsga2Config& config, const Observer& observer) {
    const auto t0 = Clock::now();
    return drive(
        nsga2_initialize(problem, config), config.generations, observer,
        [&](Nsga2State s) { return nsga2_step(std::move(s), problem, config); },
        [](const Nsga2State& s) {
            GenerationRecord r;
            r.generation = s.generation;
            r.eval_count = s.counter.count();
            r.front = population_front(s.population);
            return r;
        },
        t0);
}

void MopsoConfig::validate() const {
    if (population < 1) throw ConfigError("population must be >= 1");
    if (!(w >= 0.0 && w < 1.0)) throw ConfigError("inertia w must be in [0, 1)");
    if (!(r1 >= 0.0 && r2 >= 0.0)) throw ConfigError("attraction weights must be >= 0");
    if (!(v_max > 0.0)) throw ConfigError("v_max must be positive");
    if (!(p_mut <= 1.0)) throw ConfigError("p_mut must be <= 1");
    if (!(eta_m > 0.0)) throw ConfigError("eta_m must be positive");
}

Population update_archive(const Population& archive, const std::vector<Individual>& candidates, std::size_t capacity) {
    std::vector<Individual> pool = archive.members;
    pool.insert(pool.end(), candidates.begin(), candidates.end());
    std::vector<Individual> unique;
    for (auto& ind : pool) {
        const bool seen = std::any_of(unique.begin(), unique.end(),
                                      [&](const Individual& u) { return u.objectives() == ind.objectives(); });
        if (!seen) unique.push_back(std::move(ind));
    }
    const auto objs = objectives_of(unique);
    std::vector<Individual> front;
    std::vector<ObjectiveVector> front_objs;
    for (std::size_t i : selection::non_dominated_indices(objs)) {
        front.push_back(unique[i]);
        front_objs.push_back(objs[i]);
    }
    Population out;
    out.capacity = capacity;
    if (front.size() <= capacity) {
        out.members = std::move(front);
        return out;
    }
    auto keep = selection::select_best(front_objs, capacity);
    std::sort(keep.begin(), keep.end());
    for (std::size_t i : keep) out.members.push_back(front[i]);
    return out;
}

MopsoState mopso_initialize(const ProblemSpec& problem, const MopsoConfig& config) {
    config.validate();
    problem.validate();
    MopsoState s;
    s.rng = RngStream::split(config.seed, "mopso/motion");
    auto init_rng = RngStream::split(config.seed, "init");
    auto evaluated = evaluate_batch(uniform_individuals(config.population, problem.dimension, init_rng), problem, s.counter);
    for (auto& ind : evaluated) {
        Particle p;
        p.x = ind.x;
        p.v.assign(problem.dimension, 0.0);
        p.current = ind;
        p.pbest = ind;
        s.swarm.push_back(std::move(p));
    }
    const std::size_t cap = config.archive_capacity ? config.archive_capacity : config.population;
    s.archive = update_archive(Population{{}, cap}, evaluated, cap);
    return s;
}

MopsoState mopso_step(MopsoState s, const ProblemSpec& problem, const MopsoConfig& config) {
    ++s.generation;
    const std::size_t dim = problem.dimension;
    const double p_mut = rate_or_default(config.p_mut, dim);

    // Leaders: the less crowded half of the archive, most isolated first.
    const auto archive_objs = s.archive.objectives();
    std::vector<std::size_t> all(archive_objs.size());
    std::iota(all.begin(), all.end(), 0);
    const auto crowd = selection::crowding_distance(archive_objs, all);
    std::vector<std::size_t> leaders = all;
    std::stable_sort(leaders.begin(), leaders.end(), [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
    leaders.resize(std::max<std::size_t>(1, (leaders.size() + 1) / 2));

    std::vector<Individual> moved;
    moved.reserve(s.swarm.size());
    for (auto& p : s.swarm) {
        const auto& gbest = s.archive.members[leaders[s.rng.below(leaders.size())]].x;
        for (std::size_t d = 0; d < dim; ++d) {
            const double u1 = s.rng.uniform();
            const double u2 = s.rng.uniform();
            double v = config.w * p.v[d] + config.r1 * u1 * (p.pbest.x[d] - p.x[d]) + config.r2 * u2 * (gbest[d] - p.x[d]);
            v = std::clamp(v, -config.v_max, config.v_max);
            p.v[d] = v;
            p.x[d] = std::clamp(p.x[d] + v, 0.0, 1.0);
        }
        p.x = variation::polynomial_mutation(p.x, config.eta_m, p_mut, s.rng);
        moved.emplace_back(p.x);
    }
    moved = evaluate_batch(std::move(moved), problem, s.counter);
    for (std::size_t i = 0; i < s.swarm.size(); ++i) {
        auto& p = s.swarm[i];
        p.current = moved[i];
        if (selection::dominates(p.current.objectives(), p.pbest.objectives())) p.pbest = p.current;
    }
    s.archive = update_archive(s.archive, moved, s.archive.capacity);
    return s;
}

std::vector<GenerationRecord> mopso_run(const ProblemSpec& problem, const MopsoConfig& config, const Observer& observer) {
    const auto t0 = Clock::now();
    return drive(
        mopso_initialize(problem, config), config.generations, observer,
        [&](MopsoState s) { return mopso_step(std::move(s), problem, config); },
        [](const MopsoState& s) {
            GenerationRecord r;
            r.generation = s.generation;
            r.eval_count = s.counter.count();
            r.front = s.archive.objectives();
            return r;
        },
        t0);
}

} // namespace mggpo::baselines
