#include "mggpo/optimizer.hpp"

#include <chrono>

#include "mggpo/selection.hpp"

namespace mggpo {

std::vector<ObjectiveVector> population_front(const Population& pop) {
    const auto objs = pop.objectives();
    std::vector<ObjectiveVector> front;
    for (std::size_t i : selection::non_dominated_indices(objs)) front.push_back(objs[i]);
    return front;
}

void MggpoConfig::validate() const {
    if (population < 2) throw ConfigError("population must be >= 2");
    if (!(kappa_initial >= 0.0)) throw ConfigError("kappa_initial must be >= 0");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("rho must be in (0, 1]");
    if (!(gp.length_lower > 0.0 && gp.length_lower < gp.length_upper))
        throw ConfigError("GP length bounds must satisfy 0 < lower < upper");
    if (gp.restarts == 0) throw ConfigError("GP restarts must be >= 1");
    variation.validate();
}

namespace {

std::vector<gp::GpModel> fit_models(const Population& a, const Population& b, const std::vector<gp::GpModel>* previous,
                                    const MggpoConfig& config, RngStream& rng) {
    std::vector<DecisionVector> xs;
    std::vector<ObjectiveVector> fs;
    for (const auto* pop : {&a, &b}) {
        for (const auto& m : pop->members) {
            xs.push_back(m.x);
            fs.push_back(m.objectives());
        }
    }
    const Eigen::MatrixXd X = gp::to_matrix(xs);
    const std::size_t n_obj = fs.front().size();
    std::vector<gp::GpModel> models;
    models.reserve(n_obj);
    for (std::size_t j = 0; j < n_obj; ++j) {
        Eigen::VectorXd y(static_cast<Eigen::Index>(fs.size()));
        for (std::size_t i = 0; i < fs.size(); ++i) y(static_cast<Eigen::Index>(i)) = fs[i][j];
        const std::vector<double>* warm = (previous && j < previous->size()) ? &(*previous)[j].params().lengths : nullptr;
        models.push_back(gp::fit(X, y, config.gp, rng, warm).model);
    }
    return models;
}

Population take(const std::vector<Individual>& pool, const std::vector<std::size_t>& idx, std::size_t capacity) {
    Population out;
    out.capacity = capacity;
    out.members.reserve(idx.size());
    for (std::size_t i : idx) out.members.push_back(pool[i]);
    return out;
}

} // namespace

GenerationState initialize(const ProblemSpec& problem, const MggpoConfig& config) {
    config.validate();
    problem.validate();
    GenerationState s;
    s.kappa = gp::KappaSchedule::start(config.kappa_initial, config.rho);
    s.variation_rng = RngStream::split(config.seed, "mggpo/variation");
    s.gp_rng = RngStream::split(config.seed, "mggpo/gp");
    auto init_rng = RngStream::split(config.seed, "init");

    s.elite.capacity = config.population;
    s.elite.members = evaluate_batch(uniform_individuals(config.population, problem.dimension, init_rng), problem, s.counter);
    s.latest.capacity = config.population;
    s.models = fit_models(s.elite, s.latest, nullptr, config, s.gp_rng);
    return s;
}

GenerationState step(GenerationState s, const ProblemSpec& problem, const MggpoConfig& config) {
    s.warnings.clear();
    ++s.generation;
    s.kappa = s.kappa.step();
    const double kappa = s.kappa.current;
    const std::size_t n = config.population;

    const auto candidates = variation::generate_candidates(s.elite.decisions(), config.variation, s.variation_rng);
    if (candidates.size() < n) throw ConfigError("m1 + m2 must be >= 1 to produce candidates");

    // Surrogate scores: one LCB per objective.
    std::vector<ObjectiveVector> scores(candidates.size(), ObjectiveVector(problem.objectives));
    if (config.score_with_truth) {
        for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = problem.evaluate(denormalize(candidates[i], problem));
    } else {
        const Eigen::MatrixXd Xc = gp::to_matrix(candidates);
        Eigen::VectorXd mean, sigma;
        for (std::size_t j = 0; j < s.models.size(); ++j) {
            s.models[j].predict_batch(Xc, mean, sigma);
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                const auto r = static_cast<Eigen::Index>(i);
                scores[i][j] = gp::lcb(mean(r), sigma(r), kappa);
            }
        }
    }

    const auto picked = selection::select_best(scores, n, selection::Truncation::one_shot);
    std::vector<Individual> fresh;
    fresh.reserve(n);
    for (std::size_t i : picked) fresh.emplace_back(candidates[i]);
    s.latest.members = evaluate_batch(std::move(fresh), problem, s.counter);
    s.latest.capacity = n;

    std::vector<Individual> pool = s.elite.members;
    pool.insert(pool.end(), s.latest.members.begin(), s.latest.members.end());
    std::vector<ObjectiveVector> objs;
    objs.reserve(pool.size());
    for (const auto& ind : pool) objs.push_back(ind.objectives());
    s.elite = take(pool, selection::select_best(objs, n, config.truncation), n);

    try {
        s.models = fit_models(s.latest, s.elite, &s.models, config, s.gp_rng);
    } catch (const Error& e) {
        s.warnings.push_back(std::string("GP refit failed, keeping previous models: ") + e.what());
    }
    return s;
}

GenerationRecord snapshot(const GenerationState& state) {
    GenerationRecord r;
    r.generation = state.generation;
    r.eval_count = state.counter.count();
    r.front = population_front(state.elite);
    r.kappa = state.kappa.current;
    r.warnings = state.warnings;
    return r;
}

namespace {

using Clock = std::chrono::steady_clock;

void advance(GenerationState& state, const ProblemSpec& problem, const MggpoConfig& config, const Observer& observer,
             Clock::time_point t0, std::vector<GenerationRecord>& records) {
    while (state.generation < config.generations) {
        state = step(std::move(state), problem, config);
        auto rec = snapshot(state);
        rec.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
        if (observer) observer(rec);
        records.push_back(std::move(rec));
    }
}

} // namespace

std::vector<GenerationRecord> resume_mggpo(GenerationState state, const ProblemSpec& problem, const MggpoConfig& config,
                                           const Observer& observer) {
    std::vector<GenerationRecord> records;
    advance(state, problem, config, observer, Clock::now(), records);
    return records;
}

std::vector<GenerationRecord> run_mggpo(const ProblemSpec& problem, const MggpoConfig& config, const Observer& observer) {
    const auto t0 = Clock::now();
    auto state = initialize(problem, config);
    std::vector<GenerationRecord> records{snapshot(state)};
    records.back().wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (observer) observer(records.back());
    advance(state, problem, config, observer, t0, records);
    return records;
}

} // namespace mggpo
