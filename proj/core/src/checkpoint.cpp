#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mggpo/optimizer.hpp"

namespace mggpo {

using nlohmann::json;

namespace {

json individual_json(const Individual& ind) {
    return {{"x", ind.x}, {"f", ind.objectives()}, {"eval_index", ind.eval_index}, {"eval_failed", ind.eval_failed}};
}

Individual individual_from(const json& j) {
    Individual ind(j.at("x").get<DecisionVector>());
    ind.f = j.at("f").get<ObjectiveVector>();
    ind.eval_index = j.at("eval_index").get<std::uint64_t>();
    ind.eval_failed = j.at("eval_failed").get<bool>();
    return ind;
}

json population_json(const Population& pop) {
    json members = json::array();
    for (const auto& m : pop.members) members.push_back(individual_json(m));
    return {{"capacity", pop.capacity}, {"members", members}};
}

Population population_from(const json& j) {
    Population pop;
    pop.capacity = j.at("capacity").get<std::size_t>();
    for (const auto& m : j.at("members")) pop.members.push_back(individual_from(m));
    return pop;
}

json rng_json(const RngStream& rng) { return {{"seed", rng.seed()}, {"state", rng.state()}}; }

RngStream rng_from(const json& j) {
    RngStream rng(j.at("seed").get<std::uint64_t>());
    rng.restore(j.at("state").get<std::string>());
    return rng;
}

json model_json(const gp::GpModel& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.inputs().rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(m.inputs().cols()));
        for (Eigen::Index d = 0; d < m.inputs().cols(); ++d) row[static_cast<std::size_t>(d)] = m.inputs()(i, d);
        rows.push_back(row);
    }
    std::vector<double> y(m.targets().data(), m.targets().data() + m.targets().size());
    return {{"inputs", rows},
            {"targets", y},
            {"prior_mean", m.prior_mean()},
            {"sigma_f", m.params().sigma_f},
            {"lengths", m.params().lengths},
            {"svd_tau", m.svd_tau()}};
}

gp::GpModel model_from(const json& j) {
    const auto rows = j.at("inputs").get<std::vector<DecisionVector>>();
    const auto y = j.at("targets").get<std::vector<double>>();
    Eigen::VectorXd yv(static_cast<Eigen::Index>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i) yv(static_cast<Eigen::Index>(i)) = y[i];
    gp::KernelParams params{j.at("sigma_f").get<double>(), j.at("lengths").get<std::vector<double>>()};
    return gp::GpModel::with_params(gp::to_matrix(rows), std::move(yv), j.at("prior_mean").get<double>(),
                                    std::move(params), j.at("svd_tau").get<double>());
}

} // namespace

std::string checkpoint_to_json(const GenerationState& s) {
    json models = json::array();
    for (const auto& m : s.models) models.push_back(model_json(m));
    const json doc{
        {"schema_version", kCheckpointSchemaVersion},
        {"generation", s.generation},
        {"eval_count", s.counter.count()},
        {"kappa", {{"initial", s.kappa.initial}, {"rho", s.kappa.rho}, {"current", s.kappa.current}, {"steps", s.kappa.steps}}},
        {"rng", {{"variation", rng_json(s.variation_rng)}, {"gp", rng_json(s.gp_rng)}}},
        {"elite", population_json(s.elite)},
        {"latest", population_json(s.latest)},
        {"models", models},
        {"warnings", s.warnings},
    };
    return doc.dump();
}

GenerationState checkpoint_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        const int version = doc.at("schema_version").get<int>();
        if (version != kCheckpointSchemaVersion)
            throw ConfigError("checkpoint schema_version " + std::to_string(version) + " is not supported (expected " +
                              std::to_string(kCheckpointSchemaVersion) + ")");
        GenerationState s;
        s.generation = doc.at("generation").get<std::size_t>();
        s.counter = EvalCounter(doc.at("eval_count").get<std::uint64_t>());
        const auto& k = doc.at("kappa");
        s.kappa = {k.at("initial").get<double>(), k.at("rho").get<double>(), k.at("current").get<double>(),
                   k.at("steps").get<std::size_t>()};
        s.variation_rng = rng_from(doc.at("rng").at("variation"));
        s.gp_rng = rng_from(doc.at("rng").at("gp"));
        s.elite = population_from(doc.at("elite"));
        s.latest = population_from(doc.at("latest"));
        for (const auto& m : doc.at("models")) s.models.push_back(model_from(m));
        s.warnings = doc.at("warnings").get<std::vector<std::string>>();
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const GenerationState& state, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write checkpoint '" + path + "'");
    out << checkpoint_to_json(state) << '\n';
}

GenerationState load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read checkpoint '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return checkpoint_from_json(buf.str());
}

} // namespace mggpo
