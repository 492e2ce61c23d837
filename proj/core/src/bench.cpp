#include "mggpo/bench.hpp"

#include <algorithm>
#include <functional>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mggpo/metrics.hpp"
#include "mggpo/problems.hpp"

namespace mggpo::bench {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::mggpo: return "mggpo";
    case Algorithm::nsga2: return "nsga2";
    case Algorithm::mopso: return "mopso";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "mggpo") return Algorithm::mggpo;
    if (s == "nsga2") return Algorithm::nsga2;
    if (s == "mopso") return Algorithm::mopso;
    throw ConfigError("algorithm: unknown value '" + s + "' (expected mggpo, nsga2 or mopso)");
}

std::string to_string(Metric m) { return m == Metric::igd ? "igd" : "hv"; }

Metric parse_metric(const std::string& s) {
    if (s == "igd") return Metric::igd;
    if (s == "hv") return Metric::hv;
    throw ConfigError("metric: unknown value '" + s + "' (expected igd or hv)");
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2 || std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end()) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// -- config -----------------------------------------------------------------

namespace {

/// Strict reader over one JSON object: every key must be consumed.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "config must be a JSON object" : path_ + ": expected an object");
    }

    template <class T>
    void read(const char* key, T& out) {
        used_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return;
        try {
            if constexpr (std::is_same_v<T, double>) {
                if (!it->is_number()) throw ConfigError("");
            } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                if (!it->is_number_integer() || (std::is_unsigned_v<T> && it->template get<long long>() < 0)) throw ConfigError("");
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!it->is_boolean()) throw ConfigError("");
            }
            out = it->template get<T>();
        } catch (const std::exception&) {
            throw ConfigError(field(key) + ": invalid value " + it->dump());
        }
    }

    [[nodiscard]] std::optional<Section> child(const char* key) {
        used_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end() || it->is_null()) return std::nullopt;
        return Section(*it, field(key));
    }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (!used_.count(k)) throw ConfigError(field(k.c_str()) + ": unknown field");
        }
    }

    [[nodiscard]] std::string field(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

template <class E>
E parse_enum(const std::string& field, const std::string& value, std::initializer_list<std::pair<const char*, E>> options) {
    std::string names;
    for (const auto& [name, e] : options) {
        if (value == name) return e;
        names += names.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(field + ": unknown value '" + value + "' (expected one of " + names + ")");
}

std::string to_string(variation::MutationBounds b) { return b == variation::MutationBounds::clipped ? "clipped" : "bounded"; }
std::string to_string(selection::Truncation t) { return t == selection::Truncation::iterative ? "iterative" : "one_shot"; }
std::string to_string(gp::FitMethod m) { return m == gp::FitMethod::simplex ? "simplex" : "gradient"; }

} // namespace

std::vector<std::uint64_t> default_checkpoints(std::size_t dimension) {
    if (dimension >= 100) return {1000, 2000, 4000, 8000};
    return {1000, 2000, 3000, 4000};
}

std::vector<std::uint64_t> ExperimentConfig::effective_checkpoints() const {
    return checkpoints.empty() ? default_checkpoints(dimension) : checkpoints;
}

void ExperimentConfig::validate() const {
    const auto& known = problems::known_problems();
    if (std::find(known.begin(), known.end(), problem) == known.end())
        throw ConfigError("problem: unknown value '" + problem + "'");
    if (dimension < 2) throw ConfigError("dimension: must be >= 2");
    if (population < 2) throw ConfigError("population: must be >= 2");
    if (budget < population) throw ConfigError("budget: must be >= population");
    if ((budget - population) % population != 0)
        throw ConfigError("budget: budget - population (" + std::to_string(budget - population) +
                          ") must be divisible by population (" + std::to_string(population) + ")");
    if (repeats < 1) throw ConfigError("repeats: must be >= 1");
    if (jobs < 1) throw ConfigError("jobs: must be >= 1");
    if (reference_point.size() != 2) throw ConfigError("reference_point: expected two values");
    if (reference_resolution < 2) throw ConfigError("reference_resolution: must be >= 2");
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i] <= checkpoints[i - 1]) throw ConfigError("checkpoints: must be strictly increasing");
    }
    try {
        switch (algorithm) {
        case Algorithm::mggpo: mggpo.validate(); break;
        case Algorithm::nsga2: nsga2.validate(); break;
        case Algorithm::mopso: mopso.validate(); break;
        }
    } catch (const ConfigError& e) {
        throw ConfigError(to_string(algorithm) + ": " + e.what());
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    Section top(doc, "");
    int version = kConfigSchemaVersion;
    top.read("schema_version", version);
    if (version != kConfigSchemaVersion) throw ConfigError("schema_version: unsupported value " + std::to_string(version));
    std::string algo = to_string(c.algorithm);
    std::string out = c.output_dir.string();
    top.read("problem", c.problem);
    top.read("dimension", c.dimension);
    top.read("algorithm", algo);
    top.read("population", c.population);
    top.read("budget", c.budget);
    top.read("repeats", c.repeats);
    top.read("seed", c.seed);
    top.read("output_dir", out);
    top.read("checkpoints", c.checkpoints);
    top.read("reference_point", c.reference_point);
    top.read("reference_resolution", c.reference_resolution);
    top.read("jobs", c.jobs);
    c.algorithm = parse_algorithm(algo);
    c.output_dir = out;

    if (auto s = top.child("mggpo")) {
        auto& m = c.mggpo;
        s->read("m1", m.variation.m1);
        s->read("m2", m.variation.m2);
        s->read("eta_c", m.variation.eta_c);
        s->read("eta_m", m.variation.eta_m);
        s->read("p_mut", m.variation.p_mut);
        s->read("sbx_per_variable", m.variation.sbx_per_variable);
        s->read("sbx_swap", m.variation.sbx_swap);
        s->read("kappa_initial", m.kappa_initial);
        s->read("rho", m.rho);
        std::string bounds = to_string(m.variation.mutation_bounds);
        std::string trunc = to_string(m.truncation);
        s->read("mutation_bounds", bounds);
        s->read("truncation", trunc);
        m.variation.mutation_bounds = parse_enum<variation::MutationBounds>(s->field("mutation_bounds"), bounds,
                                                 {{"bounded", variation::MutationBounds::bounded},
                                                  {"clipped", variation::MutationBounds::clipped}});
        m.truncation = parse_enum<selection::Truncation>(s->field("truncation"), trunc,
                                  {{"one_shot", selection::Truncation::one_shot},
                                   {"iterative", selection::Truncation::iterative}});
        if (auto g = s->child("gp")) {
            std::string method = to_string(m.gp.method);
            g->read("method", method);
            m.gp.method = parse_enum<gp::FitMethod>(g->field("method"), method,
                                     {{"gradient", gp::FitMethod::gradient}, {"simplex", gp::FitMethod::simplex}});
            g->read("profile_sigma_f", m.gp.profile_sigma_f);
            g->read("ard", m.gp.ard);
            g->read("restarts", m.gp.restarts);
            g->read("max_evals", m.gp.max_evals);
            g->read("length_lower", m.gp.length_lower);
            g->read("length_upper", m.gp.length_upper);
            g->read("isotropic_guess", m.gp.isotropic_guess);
            g->read("svd_tau", m.gp.svd_tau);
            g->finish();
        }
        s->finish();
    }
    if (auto s = top.child("nsga2")) {
        auto& n = c.nsga2;
        s->read("p_crossover", n.p_crossover);
        s->read("eta_c", n.eta_c);
        s->read("eta_m", n.eta_m);
        s->read("p_mut", n.p_mut);
        s->read("sbx_per_variable", n.sbx_per_variable);
        s->read("sbx_swap", n.sbx_swap);
        s->finish();
    }
    if (auto s = top.child("mopso")) {
        auto& p = c.mopso;
        s->read("w", p.w);
        s->read("r1", p.r1);
        s->read("r2", p.r2);
        s->read("v_max", p.v_max);
        s->read("eta_m", p.eta_m);
        s->read("p_mut", p.p_mut);
        s->read("archive_capacity", p.archive_capacity);
        s->finish();
    }
    top.finish();
    c.validate();
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    const double pm = c.mggpo.variation.mutation_rate(c.dimension);
    const double pn = c.nsga2.p_mut > 0.0 ? c.nsga2.p_mut : 1.0 / static_cast<double>(c.dimension);
    const double pp = c.mopso.p_mut > 0.0 ? c.mopso.p_mut : 1.0 / static_cast<double>(c.dimension);
    const json doc{
        {"schema_version", kConfigSchemaVersion},
        {"problem", c.problem},
        {"dimension", c.dimension},
        {"algorithm", to_string(c.algorithm)},
        {"population", c.population},
        {"budget", c.budget},
        {"repeats", c.repeats},
        {"seed", c.seed},
        {"output_dir", c.output_dir.string()},
        {"checkpoints", c.effective_checkpoints()},
        {"reference_point", c.reference_point},
        {"reference_resolution", c.reference_resolution},
        {"jobs", c.jobs},
        {"mggpo",
         {{"m1", c.mggpo.variation.m1},
          {"m2", c.mggpo.variation.m2},
          {"eta_c", c.mggpo.variation.eta_c},
          {"eta_m", c.mggpo.variation.eta_m},
          {"p_mut", pm},
          {"sbx_per_variable", c.mggpo.variation.sbx_per_variable},
          {"sbx_swap", c.mggpo.variation.sbx_swap},
          {"kappa_initial", c.mggpo.kappa_initial},
          {"rho", c.mggpo.rho},
          {"mutation_bounds", to_string(c.mggpo.variation.mutation_bounds)},
          {"truncation", to_string(c.mggpo.truncation)},
          {"gp",
           {{"ard", c.mggpo.gp.ard},
            {"method", to_string(c.mggpo.gp.method)},
            {"profile_sigma_f", c.mggpo.gp.profile_sigma_f},
            {"restarts", c.mggpo.gp.restarts},
            {"max_evals", c.mggpo.gp.max_evals},
            {"length_lower", c.mggpo.gp.length_lower},
            {"length_upper", c.mggpo.gp.length_upper},
            {"isotropic_guess", c.mggpo.gp.isotropic_guess},
            {"svd_tau", c.mggpo.gp.svd_tau}}}}},
        {"nsga2",
         {{"p_crossover", c.nsga2.p_crossover},
          {"eta_c", c.nsga2.eta_c},
          {"eta_m", c.nsga2.eta_m},
          {"p_mut", pn},
          {"sbx_per_variable", c.nsga2.sbx_per_variable},
          {"sbx_swap", c.nsga2.sbx_swap}}},
        {"mopso",
         {{"w", c.mopso.w},
          {"r1", c.mopso.r1},
          {"r2", c.mopso.r2},
          {"v_max", c.mopso.v_max},
          {"eta_m", c.mopso.eta_m},
          {"p_mut", pp},
          {"archive_capacity", c.mopso.archive_capacity ? c.mopso.archive_capacity : c.population}}},
    };
    return doc.dump(2);
}

// -- records ------------------------------------------------------------------

std::string record_to_jsonl(const RunRecord& r) {
    json doc{
        {"schema_version", kRecordSchemaVersion},
        {"run_id", r.run_id},
        {"algo", r.algo},
        {"problem", r.problem},
        {"dimension", r.dimension},
        {"seed", r.seed},
        {"generation", r.generation},
        {"eval_count", r.eval_count},
        {"front", r.front},
        {"igd", r.igd},
        {"hv", r.hv},
        {"kappa", r.kappa ? json(*r.kappa) : json(nullptr)},
        {"wall_time_s", r.wall_time_s},
        {"warnings", r.warnings},
    };
    return doc.dump();
}

RunRecord record_from_jsonl(const std::string& line) {
    static const std::set<std::string> fields{"schema_version", "run_id", "algo",  "problem", "dimension",
                                              "seed",           "generation", "eval_count", "front", "igd",
                                              "hv",             "kappa",  "wall_time_s", "warnings"};
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("record is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("record must be a JSON object");
    const auto version = doc.value("schema_version", -1);
    if (version != kRecordSchemaVersion)
        throw ConfigError("record schema_version mismatch: got " + std::to_string(version) + ", expected " +
                          std::to_string(kRecordSchemaVersion));
    for (const auto& [k, v] : doc.items()) {
        if (!fields.count(k))
            throw ConfigError("record schema_version mismatch: unknown field '" + k + "' for schema_version " +
                              std::to_string(kRecordSchemaVersion));
    }
    try {
        RunRecord r;
        r.run_id = doc.at("run_id").get<std::string>();
        r.algo = doc.at("algo").get<std::string>();
        r.problem = doc.at("problem").get<std::string>();
        r.dimension = doc.at("dimension").get<std::size_t>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        r.generation = doc.at("generation").get<std::size_t>();
        r.eval_count = doc.at("eval_count").get<std::uint64_t>();
        r.front = doc.at("front").get<std::vector<ObjectiveVector>>();
        r.igd = doc.at("igd").get<double>();
        r.hv = doc.at("hv").get<double>();
        if (!doc.at("kappa").is_null()) r.kappa = doc.at("kappa").get<double>();
        r.wall_time_s = doc.at("wall_time_s").get<double>();
        r.warnings = doc.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("record field error: ") + e.what());
    }
}

const RunRecord* RunTrace::at_checkpoint(std::uint64_t checkpoint) const {
    const RunRecord* found = nullptr;
    for (const auto& r : records) {
        if (r.eval_count > checkpoint) break;
        found = &r;
    }
    return found;
}

RunTrace read_run(const fs::path& jsonl) {
    std::ifstream in(jsonl);
    if (!in) throw ConfigError("cannot read '" + jsonl.string() + "'");
    RunTrace t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        RunRecord r;
        try {
            r = record_from_jsonl(line);
        } catch (const ConfigError& e) {
            throw ConfigError(jsonl.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (t.records.empty()) {
            t.run_id = r.run_id;
            t.algo = r.algo;
            t.problem = r.problem;
            t.dimension = r.dimension;
            t.seed = r.seed;
        } else {
            if (r.run_id != t.run_id) throw ConfigError(jsonl.string() + ": mixed run ids");
            if (r.eval_count <= t.records.back().eval_count)
                throw ConfigError(jsonl.string() + ":" + std::to_string(lineno) + ": eval_count not strictly increasing");
        }
        t.records.push_back(std::move(r));
    }
    if (t.records.empty()) throw ConfigError("'" + jsonl.string() + "' holds no records");
    return t;
}

std::vector<RunTrace> load_results(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw ConfigError("'" + dir.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RunTrace> runs;
    for (const auto& f : files) runs.push_back(read_run(f));
    return runs;
}

// -- running ------------------------------------------------------------------

RunTrace run_single(const ExperimentConfig& config, std::size_t repeat_index,
                    const std::function<void(const RunRecord&)>& on_record) {
    config.validate();
    const auto problem = problems::make_problem(config.problem, config.dimension);
    const auto reference = problems::reference_front(config.problem, config.reference_resolution);
    const std::uint64_t seed = config.seed + repeat_index;
    const std::size_t generations = config.generations();

    RunTrace trace;
    trace.algo = to_string(config.algorithm);
    trace.problem = config.problem;
    trace.dimension = config.dimension;
    trace.seed = seed;
    trace.run_id = trace.algo + "-" + config.problem + "_" + std::to_string(config.dimension) + "-seed" + std::to_string(seed);

    const Observer observer = [&](const GenerationRecord& g) {
        RunRecord r;
        r.run_id = trace.run_id;
        r.algo = trace.algo;
        r.problem = trace.problem;
        r.dimension = trace.dimension;
        r.seed = seed;
        r.generation = g.generation;
        r.eval_count = g.eval_count;
        r.front = g.front;
        std::sort(r.front.begin(), r.front.end());
        r.igd = metrics::igd(r.front, reference);
        r.hv = metrics::hypervolume_2d(r.front, config.reference_point);
        r.kappa = g.kappa;
        r.wall_time_s = g.wall_time_s;
        r.warnings = g.warnings;
        if (on_record) on_record(r);
        trace.records.push_back(std::move(r));
    };

    switch (config.algorithm) {
    case Algorithm::mggpo: {
        auto c = config.mggpo;
        c.population = config.population;
        c.generations = generations;
        c.seed = seed;
        (void)run_mggpo(problem, c, observer);
        break;
    }
    case Algorithm::nsga2: {
        auto c = config.nsga2;
        c.population = config.population;
        c.generations = generations;
        c.seed = seed;
        (void)baselines::nsga2_run(problem, c, observer);
        break;
    }
    case Algorithm::mopso: {
        auto c = config.mopso;
        c.population = config.population;
        c.generations = generations;
        c.seed = seed;
        (void)baselines::mopso_run(problem, c, observer);
        break;
    }
    }
    return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    fs::create_directories(config.output_dir);
    {
        std::ofstream cfg(config.output_dir / "config.json");
        cfg << config_to_json(config) << '\n';
    }

    ExperimentResult result;
    result.runs.resize(config.repeats);
    result.run_files.resize(config.repeats);
    std::vector<std::exception_ptr> errors(config.repeats);
    std::atomic<std::size_t> next{0};

    const auto worker = [&] {
        for (std::size_t r = next++; r < config.repeats; r = next++) {
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu.jsonl", r);
            const auto path = config.output_dir / name;
            result.run_files[r] = path;
            try {
                std::ofstream out(path, std::ios::trunc);
                if (!out) throw Error("cannot write '" + path.string() + "'");
                result.runs[r] = run_single(config, r, [&](const RunRecord& rec) {
                    out << record_to_jsonl(rec) << '\n';
                    out.flush();
                });
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min(config.jobs, config.repeats);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    result.summary = summarize(result.runs, config.effective_checkpoints());
    result.summary_file = config.output_dir / "summary.csv";
    std::ofstream sum(result.summary_file);
    write_summary_csv(sum, result.summary);
    return result;
}

// -- analysis ------------------------------------------------------------------

namespace {

using InstanceKey = std::tuple<std::string, std::string, std::size_t>;  // algo, problem, dimension

std::vector<double> values_at(const std::vector<const RunTrace*>& runs, std::uint64_t checkpoint, Metric metric) {
    std::vector<double> v;
    for (const auto* t : runs) {
        if (const auto* rec = t->at_checkpoint(checkpoint)) v.push_back(rec->value(metric));
    }
    return v;
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

std::vector<SummaryRow> summarize(const std::vector<RunTrace>& runs, const std::vector<std::uint64_t>& checkpoints) {
    std::map<InstanceKey, std::vector<const RunTrace*>> groups;
    for (const auto& t : runs) groups[{t.algo, t.problem, t.dimension}].push_back(&t);
    std::vector<SummaryRow> rows;
    for (const auto& [key, members] : groups) {
        for (std::uint64_t cp : checkpoints) {
            for (Metric m : {Metric::igd, Metric::hv}) {
                const auto v = values_at(members, cp, m);
                if (v.empty()) continue;
                SummaryRow row;
                row.algo = std::get<0>(key);
                row.problem = std::get<1>(key);
                row.dimension = std::get<2>(key);
                row.checkpoint = cp;
                row.metric = m;
                row.best = m == Metric::igd ? *std::min_element(v.begin(), v.end()) : *std::max_element(v.begin(), v.end());
                row.mean = mean_of(v);
                row.std = sample_std(v);
                row.runs = v.size();
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "algo,problem,dimension,checkpoint,metric,best,mean,std,runs\n";
    for (const auto& r : rows) {
        out << r.algo << ',' << r.problem << ',' << r.dimension << ',' << r.checkpoint << ',' << to_string(r.metric) << ','
            << format_number(r.best) << ',' << format_number(r.mean) << ',' << format_number(r.std) << ',' << r.runs << '\n';
    }
}

std::vector<ComparisonCell> compare(const std::vector<RunTrace>& a, const std::vector<RunTrace>& b, Metric metric,
                                    std::vector<std::uint64_t> checkpoints, double alpha) {
    using Instance = std::pair<std::string, std::size_t>;
    std::map<Instance, std::vector<const RunTrace*>> ga, gb;
    for (const auto& t : a) ga[{t.problem, t.dimension}].push_back(&t);
    for (const auto& t : b) gb[{t.problem, t.dimension}].push_back(&t);

    std::vector<ComparisonCell> cells;
    bool shared = false;
    for (const auto& [inst, runs_a] : ga) {
        const auto it = gb.find(inst);
        if (it == gb.end()) continue;
        shared = true;
        const auto& runs_b = it->second;
        const auto cps = checkpoints.empty() ? default_checkpoints(inst.second) : checkpoints;
        for (std::uint64_t cp : cps) {
            const auto va = values_at(runs_a, cp, metric);
            const auto vb = values_at(runs_b, cp, metric);
            if (va.size() < 3 || vb.size() < 3)
                throw ConfigError("compare: " + inst.first + "_" + std::to_string(inst.second) + " at checkpoint " +
                                  std::to_string(cp) + " needs >= 3 runs per side (got " + std::to_string(va.size()) +
                                  " and " + std::to_string(vb.size()) + ")");
            ComparisonCell cell;
            cell.checkpoint = cp;
            cell.problem = inst.first;
            cell.dimension = inst.second;
            cell.mean_a = mean_of(va);
            cell.mean_b = mean_of(vb);
            const auto positive = [](double v) { return v > 0.0; };
            if (metric == Metric::hv && std::none_of(va.begin(), va.end(), positive) &&
                std::none_of(vb.begin(), vb.end(), positive)) {
                cell.code.reset();
            } else {
                cell.p_value = metrics::rank_sum_test(va, vb).p_value;
                const auto dir = metric == Metric::igd ? metrics::Direction::minimize : metrics::Direction::maximize;
                cell.code = metrics::outcome_code(metrics::wilcoxon_rank_sum(va, vb, alpha, dir));
            }
            cells.push_back(std::move(cell));
        }
    }
    if (!shared) throw ConfigError("compare: the two result sets share no problem instance");
    std::stable_sort(cells.begin(), cells.end(), [](const ComparisonCell& x, const ComparisonCell& y) {
        return std::tie(x.checkpoint, x.problem, x.dimension) < std::tie(y.checkpoint, y.problem, y.dimension);
    });
    return cells;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonCell>& cells) {
    out << "checkpoint,instance,result,p_value,mean_a,mean_b\n";
    for (const auto& c : cells) {
        out << c.checkpoint << ',' << c.problem << '_' << c.dimension << ',' << (c.code ? std::to_string(*c.code) : "N/A")
            << ',' << format_number(c.p_value) << ',' << format_number(c.mean_a) << ',' << format_number(c.mean_b) << '\n';
    }
}

std::vector<ConvergenceRow> convergence(const std::vector<RunTrace>& runs, Metric metric) {
    if (runs.empty()) throw Error("convergence: no runs");
    std::set<std::uint64_t> grid;
    for (const auto& t : runs) {
        for (const auto& r : t.records) grid.insert(r.eval_count);
    }
    std::vector<ConvergenceRow> rows;
    for (std::uint64_t g : grid) {
        std::vector<double> v;
        for (const auto& t : runs) {
            if (const auto* rec = t.at_checkpoint(g)) v.push_back(rec->value(metric));
        }
        if (v.empty()) continue;
        ConvergenceRow row;
        row.eval_count = g;
        row.mean = mean_of(v);
        row.median = metrics::median(v);
        row.std = sample_std(v);
        row.min = *std::min_element(v.begin(), v.end());
        row.max = *std::max_element(v.begin(), v.end());
        rows.push_back(row);
    }
    return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
    out << "eval_count,mean,median,std,min,max\n";
    for (const auto& r : rows) {
        out << r.eval_count << ',' << format_number(r.mean) << ',' << format_number(r.median) << ',' << format_number(r.std)
            << ',' << format_number(r.min) << ',' << format_number(r.max) << '\n';
    }
}

void write_front_csv(std::ostream& out, const std::vector<ObjectiveVector>& points) {
    out << "f1,f2\n";
    for (const auto& p : points) {
        if (p.size() != 2) throw DimensionError(2, p.size(), "front CSV");
        out << format_number(p[0]) << ',' << format_number(p[1]) << '\n';
    }
}

std::vector<ObjectiveVector> read_front_csv(std::istream& in) {
    std::string line;
    std::vector<ObjectiveVector> pts;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "f1,f2") continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ConfigError("front CSV line " + std::to_string(lineno) + ": expected two comma-separated values");
        try {
            std::size_t used1 = 0, used2 = 0;
            const std::string s1 = line.substr(0, comma), s2 = line.substr(comma + 1);
            const double f1 = std::stod(s1, &used1);
            const double f2 = std::stod(s2, &used2);
            if (used1 != s1.size() || used2 != s2.size()) throw std::invalid_argument("trailing characters");
            pts.push_back({f1, f2});
        } catch (const std::exception&) {
            throw ConfigError("front CSV line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return pts;
}

} // namespace mggpo::bench
