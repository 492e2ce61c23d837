#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mggpo/baselines.hpp"
#include "mggpo/core.hpp"
#include "mggpo/optimizer.hpp"

namespace mggpo::bench {

inline constexpr int kRecordSchemaVersion = 1;
inline constexpr int kConfigSchemaVersion = 1;

enum class Algorithm { mggpo, nsga2, mopso };
[[nodiscard]] std::string to_string(Algorithm a);
[[nodiscard]] Algorithm parse_algorithm(const std::string& s);

enum class Metric { igd, hv };
[[nodiscard]] std::string to_string(Metric m);
[[nodiscard]] Metric parse_metric(const std::string& s);

struct ExperimentConfig {
    std::string problem = "zdt1";
    std::size_t dimension = 30;
    Algorithm algorithm = Algorithm::mggpo;
    std::size_t population = 80;
    std::uint64_t budget = 4080;  // total evaluations including the initial population
    std::size_t repeats = 10;
    std::uint64_t seed = 1;       // repeat r uses seed + r
    std::filesystem::path output_dir = "results";
    std::vector<std::uint64_t> checkpoints;  // empty: defaults for the dimension
    ObjectiveVector reference_point{1.0, 1.0};
    std::size_t reference_resolution = 1000;
    std::size_t jobs = 1;  // concurrent repeats

    MggpoConfig mggpo;
    baselines::Nsga2Config nsga2;
    baselines::MopsoConfig mopso;

    /// Throws ConfigError with the offending field name.
    void validate() const;
    [[nodiscard]] std::size_t generations() const { return static_cast<std::size_t>((budget - population) / population); }
    [[nodiscard]] std::vector<std::uint64_t> effective_checkpoints() const;
};

/// Checkpoints used for the summary tables: 1000/2000/4000/8000 for P >= 100,
/// 1000/2000/3000/4000 otherwise.
[[nodiscard]] std::vector<std::uint64_t> default_checkpoints(std::size_t dimension);

/// Parse a JSON config. Unknown keys and wrong types raise ConfigError naming the field.
[[nodiscard]] ExperimentConfig parse_config(const std::string& json_text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
/// Fully resolved config, every parameter explicit.
[[nodiscard]] std::string config_to_json(const ExperimentConfig& config);

struct RunRecord {
    std::string run_id;
    std::string algo;
    std::string problem;
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    std::size_t generation = 0;
    std::uint64_t eval_count = 0;
    std::vector<ObjectiveVector> front;
    double igd = 0.0;
    double hv = 0.0;
    std::optional<double> kappa;
    double wall_time_s = 0.0;
    std::vector<std::string> warnings;

    [[nodiscard]] double value(Metric m) const { return m == Metric::igd ? igd : hv; }
};

/// One JSON object, no trailing newline.
[[nodiscard]] std::string record_to_jsonl(const RunRecord& r);
/// Throws ConfigError on schema_version mismatch, unknown or missing fields.
[[nodiscard]] RunRecord record_from_jsonl(const std::string& line);

struct RunTrace {
    std::string run_id;
    std::string algo;
    std::string problem;
    std::size_t dimension = 0;
    std::uint64_t seed = 0;
    std::vector<RunRecord> records;  // eval_count strictly increasing

    /// Last record with eval_count <= checkpoint, or nullptr.
    [[nodiscard]] const RunRecord* at_checkpoint(std::uint64_t checkpoint) const;
};

[[nodiscard]] RunTrace read_run(const std::filesystem::path& jsonl);
/// All *.jsonl files below `dir`, sorted by path.
[[nodiscard]] std::vector<RunTrace> load_results(const std::filesystem::path& dir);

/// Run one algorithm on one problem with the harness seeds; records carry IGD and HV.
[[nodiscard]] RunTrace run_single(const ExperimentConfig& config, std::size_t repeat_index,
                                  const std::function<void(const RunRecord&)>& on_record = {});

struct SummaryRow {
    std::string algo;
    std::string problem;
    std::size_t dimension = 0;
    std::uint64_t checkpoint = 0;
    Metric metric = Metric::igd;
    double best = 0.0;  // min IGD / max HV
    double mean = 0.0;
    double std = 0.0;   // sample standard deviation, 0 for one run
    std::size_t runs = 0;
};

[[nodiscard]] std::vector<SummaryRow> summarize(const std::vector<RunTrace>& runs,
                                                const std::vector<std::uint64_t>& checkpoints);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

struct ExperimentResult {
    std::vector<std::filesystem::path> run_files;
    std::filesystem::path summary_file;
    std::vector<RunTrace> runs;
    std::vector<SummaryRow> summary;
};

/// Runs every repeat, streaming one JSONL file per run into output_dir, then
/// writes summary.csv and config.json. A failing run keeps its partial file
/// and the error propagates after the other repeats finish.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct ComparisonCell {
    std::uint64_t checkpoint = 0;
    std::string problem;
    std::size_t dimension = 0;
    std::optional<int> code;  // 1 / 0 / -1; empty for N/A
    double p_value = 1.0;
    double mean_a = 0.0;
    double mean_b = 0.0;
};

/// Wilcoxon comparison of A against B on every shared (checkpoint, instance).
/// HV cells where no run of either side is positive are N/A.
[[nodiscard]] std::vector<ComparisonCell> compare(const std::vector<RunTrace>& a, const std::vector<RunTrace>& b,
                                                  Metric metric, std::vector<std::uint64_t> checkpoints = {},
                                                  double alpha = 0.05);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonCell>& cells);

struct ConvergenceRow {
    std::uint64_t eval_count = 0;
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Statistics across runs on the union of generation boundaries; each run
/// contributes its last record at or before the grid point.
[[nodiscard]] std::vector<ConvergenceRow> convergence(const std::vector<RunTrace>& runs, Metric metric);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

// CSV helpers: comma separated, '.' decimal, 17 significant digits.
[[nodiscard]] std::string format_number(double v);
void write_front_csv(std::ostream& out, const std::vector<ObjectiveVector>& points);
[[nodiscard]] std::vector<ObjectiveVector> read_front_csv(std::istream& in);

[[nodiscard]] double sample_std(const std::vector<double>& v);

} // namespace mggpo::bench
