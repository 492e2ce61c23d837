// Acceptance suite: one PASS/FAIL line per criterion.
//   fast  criteria 8-13 (property checks, seconds)
//   long  criteria 1-7  (full optimisation runs, about an hour on one core)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "mggpo/bench.hpp"
#include "mggpo/gp.hpp"
#include "mggpo/metrics.hpp"
#include "mggpo/problems.hpp"
#include "mggpo/rng.hpp"
#include "mggpo/selection.hpp"
#include "mggpo/variation.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mggpo;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    failures += !pass;
    std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double mean_at(const std::vector<bench::RunTrace>& runs, std::uint64_t checkpoint, bench::Metric m) {
    double s = 0.0;
    for (const auto& r : runs) {
        const auto* rec = r.at_checkpoint(checkpoint);
        if (!rec) throw Error("run " + r.run_id + " has no record at " + std::to_string(checkpoint));
        s += rec->value(m);
    }
    return s / static_cast<double>(runs.size());
}

// -- long group -----------------------------------------------------------------

struct Runner {
    fs::path root;
    std::size_t seeds = 10;
    std::size_t jobs = 1;
    bool reuse = false;

    // Reuse a finished directory only when its resolved config is identical.
    std::vector<bench::RunTrace> run(const std::string& name, bench::ExperimentConfig c) {
        c.output_dir = root / name;
        c.repeats = seeds;
        c.jobs = jobs;
        if (reuse && fs::exists(c.output_dir / "summary.csv") && fs::exists(c.output_dir / "config.json")) {
            std::ifstream in(c.output_dir / "config.json");
            std::stringstream ss;
            ss << in.rdbuf();
            if (ss.str() == bench::config_to_json(c)) {
                auto runs = bench::load_results(c.output_dir);
                if (runs.size() == seeds) {
                    std::fprintf(stderr, "[%s] reusing %zu runs\n", name.c_str(), runs.size());
                    return runs;
                }
            }
        }
        std::fprintf(stderr, "[%s] running %zu repeats\n", name.c_str(), seeds);
        return bench::run_experiment(c).runs;
    }
};

bench::ExperimentConfig base(const std::string& problem, std::size_t dim, bench::Algorithm algo, std::uint64_t budget) {
    bench::ExperimentConfig c;
    c.problem = problem;
    c.dimension = dim;
    c.algorithm = algo;
    c.budget = budget;
    c.seed = 1;
    return c;
}

void long_group(Runner& R) {
    using bench::Algorithm;
    using bench::Metric;
    const std::vector<std::string> zdt{"zdt1", "zdt2", "zdt3", "zdt6"};
    std::map<std::string, std::vector<bench::RunTrace>> mg;
    for (const auto& p : zdt) mg[p] = R.run("mggpo_" + p + "_30", base(p, 30, Algorithm::mggpo, 4080));

    const std::uint64_t last = 4080;
    {
        const double igd = mean_at(mg["zdt1"], last, Metric::igd), hv = mean_at(mg["zdt1"], last, Metric::hv);
        report(1, igd <= 0.01 && hv >= 0.63, "ZDT1_30 mean IGD " + fmt(igd) + " (<= 0.01), mean HV " + fmt(hv) + " (>= 0.63)");
    }
    {
        const double igd = mean_at(mg["zdt2"], last, Metric::igd), hv = mean_at(mg["zdt2"], last, Metric::hv);
        report(2, igd <= 0.01 && hv >= 0.31, "ZDT2_30 mean IGD " + fmt(igd) + " (<= 0.01), mean HV " + fmt(hv) + " (>= 0.31)");
    }
    {
        const double igd = mean_at(mg["zdt3"], last, Metric::igd);
        report(3, igd <= 0.06, "ZDT3_30 mean IGD " + fmt(igd) + " (<= 0.06)");
    }
    {
        const double igd = mean_at(mg["zdt6"], last, Metric::igd);
        report(4, igd <= 0.05, "ZDT6_30 mean IGD " + fmt(igd) + " (<= 0.05)");
    }
    {
        const auto z1 = R.run("mggpo_zdt1_100", base("zdt1", 100, Algorithm::mggpo, 8080));
        const auto z2 = R.run("mggpo_zdt2_100", base("zdt2", 100, Algorithm::mggpo, 8080));
        const double i1 = mean_at(z1, 8080, Metric::igd), h1 = mean_at(z1, 8080, Metric::hv);
        const double i2 = mean_at(z2, 8080, Metric::igd), h2 = mean_at(z2, 8080, Metric::hv);
        report(5, i1 <= 0.02 && h1 >= 0.62 && i2 <= 0.02 && h2 >= 0.30,
               "ZDT1_100 IGD " + fmt(i1) + " HV " + fmt(h1) + " (<= 0.02, >= 0.62); ZDT2_100 IGD " + fmt(i2) + " HV " +
                   fmt(h2) + " (<= 0.02, >= 0.30)");
    }
    {
        bool ok = true;
        std::string detail;
        for (const auto& p : zdt) {
            for (auto algo : {Algorithm::nsga2, Algorithm::mopso}) {
                const auto other = R.run(bench::to_string(algo) + "_" + p + "_30", base(p, 30, algo, 4080));
                const auto cells = bench::compare(mg[p], other, Metric::igd, {2000});
                const bool win = cells.size() == 1 && cells[0].code == 1 && cells[0].mean_a < cells[0].mean_b;
                ok = ok && win;
                detail += p + " vs " + bench::to_string(algo) + " " + fmt(cells.at(0).mean_a, 3) + "/" +
                          fmt(cells.at(0).mean_b, 3) + " p=" + fmt(cells.at(0).p_value, 2) + (win ? "" : " (no win)") + "; ";
            }
        }
        report(6, ok, "IGD at 2000 evals, " + detail);
    }
    {
        auto c = base("zdt3", 30, Algorithm::mggpo, 4080);
        c.mggpo.rho = 1.0;
        const auto constant = R.run("mggpo_zdt3_30_constant_kappa", c);
        const double decay = mean_at(mg["zdt3"], last, Metric::igd), flat = mean_at(constant, last, Metric::igd);
        report(7, decay <= flat, "ZDT3_30 mean IGD rho=0.85 " + fmt(decay) + " vs constant kappa=2 " + fmt(flat));
    }
}

// -- fast group -----------------------------------------------------------------

void criterion_8() {
    RngStream rng(2024);
    double worst = 0.0;
    int instances = 0;
    while (instances < 100) {
        const std::size_t n = 1 + rng.below(10), p = 1 + rng.below(5);
        Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
        Eigen::VectorXd y(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            for (Eigen::Index d = 0; d < X.cols(); ++d) X(i, d) = rng.uniform();
            y(i) = rng.uniform(-3.0, 3.0);
        }
        gp::KernelParams kp;
        kp.sigma_f = rng.uniform(0.2, 3.0);
        kp.lengths.resize(p);
        for (double& l : kp.lengths) l = rng.uniform(0.05, 0.4);
        const double mu = rng.uniform(-1.0, 1.0);
        const oracle::DenseGp dense{X, y, mu, kp.sigma_f, kp.lengths};
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense.gram());
        const auto& s = svd.singularValues();
        if (!(s(s.size() - 1) > 1e-6 * s(0))) continue;  // the dense oracle needs an invertible gram
        ++instances;
        const auto model = gp::GpModel::with_params(X, y, mu, kp);
        for (int q = 0; q < 10; ++q) {
            std::vector<double> x(p);
            for (double& v : x) v = rng.uniform(-0.2, 1.2);
            const auto got = model.predict(x);
            const auto [m, var] = dense.predict(Eigen::Map<const Eigen::RowVectorXd>(x.data(), static_cast<Eigen::Index>(p)));
            worst = std::max({worst, std::abs(got.mean - m), std::abs(got.sigma * got.sigma - std::max(var, 0.0))});
        }
    }
    report(8, worst < 1e-8, "max |delta| over 100 instances " + fmt(worst, 3) + " (< 1e-8)");
}

void criterion_9() {
    RngStream rng(10);
    int mismatched = 0, dropped = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 10 + rng.below(191), m = 2 + rng.below(2);
        std::vector<ObjectiveVector> objs(n, ObjectiveVector(m));
        for (auto& v : objs)
            for (double& x : v) x = t % 3 == 0 ? static_cast<double>(rng.below(6)) : rng.uniform();
        const auto s = selection::non_dominated_sort(objs);
        const auto expect = oracle::peel_fronts(objs);
        bool same = s.fronts.size() == expect.size();
        for (std::size_t k = 0; same && k < expect.size(); ++k)
            same = std::set<std::size_t>(s.fronts[k].begin(), s.fronts[k].end()) ==
                   std::set<std::size_t>(expect[k].begin(), expect[k].end());
        mismatched += !same;

        const std::size_t keep = 1 + rng.below(n);
        if (expect[0].size() <= keep) {
            const auto got = selection::select_best(objs, keep, t % 2 ? selection::Truncation::iterative : selection::Truncation::one_shot);
            const std::set<std::size_t> chosen(got.begin(), got.end());
            for (std::size_t i : expect[0]) dropped += !chosen.count(i);
        }
    }
    report(9, mismatched == 0 && dropped == 0,
           std::to_string(mismatched) + " sort mismatches in 1000 instances, " + std::to_string(dropped) +
               " first-front members dropped");
}

void criterion_10() {
    RngStream rng(21);
    int outside = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<ObjectiveVector> f(1 + rng.below(30));
        for (auto& p : f) p = {rng.uniform(-0.1, 1.2), rng.uniform(-0.1, 1.2)};
        const auto [mc, se] = oracle::hv_monte_carlo(f, {-0.1, -0.1}, {1, 1}, 1000000, 100 + static_cast<std::uint64_t>(t));
        outside += std::abs(metrics::hypervolume_2d(f, {1, 1}) - mc) > 3 * se + 1e-12;
    }
    const double e1 = std::abs(metrics::hypervolume_2d(problems::reference_front("zdt1").points, {1, 1}) - 2.0 / 3.0);
    const double e2 = std::abs(metrics::hypervolume_2d(problems::reference_front("zdt2").points, {1, 1}) - 1.0 / 3.0);
    report(10, outside == 0 && e1 < 2e-3 && e2 < 2e-3,
           std::to_string(outside) + "/100 fronts outside 3 sigma; analytic gaps " + fmt(e1, 3) + ", " + fmt(e2, 3) + " (< 2e-3)");
}

void criterion_11() {
    RngStream rng(24);
    double worst = 0.0;
    bool exact = true;
    for (std::size_t n = 1; n <= 8; ++n) {
        for (std::size_t m = 1; m <= 8; ++m) {
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<double> a(n), b(m);
                for (double& v : a) v = rep == 1 ? static_cast<double>(rng.below(3)) : rng.uniform();
                for (double& v : b) v = rep == 1 ? static_cast<double>(rng.below(3)) : rng.uniform() + (rep == 2 ? 0.7 : 0.0);
                const auto r = metrics::rank_sum_test(a, b);
                exact = exact && r.exact;
                worst = std::max(worst, std::abs(r.p_value - oracle::rank_sum_p_enumerated(a, b)));
            }
        }
    }
    report(11, exact && worst < 1e-12, "max |p - enumerated| " + fmt(worst, 3) + " over n, m <= 8");
}

void criterion_12() {
    using namespace variation;
    RngStream rng(6);
    double midpoint = 0.0;
    for (int t = 0; t < 20000; ++t) {
        DecisionVector p1(10), p2(10);
        for (std::size_t i = 0; i < 10; ++i) {
            p1[i] = rng.uniform();
            p2[i] = rng.uniform();
        }
        const auto [a, b] = sbx_crossover(p1, p2, SbxOptions{rng.uniform(1.0, 30.0), 1.0}, rng);
        for (std::size_t i = 0; i < 10; ++i) {
            if (a[i] == 0.0 || a[i] == 1.0 || b[i] == 0.0 || b[i] == 1.0) continue;
            midpoint = std::max(midpoint, std::abs((a[i] + b[i]) - (p1[i] + p2[i])) / 2.0);
        }
    }
    double bias = 0.0;
    for (auto bounds : {MutationBounds::bounded, MutationBounds::clipped}) {
        double sum = 0.0;
        for (int t = 0; t < 100000; ++t) sum += polynomial_mutation({0.5}, 20.0, 1.0, rng, bounds)[0] - 0.5;
        bias = std::max(bias, std::abs(sum / 100000.0));
    }
    std::size_t violations = 0, applications = 0;
    for (int t = 0; t < 500000; ++t) {
        const DecisionVector p1{rng.uniform(), rng.uniform()}, p2{rng.uniform(), rng.uniform()};
        const double eta = rng.uniform(0.5, 40.0);
        const auto [a, b] = sbx_crossover(p1, p2, SbxOptions{eta, 1.0}, rng);
        const auto m = polynomial_mutation(p1, eta, 1.0, rng, t % 2 ? MutationBounds::clipped : MutationBounds::bounded);
        applications += 2;
        for (const auto* v : {&a, &b, &m})
            for (double x : *v) violations += !(x >= 0.0 && x <= 1.0);
    }
    report(12, midpoint < 1e-12 && bias < 1e-3 && violations == 0,
           "SBX midpoint error " + fmt(midpoint, 3) + ", PLM bias " + fmt(bias, 3) + ", " + std::to_string(violations) +
               " violations in " + std::to_string(applications) + " applications");
}

std::string strip_timing(const fs::path& file) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    static const std::regex timing("\"wall_time_s\":[^,}]*");
    return std::regex_replace(ss.str(), timing, "\"wall_time_s\":_");
}

void criterion_13(const fs::path& root) {
    bool same = true;
    std::size_t files = 0;
    for (auto algo : {bench::Algorithm::mggpo, bench::Algorithm::nsga2, bench::Algorithm::mopso}) {
        auto c = base("zdt3", 30, algo, 400);
        c.repeats = 2;
        c.seed = 11;
        std::vector<bench::ExperimentResult> res;
        for (const char* tag : {"a", "b"}) {
            c.output_dir = root / "determinism" / (bench::to_string(algo) + "_" + tag);
            fs::remove_all(c.output_dir);
            res.push_back(bench::run_experiment(c));
        }
        for (std::size_t r = 0; r < c.repeats; ++r) {
            same = same && strip_timing(res[0].run_files[r]) == strip_timing(res[1].run_files[r]);
            ++files;
        }
    }
    report(13, same, std::to_string(files) + " JSONL pairs " + (same ? "byte-identical" : "differ") + " outside timing fields");
}

void fast_group(const fs::path& root) {
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    criterion_13(root);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mggpo acceptance suite"};
    std::string group = "all";
    Runner runner;
    std::string out = "acceptance_results";
    app.add_option("--group", group, "fast (8-13), long (1-7) or all")->check(CLI::IsMember({"fast", "long", "all"}));
    app.add_option("--out", out, "Directory for run results");
    app.add_option("--jobs", runner.jobs, "Concurrent repeats")->check(CLI::PositiveNumber);
    app.add_flag("--reuse", runner.reuse, "Reuse finished result directories whose resolved config matches");
    CLI11_PARSE(app, argc, argv);
    runner.root = out;

    try {
        fs::create_directories(runner.root);
        if (group != "long") fast_group(runner.root);
        if (group != "fast") long_group(runner);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
        return 2;
    }
    return failures == 0 ? 0 : 1;
}
