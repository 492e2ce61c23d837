#include <benchmark/benchmark.h>

#include <vector>

#include "mggpo/gp.hpp"
#include "mggpo/metrics.hpp"
#include "mggpo/problems.hpp"
#include "mggpo/rng.hpp"
#include "mggpo/selection.hpp"
#include "mggpo/variation.hpp"

using namespace mggpo;

namespace {

std::vector<DecisionVector> random_points(RngStream& rng, std::size_t n, std::size_t p) {
    std::vector<DecisionVector> out(n, DecisionVector(p));
    for (auto& x : out)
        for (double& v : x) v = rng.uniform();
    return out;
}

// Training data shaped like one generation: 2N points, f2 of ZDT1.
struct Training {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

Training zdt1_training(std::size_t n, std::size_t p) {
    RngStream rng(7);
    const auto pts = random_points(rng, n, p);
    Training t{gp::to_matrix(pts), Eigen::VectorXd(static_cast<Eigen::Index>(n))};
    for (std::size_t i = 0; i < n; ++i) t.y(static_cast<Eigen::Index>(i)) = problems::zdt1(pts[i])[1];
    return t;
}

void BM_GpFit(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const auto t = zdt1_training(160, p);
    gp::FitOptions opt;
    for (auto _ : state) {
        RngStream rng(1);
        benchmark::DoNotOptimize(gp::fit(t.X, t.y, opt, rng));
    }
}
BENCHMARK(BM_GpFit)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_GpPredictBatch(benchmark::State& state) {
    const auto p = static_cast<std::size_t>(state.range(0));
    const auto t = zdt1_training(160, p);
    gp::KernelParams kp{1.0, std::vector<double>(p, 0.5)};
    const auto model = gp::GpModel::with_params(t.X, t.y, t.y.mean(), kp);
    RngStream rng(2);
    const auto cand = gp::to_matrix(random_points(rng, 3200, p));
    Eigen::VectorXd mean, sigma;
    for (auto _ : state) {
        model.predict_batch(cand, mean, sigma);
        benchmark::DoNotOptimize(mean.data());
    }
}
BENCHMARK(BM_GpPredictBatch)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_NonDominatedSort(benchmark::State& state) {
    RngStream rng(3);
    std::vector<ObjectiveVector> objs(static_cast<std::size_t>(state.range(0)));
    for (auto& f : objs) f = {rng.uniform(), rng.uniform()};
    for (auto _ : state) benchmark::DoNotOptimize(selection::non_dominated_sort(objs));
}
BENCHMARK(BM_NonDominatedSort)->Arg(160)->Arg(3200)->Unit(benchmark::kMicrosecond);

void BM_SelectBest(benchmark::State& state) {
    RngStream rng(4);
    std::vector<ObjectiveVector> objs(3200);
    for (auto& f : objs) f = {rng.uniform(), rng.uniform()};
    const auto tr = state.range(0) ? selection::Truncation::iterative : selection::Truncation::one_shot;
    for (auto _ : state) benchmark::DoNotOptimize(selection::select_best(objs, 80, tr));
}
BENCHMARK(BM_SelectBest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Hypervolume(benchmark::State& state) {
    const auto front = problems::reference_front("zdt3", static_cast<std::size_t>(state.range(0))).points;
    for (auto _ : state) benchmark::DoNotOptimize(metrics::hypervolume_2d(front, {1, 1}));
}
BENCHMARK(BM_Hypervolume)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_GenerateCandidates(benchmark::State& state) {
    RngStream rng(5);
    const auto parents = random_points(rng, 80, 30);
    variation::VariationParams params;
    for (auto _ : state) benchmark::DoNotOptimize(variation::generate_candidates(parents, params, rng));
}
BENCHMARK(BM_GenerateCandidates)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
