#include "mggpo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mggpo::metrics {

double hypervolume_2d(const std::vector<ObjectiveVector>& front, const ObjectiveVector& ref) {
    if (ref.size() != 2) throw DimensionError(2, ref.size(), "hypervolume_2d reference point");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(front.size());
    for (const auto& p : front) {
        if (p.size() != 2) throw DimensionError(2, p.size(), "hypervolume_2d point");
        if (p[0] < ref[0] && p[1] < ref[1]) pts.emplace_back(p[0], p[1]);
    }
    std::sort(pts.begin(), pts.end());
    double hv = 0.0;
    double prev_f2 = ref[1];
    for (const auto& [f1, f2] : pts) {
        if (f2 < prev_f2) {
            hv += (ref[0] - f1) * (prev_f2 - f2);
            prev_f2 = f2;
        }
    }
    return hv;
}

double igd(const std::vector<ObjectiveVector>& front, const std::vector<ObjectiveVector>& reference) {
    if (front.empty()) throw Error("igd: empty front");
    if (reference.empty()) throw Error("igd: empty reference set");
    double total = 0.0;
    for (const auto& r : reference) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : front) {
            if (p.size() != r.size()) throw DimensionError(r.size(), p.size(), "igd");
            double sq = 0.0;
            for (std::size_t k = 0; k < r.size(); ++k) sq += (p[k] - r[k]) * (p[k] - r[k]);
            best = std::min(best, sq);
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.size());
}

namespace {

// Midranks of the pooled sample, doubled so they are integers.
std::vector<long> doubled_midranks(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
    std::vector<long> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        // positions i..j (0-based) share rank ((i+1)+(j+1))/2
        const long twice = static_cast<long>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = twice;
        i = j + 1;
    }
    return ranks;
}

// P(|S - mu| >= |s_obs - mu|) where S is the doubled rank sum of a random
// `k`-subset of `ranks`.
double exact_two_sided(const std::vector<long>& ranks, std::size_t k, long s_obs) {
    const long total = std::accumulate(ranks.begin(), ranks.end(), 0L);
    const std::size_t n = ranks.size();
    // counts[j][s]: number of j-subsets with doubled rank sum s
    std::vector<std::vector<double>> counts(k + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
    counts[0][0] = 1.0;
    for (std::size_t item = 0; item < n; ++item) {
        const auto r = static_cast<std::size_t>(ranks[item]);
        for (std::size_t j = std::min(k, item + 1); j >= 1; --j) {
            auto& dst = counts[j];
            const auto& src = counts[j - 1];
            for (std::size_t s = dst.size(); s-- > r;) dst[s] += src[s - r];
        }
    }
    // mean of S (doubled) = k * (n + 1)
    const long mu = static_cast<long>(k * (n + 1));
    const long dev = std::abs(s_obs - mu);
    double extreme = 0.0, all = 0.0;
    for (std::size_t s = 0; s < counts[k].size(); ++s) {
        const double c = counts[k][s];
        if (c == 0.0) continue;
        all += c;
        if (std::abs(static_cast<long>(s) - mu) >= dev) extreme += c;
    }
    return std::min(1.0, extreme / all);
}

} // namespace

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw Error("rank_sum_test: empty sample");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = doubled_midranks(pooled);
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t total = n + m;

    long sum_a2 = 0;
    for (std::size_t i = 0; i < n; ++i) sum_a2 += ranks[i];

    RankSumResult res;
    res.rank_sum_a = 0.5 * static_cast<double>(sum_a2);

    if (std::min(n, m) <= kExactRankSumLimit) {
        res.exact = true;
        // The smaller sample keeps the subset-count table small; the test is symmetric.
        if (n <= m) {
            res.p_value = exact_two_sided(ranks, n, sum_a2);
        } else {
            long sum_b2 = 0;
            for (std::size_t i = n; i < total; ++i) sum_b2 += ranks[i];
            std::vector<long> reordered(ranks.begin() + static_cast<std::ptrdiff_t>(n), ranks.end());
            reordered.insert(reordered.end(), ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(n));
            res.p_value = exact_two_sided(reordered, m, sum_b2);
        }
        return res;
    }

    // Normal approximation with tie correction.
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < total;) {
        std::size_t j = i;
        while (j < total && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double nn = static_cast<double>(n), mm = static_cast<double>(m), N = static_cast<double>(total);
    const double mu = nn * (N + 1.0) / 2.0;
    const double var = nn * mm / 12.0 * ((N + 1.0) - tie_term / (N * (N - 1.0)));
    if (!(var > 0.0)) {
        res.p_value = 1.0;
        return res;
    }
    const double dev = std::max(0.0, std::abs(res.rank_sum_a - mu) - 0.5);
    res.p_value = std::min(1.0, std::erfc(dev / std::sqrt(var) / std::sqrt(2.0)));
    return res;
}

double median(std::vector<double> v) {
    if (v.empty()) throw Error("median of empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

Outcome wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double alpha, Direction direction) {
    if (a.size() < 3 || b.size() < 3) throw Error("wilcoxon_rank_sum: samples need at least 3 values");
    const auto res = rank_sum_test(a, b);
    if (!(res.p_value < alpha)) return Outcome::no_winner;
    const double med_a = median({a.begin(), a.end()});
    const double med_b = median({b.begin(), b.end()});
    bool a_better;
    if (med_a != med_b) {
        a_better = direction == Direction::minimize ? med_a < med_b : med_a > med_b;
    } else {
        const double mean_rank_a = res.rank_sum_a / static_cast<double>(a.size());
        const double n_total = static_cast<double>(a.size() + b.size());
        const double mean_rank_b = (n_total * (n_total + 1.0) / 2.0 - res.rank_sum_a) / static_cast<double>(b.size());
        if (mean_rank_a == mean_rank_b) return Outcome::no_winner;
        a_better = direction == Direction::minimize ? mean_rank_a < mean_rank_b : mean_rank_a > mean_rank_b;
    }
    return a_better ? Outcome::win_a : Outcome::win_b;
}

int outcome_code(Outcome o) noexcept {
    switch (o) {
    case Outcome::win_a: return 1;
    case Outcome::win_b: return -1;
    case Outcome::no_winner: return 0;
    }
    return 0;
}

} // namespace mggpo::metrics
