#include "mggpo/selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace mggpo::selection {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size()) throw DimensionError(a.size(), b.size(), "dominates");
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& objs, const std::vector<std::size_t>& front) {
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    const std::size_t m = objs[front[0]].size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return objs[front[a]][k] < objs[front[b]][k]; });
        const double lo = objs[front[order.front()]][k];
        const double hi = objs[front[order.back()]][k];
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        const double range = hi - lo;
        if (!(range > 0.0)) continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            dist[order[i]] += (objs[front[order[i + 1]]][k] - objs[front[order[i - 1]]][k]) / range;
        }
    }
    return dist;
}

SortedFronts non_dominated_sort(const std::vector<ObjectiveVector>& objs) {
    const std::size_t n = objs.size();
    SortedFronts out;
    out.rank.assign(n, 0);
    out.crowding.assign(n, 0.0);
    if (n == 0) return out;

    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> dom_count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objs[i], objs[j])) {
                dominated_by_me[i].push_back(j);
                ++dom_count[j];
            } else if (dominates(objs[j], objs[i])) {
                dominated_by_me[j].push_back(i);
                ++dom_count[i];
            }
        }
    }
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (dom_count[i] == 0) current.push_back(i);
    }
    std::size_t r = 0;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            out.rank[i] = r;
            for (std::size_t j : dominated_by_me[i]) {
                if (--dom_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        out.fronts.push_back(std::move(current));
        current = std::move(next);
        ++r;
    }
    for (const auto& front : out.fronts) {
        const auto d = crowding_distance(objs, front);
        for (std::size_t i = 0; i < front.size(); ++i) out.crowding[front[i]] = d[i];
    }
    return out;
}

std::vector<std::size_t> select_best(const std::vector<ObjectiveVector>& objs, std::size_t n, Truncation truncation) {
    if (objs.size() < n)
        throw Error("select_best: need at least " + std::to_string(n) + " inputs, got " + std::to_string(objs.size()));
    std::vector<std::size_t> chosen;
    chosen.reserve(n);
    if (n == 0) return chosen;
    const auto sorted = non_dominated_sort(objs);
    for (const auto& front : sorted.fronts) {
        if (chosen.size() + front.size() > n && truncation == Truncation::iterative) {
            std::vector<std::size_t> members = front;
            while (chosen.size() + members.size() > n) {
                const auto d = crowding_distance(objs, members);
                // Most crowded member; among equals the highest index goes.
                std::size_t worst = 0;
                for (std::size_t i = 1; i < members.size(); ++i) {
                    if (d[i] <= d[worst]) worst = i;
                }
                members.erase(members.begin() + static_cast<std::ptrdiff_t>(worst));
            }
            chosen.insert(chosen.end(), members.begin(), members.end());
            return chosen;
        }
        std::vector<std::size_t> members = front;
        std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return sorted.crowding[a] > sorted.crowding[b];
        });
        for (std::size_t idx : members) {
            if (chosen.size() == n) return chosen;
            chosen.push_back(idx);
        }
        if (chosen.size() == n) return chosen;
    }
    return chosen;
}

std::vector<std::size_t> non_dominated_indices(const std::vector<ObjectiveVector>& objs) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < objs.size() && !dominated; ++j) {
            dominated = (j != i) && dominates(objs[j], objs[i]);
        }
        if (!dominated) out.push_back(i);
    }
    return out;
}

} // namespace mggpo::selection
