#include "mggpo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mggpo::problems {

namespace {

void require_dimension(std::span<const double> x, const char* what) {
    if (x.size() < 2) throw DimensionError(2, x.size(), what);
}

// 1 + 9/(P-1) * sum_{i>=2} x_i
double zdt_g(std::span<const double> x) {
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += x[i];
    return 1.0 + 9.0 * sum / static_cast<double>(x.size() - 1);
}

double zdt3_f2(double f1, double g) {
    const double r = f1 / g;
    return g * (1.0 - std::sqrt(r) - r * std::sin(10.0 * std::numbers::pi * f1));
}

double zdt6_f1(double x1) {
    const double s = std::sin(6.0 * std::numbers::pi * x1);
    return 1.0 - std::exp(-4.0 * x1) * std::pow(s, 6);
}

// Keep the points of a set already sorted by f1 (ties by f2) that no other point dominates.
std::vector<ObjectiveVector> nondominated_sorted(std::vector<ObjectiveVector> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<ObjectiveVector> out;
    double best_f2 = std::numeric_limits<double>::infinity();
    for (auto& p : pts) {
        if (p[1] < best_f2) {
            best_f2 = p[1];
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<ObjectiveVector> subsample(const std::vector<ObjectiveVector>& pts, std::size_t count) {
    if (pts.size() <= count) return pts;
    std::vector<ObjectiveVector> out;
    out.reserve(count);
    const double step = static_cast<double>(pts.size() - 1) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(std::llround(step * static_cast<double>(i)));
        out.push_back(pts[std::min(idx, pts.size() - 1)]);
    }
    return out;
}

double grid_x(std::size_t i) {
    return static_cast<double>(i) / static_cast<double>(kFrontGridPoints - 1);
}

} // namespace

ObjectiveVector zdt1(std::span<const double> x) {
    require_dimension(x, "zdt1");
    const double g = zdt_g(x);
    const double f1 = x[0];
    return {f1, g * (1.0 - std::sqrt(f1 / g))};
}

ObjectiveVector zdt2(std::span<const double> x) {
    require_dimension(x, "zdt2");
    const double g = zdt_g(x);
    const double f1 = x[0];
    const double r = f1 / g;
    return {f1, g * (1.0 - r * r)};
}

ObjectiveVector zdt3(std::span<const double> x) {
    require_dimension(x, "zdt3");
    const double g = zdt_g(x);
    return {x[0], zdt3_f2(x[0], g)};
}

ObjectiveVector zdt6(std::span<const double> x) {
    require_dimension(x, "zdt6");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += x[i];
    const double g = 1.0 + 9.0 * std::pow(sum / static_cast<double>(x.size() - 1), 0.25);
    const double f1 = zdt6_f1(x[0]);
    const double r = f1 / g;
    return {f1, 1.0 - r * r};
}

const std::vector<std::string>& known_problems() {
    static const std::vector<std::string> ids{"zdt1", "zdt2", "zdt3", "zdt6"};
    return ids;
}

ProblemSpec make_problem(std::string_view id, std::size_t dimension) {
    ProblemSpec spec;
    spec.name = std::string(id);
    spec.dimension = dimension;
    spec.objectives = 2;
    spec.lower.assign(dimension, 0.0);
    spec.upper.assign(dimension, 1.0);
    if (id == "zdt1") spec.evaluate = zdt1;
    else if (id == "zdt2") spec.evaluate = zdt2;
    else if (id == "zdt3") spec.evaluate = zdt3;
    else if (id == "zdt6") spec.evaluate = zdt6;
    else throw ConfigError("unknown problem '" + std::string(id) + "'");
    if (dimension < 2) throw ConfigError("problem '" + spec.name + "' needs dimension >= 2");
    spec.validate();
    return spec;
}

ReferenceFront reference_front(std::string_view id, std::size_t resolution) {
    if (resolution < 2) throw ConfigError("reference front resolution must be >= 2");
    ReferenceFront front;
    front.problem = std::string(id);
    auto& pts = front.points;
    pts.reserve(resolution);

    const auto uniform_f1 = [&](double lo, double hi, auto&& f2_of) {
        for (std::size_t i = 0; i < resolution; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(resolution - 1);
            const double f1 = (i + 1 == resolution) ? hi : lo + (hi - lo) * t;
            pts.push_back({f1, f2_of(f1)});
        }
    };

    if (id == "zdt1") {
        uniform_f1(0.0, 1.0, [](double f1) { return 1.0 - std::sqrt(f1); });
    } else if (id == "zdt2") {
        uniform_f1(0.0, 1.0, [](double f1) { return 1.0 - f1 * f1; });
    } else if (id == "zdt3") {
        std::vector<ObjectiveVector> grid;
        grid.reserve(kFrontGridPoints);
        for (std::size_t i = 0; i < kFrontGridPoints; ++i) {
            const double x1 = grid_x(i);
            grid.push_back({x1, zdt3_f2(x1, 1.0)});
        }
        pts = subsample(nondominated_sorted(std::move(grid)), resolution);
    } else if (id == "zdt6") {
        std::vector<ObjectiveVector> grid;
        grid.reserve(kFrontGridPoints);
        for (std::size_t i = 0; i < kFrontGridPoints; ++i) {
            const double f1 = zdt6_f1(grid_x(i));
            grid.push_back({f1, 1.0 - f1 * f1});
        }
        const auto filtered = nondominated_sorted(std::move(grid));
        uniform_f1(filtered.front()[0], filtered.back()[0], [](double f1) { return 1.0 - f1 * f1; });
    } else {
        throw ConfigError("unknown problem '" + std::string(id) + "'");
    }
    return front;
}

} // namespace mggpo::problems
