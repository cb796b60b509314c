#include "optrec/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace optrec {

MetricSpace MetricSpace::euclidean(std::size_t dimension) {
    if (dimension == 0)
        throw std::invalid_argument("euclidean metric: dimension must be >= 1");
    return MetricSpace(EuclideanMetric{dimension});
}

MetricSpace MetricSpace::weighted_lp(double exponent, std::vector<double> weights) {
    if (!(exponent >= 1.0))
        throw std::invalid_argument("weighted_lp metric: exponent must be >= 1");
    if (weights.empty())
        throw std::invalid_argument("weighted_lp metric: needs at least one weight");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw std::invalid_argument("weighted_lp metric: weights must be positive and finite");
    return MetricSpace(WeightedLpMetric{exponent, std::move(weights)});
}

MetricSpace MetricSpace::table(std::vector<Point> points,
                               std::vector<std::vector<double>> distances) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("table metric: empty point list");
    for (const auto& p : points) validate_point(p, "table metric point");
    for (std::size_t i = 1; i < n; ++i)
        if (points[i].size() != points[0].size())
            throw std::invalid_argument("table metric: inconsistent point dimensions");
    if (distances.size() != n)
        throw std::invalid_argument("table metric: distance matrix must be n x n");
    for (const auto& row : distances) {
        if (row.size() != n)
            throw std::invalid_argument("table metric: distance matrix must be n x n");
        for (double d : row)
            if (!std::isfinite(d) || d < 0.0)
                throw std::invalid_argument("table metric: distances must be finite and >= 0");
    }
    return MetricSpace(TableMetric{std::move(points), std::move(distances)});
}

std::size_t MetricSpace::dimension() const {
    if (const auto* e = std::get_if<EuclideanMetric>(&kind_)) return e->dimension;
    if (const auto* w = std::get_if<WeightedLpMetric>(&kind_)) return w->weights.size();
    return std::get<TableMetric>(kind_).points[0].size();
}

std::string MetricSpace::kind_name() const {
    if (std::holds_alternative<EuclideanMetric>(kind_)) return "euclidean";
    if (std::holds_alternative<WeightedLpMetric>(kind_)) return "weighted_lp";
    return "table";
}

namespace {

std::size_t table_index(const TableMetric& t, const Point& p) {
    for (std::size_t i = 0; i < t.points.size(); ++i)
        if (t.points[i] == p) return i;
    throw std::invalid_argument("table metric: point not in the declared point list");
}

}  // namespace

double MetricSpace::dist(const Point& a, const Point& b) const {
    if (const auto* e = std::get_if<EuclideanMetric>(&kind_)) {
        if (a.size() != e->dimension || b.size() != e->dimension)
            throw std::invalid_argument("dist: dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    if (const auto* w = std::get_if<WeightedLpMetric>(&kind_)) {
        if (a.size() != w->weights.size() || b.size() != w->weights.size())
            throw std::invalid_argument("dist: dimension mismatch");
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += w->weights[i] * std::pow(std::fabs(a[i] - b[i]), w->exponent);
        return std::pow(s, 1.0 / w->exponent);
    }
    const auto& t = std::get<TableMetric>(kind_);
    return t.distances[table_index(t, a)][table_index(t, b)];
}

double diameter(const MetricSpace& m, const std::vector<Point>& a) {
    if (a.empty()) throw std::invalid_argument("diameter: empty set");
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            best = std::max(best, m.dist(a[i], a[j]));
    return best;
}

namespace {

double directed_hausdorff(const MetricSpace& m, const std::vector<Point>& a,
                          const std::vector<Point>& b) {
    double sup = 0.0;
    for (const auto& p : a) {
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& q : b) inf = std::min(inf, m.dist(p, q));
        sup = std::max(sup, inf);
    }
    return sup;
}

}  // namespace

double hausdorff_set_set(const MetricSpace& m, const std::vector<Point>& a,
                         const std::vector<Point>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("hausdorff_set_set: empty operand");
    return std::max(directed_hausdorff(m, a, b), directed_hausdorff(m, b, a));
}

double hausdorff_point_set(const MetricSpace& m, const Point& a,
                           const std::vector<Point>& b) {
    if (b.empty()) throw std::invalid_argument("hausdorff_point_set: empty set");
    double sup = 0.0;
    for (const auto& q : b) sup = std::max(sup, m.dist(a, q));
    return sup;
}

double dist_point_set(const MetricSpace& m, const Point& a,
                      const std::vector<Point>& b) {
    if (b.empty()) throw std::invalid_argument("dist_point_set: empty set");
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& q : b) inf = std::min(inf, m.dist(a, q));
    return inf;
}

MetricAxiomVerdict check_metric_axioms(const MetricSpace& m,
                                       const std::vector<Point>& sample) {
    if (sample.empty())
        throw std::invalid_argument("check_metric_axioms: empty sample");
    MetricAxiomVerdict v;
    const std::size_t n = sample.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (m.dist(sample[i], sample[i]) != 0.0) {
            v.pass = false;
            v.violated = "identity";
            v.witness = {sample[i], sample[i], Point{}};
            return v;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dij = m.dist(sample[i], sample[j]);
            if (dij != m.dist(sample[j], sample[i])) {
                v.pass = false;
                v.violated = "symmetry";
                v.witness = {sample[i], sample[j], Point{}};
                return v;
            }
            if (dij == 0.0 && sample[i] != sample[j]) {
                v.pass = false;
                v.violated = "identity";
                v.witness = {sample[i], sample[j], Point{}};
                return v;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double dik = m.dist(sample[i], sample[k]);
                const double viaj = m.dist(sample[i], sample[j]) + m.dist(sample[j], sample[k]);
                // tiny slack so float metrics do not self-report violations
                if (dik > viaj + 1e-12 * (1.0 + dik)) {
                    v.pass = false;
                    v.violated = "triangle";
                    v.witness = {sample[i], sample[j], sample[k]};
                    return v;
                }
            }
    return v;
}

}  // namespace optrec
