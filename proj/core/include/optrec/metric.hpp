#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "optrec/point.hpp"

namespace optrec {

struct EuclideanMetric {
    std::size_t dimension = 0;
};

struct WeightedLpMetric {
    double exponent = 1.0;                // q >= 1
    std::vector<double> weights;          // one positive weight per coordinate
};

/// Explicit pairwise distances over a declared point list. Points are
/// identified by exact coordinate equality against that list, so non-norm
/// dissimilarities can be used without any geometry.
struct TableMetric {
    std::vector<Point> points;
    std::vector<std::vector<double>> distances;
};

class MetricSpace {
public:
    static MetricSpace euclidean(std::size_t dimension);
    static MetricSpace weighted_lp(double exponent, std::vector<double> weights);
    /// Shape and non-negativity are checked here; the metric axioms of a
    /// user-supplied table are checked separately via check_metric_axioms.
    static MetricSpace table(std::vector<Point> points,
                             std::vector<std::vector<double>> distances);

    double dist(const Point& a, const Point& b) const;

    bool is_euclidean() const { return std::holds_alternative<EuclideanMetric>(kind_); }
    bool is_table() const { return std::holds_alternative<TableMetric>(kind_); }
    /// Coordinate dimension (for a table, the dimension of its declared points).
    std::size_t dimension() const;
    std::string kind_name() const;

    const std::variant<EuclideanMetric, WeightedLpMetric, TableMetric>& kind() const {
        return kind_;
    }

private:
    explicit MetricSpace(std::variant<EuclideanMetric, WeightedLpMetric, TableMetric> k)
        : kind_(std::move(k)) {}
    std::variant<EuclideanMetric, WeightedLpMetric, TableMetric> kind_;
};

/// max over all pairs; 0 for singletons.
double diameter(const MetricSpace& m, const std::vector<Point>& a);

/// Symmetric Hausdorff distance between finite sets.
double hausdorff_set_set(const MetricSpace& m, const std::vector<Point>& a,
                         const std::vector<Point>& b);

/// Point-to-set Hausdorff distance, sup convention: sup_{b in B} d(a,b).
/// Not the usual inf-distance; every element of B is charged.
double hausdorff_point_set(const MetricSpace& m, const Point& a,
                           const std::vector<Point>& b);

/// Usual point-to-set distance: inf_{b in B} d(a,b).
double dist_point_set(const MetricSpace& m, const Point& a,
                      const std::vector<Point>& b);

struct MetricAxiomVerdict {
    bool pass = true;
    std::string violated;         // "symmetry" | "identity" | "triangle"
    std::array<Point, 3> witness; // first violating triple (unused slots empty)
};

/// Verifies symmetry, identity of indiscernibles and the triangle inequality
/// on all triples from the sample. Returns the first violation found.
MetricAxiomVerdict check_metric_axioms(const MetricSpace& m,
                                       const std::vector<Point>& sample);

}  // namespace optrec
