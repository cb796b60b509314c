#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "optrec/metric.hpp"
#include "optrec/point.hpp"

namespace optrec {

using Matrix = std::vector<std::vector<double>>;  // rectangular, row-major

struct ModelClass {
    std::vector<Point> points;  // no duplicates (exact equality)
};

struct NoiseClass {
    std::vector<Point> points;  // noiseless model is the singleton {0}
};

struct LinearAdditive {
    Matrix matrix;  // y = Ax + e
};

struct LinearMultiplicative {
    Matrix matrix;  // y = Ax (.) e
};

/// y = Ax (.) e1 + e2, where the noise point of dimension 2m carries
/// e1 = first m coordinates and e2 = last m.
struct MixedNoise {
    Matrix matrix;
};

struct TableForward {
    std::vector<std::vector<Point>> values;  // values[x_index][e_index]
};

using ForwardModel =
    std::variant<LinearAdditive, LinearMultiplicative, MixedNoise, TableForward>;

struct Problem {
    MetricSpace metric_x;
    MetricSpace metric_y;
    ModelClass model_class;
    NoiseClass noise_class;
    ForwardModel forward;
    double grouping_tol = 1e-9;
};

/// Throws std::invalid_argument on any dimension inconsistency, duplicate
/// model point, non-finite entry or non-positive grouping tolerance.
void validate_problem(const Problem& p);

Point forward_eval(const Problem& p, std::size_t x_index, std::size_t e_index);

struct MeasurementGroup {
    GroupKey key;
    Point representative;                                   // forward value of the first member
    std::vector<std::pair<std::size_t, std::size_t>> members;  // (x_index, e_index), ascending
    std::vector<std::size_t> x_proj;  // unique x indices, points in lexicographic order
};

struct MeasurementTable {
    std::vector<MeasurementGroup> groups;             // sorted by key
    std::vector<std::vector<std::size_t>> atom_group;  // [x_index][e_index] -> group index

    /// Index of the group with the given key; throws if absent.
    std::size_t group_index(const GroupKey& key) const;
    /// Group index if present.
    const MeasurementGroup* find(const GroupKey& key) const;
};

/// Partitions M1 x E into measurement groups by per-coordinate quantization
/// of the forward values with the problem's grouping tolerance.
MeasurementTable build_measurement_table(const Problem& p);

/// The x-projection of the feasible set F_y as points, lexicographically sorted.
std::vector<Point> feasible_points(const Problem& p, const MeasurementGroup& g);

struct FeasibleSet {
    std::vector<std::pair<std::size_t, std::size_t>> members;
    std::vector<Point> x_points;
};

FeasibleSet feasible_set(const Problem& p, const MeasurementTable& t, const GroupKey& key);

}  // namespace optrec
