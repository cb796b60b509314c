#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "optrec/decoder.hpp"
#include "optrec/problem.hpp"

namespace optrec {

/// Nonnegative weights on the atoms of M1 x E. Not necessarily a probability;
/// any finite measure with positive total mass is allowed.
struct DiscreteMeasure {
    std::vector<std::vector<double>> weights;  // [x_index][e_index]
    double total_mass = 0.0;
};

DiscreteMeasure make_measure(std::vector<std::vector<double>> weights);
DiscreteMeasure uniform_measure(std::size_t n_model, std::size_t n_noise);

/// Pushforward along the forward map: one mass per measurement group.
struct PushforwardMeasure {
    std::vector<double> group_mass;  // parallel to table groups
    double total = 0.0;              // sum of the group masses
};

PushforwardMeasure pushforward(const DiscreteMeasure& mu, const MeasurementTable& t);

/// Conditional probabilities per measurement group. Groups with zero
/// pushforward mass carry no disintegration (they are null under F_*mu).
struct Disintegration {
    /// group_weights[g] is parallel to t.groups[g].members; empty when undefined.
    std::vector<std::vector<double>> group_weights;
    std::vector<bool> defined;

    bool is_defined(std::size_t g) const { return defined[g]; }
};

Disintegration disintegrate(const DiscreteMeasure& mu, const MeasurementTable& t);

/// Discrete essential supremum: max of values over atoms of strictly
/// positive weight. Throws if every weight is zero.
double ess_sup_discrete(const std::vector<double>& values,
                        const std::vector<double>& weights);

/// Atomwise reconstruction error r(x,e) = sup-Hausdorff distance from x to
/// the decoder output on the group of (x,e).
struct ResidualMap {
    std::vector<std::vector<double>> r;  // [x_index][e_index]
};

ResidualMap residual(const Problem& p, const MeasurementTable& t,
                     const SetValuedDecoder& dec);

constexpr double order_inf = std::numeric_limits<double>::infinity();

/// p-th order error of a residual map: the L^p(mu) norm of r, with the
/// discrete essential supremum at p = inf.
double err_a(const ResidualMap& r, const DiscreteMeasure& mu, double p);

}  // namespace optrec
