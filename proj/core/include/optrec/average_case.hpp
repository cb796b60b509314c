#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "optrec/measure.hpp"
#include "optrec/problem.hpp"
#include "optrec/worst_case.hpp"

namespace optrec {

/// Average kernel size of order p in [1, inf]: the weighted pairwise distance
/// within feasible sets, integrated against the disintegration and the
/// pushforward; essential suprema at p = inf.
double kersize_average(const Problem& p, const MeasurementTable& t,
                       const DiscreteMeasure& mu, const Disintegration& dis,
                       double order);

/// Coordinatewise average; weights must sum to 1 within 1e-9.
Point weighted_mean(const std::vector<Point>& points,
                    const std::vector<double>& weights);

/// Weighted geometric median via Weiszfeld iteration with anchor handling.
/// The returned point is the best of the final iterate and every data point.
Point weighted_geometric_median(const std::vector<Point>& points,
                                const std::vector<double>& weights,
                                double tol = 1e-12, std::size_t max_iters = 200000);

/// Posterior over distinct model points per group: the disintegration with
/// the noise component marginalized out.
struct PosteriorDistribution {
    /// parallel to table groups; empty for groups without disintegration
    std::vector<std::vector<std::size_t>> x_indices;  // lexicographic point order
    std::vector<std::vector<double>> weights;
};

PosteriorDistribution posterior_distribution(const Problem& p, const MeasurementTable& t,
                                             const Disintegration& dis);

enum class AveragePolicy { mean, median, candidate_argmin, support_chebyshev };

std::string to_string(AveragePolicy p);

struct AverageDecoderOptions {
    AveragePolicy policy = AveragePolicy::mean;
    std::vector<Point> candidates;  // for candidate_argmin
    double tie_tol = 1e-9;
    int threads = 1;
};

/// The average-case optimal decoder of order p. Groups with zero pushforward
/// mass fall back to a uniform posterior over the feasible set so the decoder
/// stays total; they contribute nothing to average errors.
SetValuedDecoder optimal_decoder_average(const Problem& p, const MeasurementTable& t,
                                         const Disintegration& dis, double order,
                                         const AverageDecoderOptions& opt = {});

struct AverageGroupRow {
    GroupKey key;
    std::size_t posterior_support = 0;
    std::vector<Point> outputs;
    double error_contribution = 0.0;  // sum of w * r^p over the group (max for p=inf)
};

struct AverageReport {
    double order = 2.0;
    double kersize = 0.0;
    double decoder_error = 0.0;
    AveragePolicy policy = AveragePolicy::mean;
    double tol = 1e-6;
    bool lower_verdict = false;     // kersize/2 - 1e-9 <= error
    bool upper_verdict = false;     // error <= kersize + tol
    bool upper_applicable = false;  // asserted only for exact policies
    std::vector<AverageGroupRow> groups;
    SetValuedDecoder decoder;
};

AverageReport average_report(const Problem& p, const DiscreteMeasure& mu, double order,
                             const AverageDecoderOptions& opt = {});
AverageReport average_report(const Problem& p, const MeasurementTable& t,
                             const DiscreteMeasure& mu, double order,
                             const AverageDecoderOptions& opt = {});

}  // namespace optrec
