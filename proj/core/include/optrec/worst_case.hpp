#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "optrec/decoder.hpp"
#include "optrec/metric.hpp"
#include "optrec/problem.hpp"

namespace optrec {

enum class ChebyshevSolver { meb_euclidean, candidate_argmin };

struct ChebyshevResult {
    std::vector<Point> centers;  // all minimizers within tie_tol, lexicographic order
    double radius = 0.0;
    ChebyshevSolver solver = ChebyshevSolver::meb_euclidean;
    double tie_tol = 1e-9;
};

/// Worst-case kernel size: max over measurement groups of the diameter of
/// the feasible set's x-projection.
double kersize_worst(const Problem& p, const MeasurementTable& t);

/// Exact minimum enclosing ball in Euclidean space. The returned radius is
/// the max distance from the center, re-evaluated over all input points.
ChebyshevResult chebyshev_center_euclidean(const std::vector<Point>& points,
                                           double tol = 1e-9);

/// Minimax evaluation of f(z) = max_{x in feasible} d(x,z) over a finite
/// candidate set. All candidates within tie_tol of the minimum are returned,
/// which makes the decoder genuinely set-valued.
ChebyshevResult chebyshev_center_candidates(const MetricSpace& m,
                                            const std::vector<Point>& feasible,
                                            const std::vector<Point>& candidates,
                                            double tie_tol = 1e-9);

enum class CandidatePolicy { euclidean_meb, feasible_points, feasible_plus_grid };

std::string to_string(CandidatePolicy p);

struct WorstDecoderOptions {
    CandidatePolicy policy = CandidatePolicy::euclidean_meb;
    double grid_step = 0.1;  // used by feasible_plus_grid
    double tie_tol = 1e-9;
    int threads = 1;
};

/// The worst-case optimal decoder: per group, the Chebyshev centers of the
/// feasible set under the chosen candidate policy.
SetValuedDecoder optimal_decoder_worst(const Problem& p, const MeasurementTable& t,
                                       const WorstDecoderOptions& opt = {});

/// Worst-case error of a decoder: max over all atoms (x,e) of the
/// sup-Hausdorff distance from x to the decoder output on the atom's group.
double worst_case_error(const Problem& p, const MeasurementTable& t,
                        const SetValuedDecoder& dec);

struct WorstGroupRow {
    GroupKey key;
    std::size_t feasible_size = 0;  // |x-projection of F_y|
    double diameter = 0.0;
    double radius = 0.0;
    std::vector<Point> centers;
};

struct WorstCaseReport {
    double kersize = 0.0;
    double decoder_error = 0.0;
    CandidatePolicy policy = CandidatePolicy::euclidean_meb;
    double tol = 1e-6;
    bool lower_verdict = false;      // kersize/2 - tol <= error
    bool upper_verdict = false;      // error <= kersize + tol
    bool upper_applicable = false;   // asserted only for euclidean_meb
    std::vector<WorstGroupRow> groups;
    SetValuedDecoder decoder;
};

WorstCaseReport worst_case_report(const Problem& p, const WorstDecoderOptions& opt = {});
WorstCaseReport worst_case_report(const Problem& p, const MeasurementTable& t,
                                  const WorstDecoderOptions& opt = {});

}  // namespace optrec
