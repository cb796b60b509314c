#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optrec/average_case.hpp"
#include "optrec/measure.hpp"
#include "optrec/problem.hpp"
#include "optrec/worst_case.hpp"

namespace optrec {

enum class BaselineKind { first_feasible, constant, full_feasible, random_feasible };

std::string to_string(BaselineKind k);
BaselineKind baseline_from_string(const std::string& s);

struct BaselineOptions {
    Point constant_point;  // required for BaselineKind::constant
    std::uint64_t seed = 0;
};

SetValuedDecoder make_baseline(BaselineKind kind, const Problem& p,
                               const MeasurementTable& t,
                               const BaselineOptions& opt = {});

struct GapRow {
    std::string name;
    double worst_error = 0.0;
    std::map<double, double> avg_errors;  // p -> Err^a(phi, p)
    double ratio_to_kersize = 0.0;        // valid only when kersize > 0
    double ratio_to_half_kersize = 0.0;
    bool ratios_valid = false;
};

struct GapReport {
    double kersize_worst = 0.0;
    std::map<double, double> kersize_avg;  // p -> average kernel size
    std::vector<GapRow> rows;
};

GapReport evaluate_decoder(const Problem& p, const MeasurementTable& t,
                           const DiscreteMeasure& mu, const SetValuedDecoder& dec,
                           const std::string& name, const std::vector<double>& orders);

/// Robust null-space property certificate: constants D1, D2 of the inequality
/// |h|_1 <= D1 dist(h, M1-M1) + D2 |Ah|_3.
struct RnspCertificate {
    double d1 = 1.0;
    double d2 = 1.0;
    // lp exponents for the three norms; all default to the Euclidean norm
    double q1 = 2.0;
    double q2 = 2.0;
    double q3 = 2.0;
};

struct RnspVerdict {
    bool pass = false;
    double kersize = 0.0;
    double eta = 0.0;    // diameter of the noise class under metric_y
    double bound = 0.0;  // D2 * eta
};

/// Consequence check of the certificate: kersize <= D2 * eta + 1e-9.
/// Requires a linear_additive forward model.
RnspVerdict check_rnsp_bound(const Problem& p, const MeasurementTable& t,
                             const RnspCertificate& cert);

/// Sampled falsification of the certificate hypothesis. A returned h proves
/// the certificate false; absence proves nothing (inconclusive).
std::optional<Point> rnsp_falsify(const Matrix& a, const ModelClass& m1,
                                  const RnspCertificate& cert, std::size_t probes,
                                  std::uint64_t seed);

struct SweepResult {
    std::vector<double> kersizes;       // per model, in family order
    std::vector<std::size_t> best_ids;  // all minimizers within 1e-12
    std::size_t selected = 0;           // lexicographically smallest minimizer id
};

/// Worst-case kernel size of every model in a finite forward-model family on
/// shared (M1, E) data, plus the family argmin.
SweepResult forward_model_sweep(const std::vector<ForwardModel>& family,
                                const MetricSpace& metric_x, const MetricSpace& metric_y,
                                const ModelClass& m1, const NoiseClass& e,
                                double grouping_tol = 1e-9);

}  // namespace optrec
