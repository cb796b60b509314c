#pragma once

#include <optional>
#include <string>
#include <vector>

#include "optrec/average_case.hpp"
#include "optrec/decoder_eval.hpp"
#include "optrec/measure.hpp"
#include "optrec/problem.hpp"
#include "optrec/worst_case.hpp"

namespace optrec {

/// Schema violation in user-supplied JSON; the message is path-addressed
/// (e.g. "forward.matrix[1]: ragged row").
struct spec_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParsedSpec {
    Problem problem;
    DiscreteMeasure measure;  // uniform when the spec omits it
    bool measure_given = false;
};

/// Parses and validates a problem-spec JSON document. Defaults: uniform
/// measure, grouping_tol 1e-9, Euclidean metrics inferred from dimensions.
ParsedSpec parse_problem_spec(const std::string& text);

/// Canonical serialization: sorted keys, shortest round-trip decimals.
/// parse(canonical_spec_json(parse(s))) == parse(s) is a fixed point.
std::string canonical_spec_json(const ParsedSpec& spec);

/// FNV-1a hash of the canonical spec, as a hex string.
std::string config_hash_hex(const std::string& canonical);

/// Decoder table JSON: {"outputs": [{"key": [ints], "points": [[..],..]}]}.
/// Must cover every group key of the table.
SetValuedDecoder load_decoder_table(const std::string& text, const MeasurementTable& t);

/// Sweep family JSON: {"models": [forward-model spec, ...]}.
std::vector<ForwardModel> parse_forward_family(const std::string& text);

/// The built-in two-point fixture: recover (x1,x2) from x1, with the model
/// class {(0,0),(0,1)}, noiseless, and weights (alpha, 1-alpha).
ParsedSpec two_point_fixture(double alpha);

struct RunReport {
    std::string command;
    std::string config_hash;
    std::optional<WorstCaseReport> worst;
    std::optional<AverageReport> average;
    std::optional<GapReport> gap;
    std::optional<SweepResult> sweep;
};

std::string emit_report_json(const RunReport& r);
std::string emit_report_csv(const RunReport& r);

/// JSON array rendering of a point list (used by `decode`).
std::string points_json(const std::vector<Point>& pts);

}  // namespace optrec
