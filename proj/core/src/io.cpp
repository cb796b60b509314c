#include "optrec/io.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include <json.hpp>

namespace optrec {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw spec_error(path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

Point as_point(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
    Point p;
    p.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        p.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return p;
}

std::vector<Point> as_points(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of points");
    std::vector<Point> pts;
    pts.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        pts.push_back(as_point(j[i], path + "[" + std::to_string(i) + "]"));
    return pts;
}

Matrix as_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty matrix");
    Matrix m;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        Point row = as_point(j[i], rp);
        if (!m.empty() && row.size() != m[0].size()) fail(rp, "ragged row");
        m.push_back(std::move(row));
    }
    return m;
}

MetricSpace parse_metric(const json& j, const std::string& path) {
    const std::string kind = require(j, "kind", path).get<std::string>();
    if (kind == "euclidean") {
        const auto dim = require(j, "dimension", path).get<std::int64_t>();
        if (dim < 1) fail(path + ".dimension", "must be >= 1");
        return MetricSpace::euclidean(static_cast<std::size_t>(dim));
    }
    if (kind == "weighted_lp") {
        const double q = as_number(require(j, "exponent", path), path + ".exponent");
        Point w = as_point(require(j, "weights", path), path + ".weights");
        return MetricSpace::weighted_lp(q, std::move(w));
    }
    if (kind == "table") {
        auto pts = as_points(require(j, "points", path), path + ".points");
        auto d = as_matrix(require(j, "distances", path), path + ".distances");
        auto m = MetricSpace::table(std::move(pts), std::move(d));
        const auto& tm = std::get<TableMetric>(m.kind());
        const auto verdict = check_metric_axioms(m, tm.points);
        if (!verdict.pass) fail(path + ".distances", "violates the " + verdict.violated + " axiom");
        return m;
    }
    fail(path + ".kind", "unknown metric kind '" + kind + "'");
}

ForwardModel parse_forward(const json& j, const std::string& path) {
    const std::string kind = require(j, "kind", path).get<std::string>();
    if (kind == "linear_additive")
        return LinearAdditive{as_matrix(require(j, "matrix", path), path + ".matrix")};
    if (kind == "linear_multiplicative")
        return LinearMultiplicative{as_matrix(require(j, "matrix", path), path + ".matrix")};
    if (kind == "mixed")
        return MixedNoise{as_matrix(require(j, "matrix", path), path + ".matrix")};
    if (kind == "table") {
        const json& v = require(j, "values", path);
        if (!v.is_array() || v.empty()) fail(path + ".values", "expected a non-empty array");
        TableForward tf;
        for (std::size_t xi = 0; xi < v.size(); ++xi)
            tf.values.push_back(
                as_points(v[xi], path + ".values[" + std::to_string(xi) + "]"));
        return tf;
    }
    fail(path + ".kind", "unknown forward kind '" + kind + "'");
}

json metric_json(const MetricSpace& m) {
    json j;
    j["kind"] = m.kind_name();
    if (const auto* e = std::get_if<EuclideanMetric>(&m.kind())) {
        j["dimension"] = e->dimension;
    } else if (const auto* w = std::get_if<WeightedLpMetric>(&m.kind())) {
        j["exponent"] = w->exponent;
        j["weights"] = w->weights;
    } else {
        const auto& t = std::get<TableMetric>(m.kind());
        j["points"] = t.points;
        j["distances"] = t.distances;
    }
    return j;
}

json forward_json(const ForwardModel& f) {
    json j;
    if (const auto* la = std::get_if<LinearAdditive>(&f)) {
        j["kind"] = "linear_additive";
        j["matrix"] = la->matrix;
    } else if (const auto* lm = std::get_if<LinearMultiplicative>(&f)) {
        j["kind"] = "linear_multiplicative";
        j["matrix"] = lm->matrix;
    } else if (const auto* mx = std::get_if<MixedNoise>(&f)) {
        j["kind"] = "mixed";
        j["matrix"] = mx->matrix;
    } else {
        j["kind"] = "table";
        j["values"] = std::get<TableForward>(f).values;
    }
    return j;
}

std::size_t forward_output_dim(const ForwardModel& f) {
    if (const auto* la = std::get_if<LinearAdditive>(&f)) return la->matrix.size();
    if (const auto* lm = std::get_if<LinearMultiplicative>(&f)) return lm->matrix.size();
    if (const auto* mx = std::get_if<MixedNoise>(&f)) return mx->matrix.size();
    return std::get<TableForward>(f).values.at(0).at(0).size();
}

}  // namespace

ParsedSpec parse_problem_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw spec_error(std::string("spec: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw spec_error("spec: expected a JSON object");

    ModelClass m1{as_points(require(require(j, "model_class", "spec"), "points",
                                    "spec.model_class"),
                            "spec.model_class.points")};
    NoiseClass ec{as_points(require(require(j, "noise_class", "spec"), "points",
                                    "spec.noise_class"),
                            "spec.noise_class.points")};
    ForwardModel fwd = parse_forward(require(j, "forward", "spec"), "spec.forward");

    const std::size_t nx = m1.points[0].size();
    const std::size_t ny = forward_output_dim(fwd);

    MetricSpace mx = j.contains("metric_x")
                         ? parse_metric(j["metric_x"], "spec.metric_x")
                         : MetricSpace::euclidean(nx);
    MetricSpace my = j.contains("metric_y")
                         ? parse_metric(j["metric_y"], "spec.metric_y")
                         : MetricSpace::euclidean(ny);

    double tol = 1e-9;
    if (j.contains("grouping_tol")) {
        tol = as_number(j["grouping_tol"], "spec.grouping_tol");
        if (!(tol > 0.0)) fail("spec.grouping_tol", "must be positive");
    }

    Problem problem{std::move(mx), std::move(my), std::move(m1), std::move(ec),
                    std::move(fwd), tol};
    try {
        validate_problem(problem);
    } catch (const std::invalid_argument& e) {
        throw spec_error(std::string("spec: ") + e.what());
    }

    bool measure_given = false;
    DiscreteMeasure mu = uniform_measure(problem.model_class.points.size(),
                                         problem.noise_class.points.size());
    if (j.contains("measure")) {
        const json& w = require(j["measure"], "weights", "spec.measure");
        Matrix wm = as_matrix(w, "spec.measure.weights");
        if (wm.size() != problem.model_class.points.size() ||
            wm[0].size() != problem.noise_class.points.size())
            fail("spec.measure.weights", "must be |M1| x |E|");
        try {
            mu = make_measure(std::move(wm));
        } catch (const std::invalid_argument& e) {
            fail("spec.measure.weights", e.what());
        }
        measure_given = true;
    }
    return ParsedSpec{std::move(problem), std::move(mu), measure_given};
}

std::string canonical_spec_json(const ParsedSpec& spec) {
    json j;
    j["metric_x"] = metric_json(spec.problem.metric_x);
    j["metric_y"] = metric_json(spec.problem.metric_y);
    j["model_class"]["points"] = spec.problem.model_class.points;
    j["noise_class"]["points"] = spec.problem.noise_class.points;
    j["forward"] = forward_json(spec.problem.forward);
    j["grouping_tol"] = spec.problem.grouping_tol;
    if (spec.measure_given) j["measure"]["weights"] = spec.measure.weights;
    return j.dump();
}

std::string config_hash_hex(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

SetValuedDecoder load_decoder_table(const std::string& text, const MeasurementTable& t) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw spec_error(std::string("decoder: invalid JSON: ") + e.what());
    }
    const json& outputs = require(j, "outputs", "decoder");
    if (!outputs.is_array()) fail("decoder.outputs", "expected an array");

    SetValuedDecoder dec;
    dec.outputs.resize(t.groups.size());
    std::vector<bool> seen(t.groups.size(), false);
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        const std::string path = "decoder.outputs[" + std::to_string(i) + "]";
        const json& kj = require(outputs[i], "key", path);
        if (!kj.is_array()) fail(path + ".key", "expected an array of integers");
        GroupKey key;
        for (const auto& v : kj) key.push_back(v.get<long long>());
        const MeasurementGroup* g = t.find(key);
        if (!g) fail(path + ".key", "does not match any measurement group");
        auto pts = as_points(require(outputs[i], "points", path), path + ".points");
        std::sort(pts.begin(), pts.end());
        const std::size_t gi = static_cast<std::size_t>(g - t.groups.data());
        dec.outputs[gi] = std::move(pts);
        seen[gi] = true;
    }
    for (std::size_t g = 0; g < seen.size(); ++g)
        if (!seen[g]) throw spec_error("decoder: missing output for a measurement group");
    return dec;
}

std::vector<ForwardModel> parse_forward_family(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw spec_error(std::string("family: invalid JSON: ") + e.what());
    }
    const json& models = j.is_array() ? j : require(j, "models", "family");
    if (!models.is_array() || models.empty())
        throw spec_error("family.models: expected a non-empty array");
    std::vector<ForwardModel> out;
    for (std::size_t i = 0; i < models.size(); ++i)
        out.push_back(parse_forward(models[i], "family.models[" + std::to_string(i) + "]"));
    return out;
}

ParsedSpec two_point_fixture(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw spec_error("two-point fixture: alpha must be in [0,1]");
    Problem p{MetricSpace::euclidean(2),
              MetricSpace::euclidean(1),
              ModelClass{{{0.0, 0.0}, {0.0, 1.0}}},
              NoiseClass{{{0.0}}},
              LinearAdditive{{{1.0, 0.0}}},
              1e-9};
    DiscreteMeasure mu = make_measure({{alpha == 0.0 ? 0.0 : alpha},
                                       {alpha == 1.0 ? 0.0 : 1.0 - alpha}});
    return ParsedSpec{std::move(p), std::move(mu), true};
}

namespace {

json key_json(const GroupKey& k) { return json(k); }

json worst_json(const WorstCaseReport& r) {
    json j;
    j["kersize"] = r.kersize;
    j["decoder_error"] = r.decoder_error;
    j["policy"] = to_string(r.policy);
    j["verdicts"]["lower"] = r.lower_verdict;
    j["verdicts"]["upper"] = r.upper_verdict;
    j["verdicts"]["upper_applicable"] = r.upper_applicable;
    json rows = json::array();
    for (const auto& g : r.groups) {
        json row;
        row["key"] = key_json(g.key);
        row["feasible_size"] = g.feasible_size;
        row["diameter"] = g.diameter;
        row["radius"] = g.radius;
        row["centers"] = g.centers;
        rows.push_back(std::move(row));
    }
    j["groups"] = std::move(rows);
    return j;
}

json average_json(const AverageReport& r) {
    json j;
    j["p"] = r.order == order_inf ? json("inf") : json(r.order);
    j["kersize"] = r.kersize;
    j["decoder_error"] = r.decoder_error;
    j["policy"] = to_string(r.policy);
    j["verdicts"]["lower"] = r.lower_verdict;
    j["verdicts"]["upper"] = r.upper_verdict;
    j["verdicts"]["upper_applicable"] = r.upper_applicable;
    json rows = json::array();
    for (const auto& g : r.groups) {
        json row;
        row["key"] = key_json(g.key);
        row["posterior_support"] = g.posterior_support;
        row["outputs"] = g.outputs;
        row["error_contribution"] = g.error_contribution;
        rows.push_back(std::move(row));
    }
    j["groups"] = std::move(rows);
    return j;
}

std::string order_label(double p) {
    if (p == order_inf) return "inf";
    json v = p;
    return v.dump();
}

json gap_json(const GapReport& r) {
    json j;
    j["kersize_worst"] = r.kersize_worst;
    json ks = json::object();
    for (const auto& [p, v] : r.kersize_avg) ks[order_label(p)] = v;
    j["kersize_avg"] = std::move(ks);
    json rows = json::array();
    for (const auto& row : r.rows) {
        json rj;
        rj["decoder"] = row.name;
        rj["worst_error"] = row.worst_error;
        json errs = json::object();
        for (const auto& [p, v] : row.avg_errors) errs[order_label(p)] = v;
        rj["avg_errors"] = std::move(errs);
        if (row.ratios_valid) {
            rj["ratio_to_kersize"] = row.ratio_to_kersize;
            rj["ratio_to_half_kersize"] = row.ratio_to_half_kersize;
        }
        rows.push_back(std::move(rj));
    }
    j["decoders"] = std::move(rows);
    return j;
}

json sweep_json(const SweepResult& r) {
    json j;
    j["kersizes"] = r.kersizes;
    j["best_ids"] = r.best_ids;
    j["selected"] = r.selected;
    return j;
}

std::string csv_key(const GroupKey& k) {
    std::string s;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(k[i]);
    }
    return s;
}

std::string csv_points(const std::vector<Point>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += '(';
        for (std::size_t d = 0; d < pts[i].size(); ++d) {
            if (d) s += '|';
            s += json(pts[i][d]).dump();
        }
        s += ')';
    }
    return s;
}

std::string num(double v) { return json(v).dump(); }

}  // namespace

std::string emit_report_json(const RunReport& r) {
    json j;
    j["command"] = r.command;
    j["config_hash"] = r.config_hash;
    if (r.worst) j["worst_case"] = worst_json(*r.worst);
    if (r.average) j["average_case"] = average_json(*r.average);
    if (r.gap) j["evaluation"] = gap_json(*r.gap);
    if (r.sweep) j["sweep"] = sweep_json(*r.sweep);
    return j.dump(2) + "\n";
}

std::string emit_report_csv(const RunReport& r) {
    std::string out;
    if (r.worst) {
        out += "key,feasible_size,diameter,radius,centers\n";
        for (const auto& g : r.worst->groups)
            out += csv_key(g.key) + "," + std::to_string(g.feasible_size) + "," +
                   num(g.diameter) + "," + num(g.radius) + "," + csv_points(g.centers) +
                   "\n";
    }
    if (r.average) {
        out += "key,posterior_support,error_contribution,outputs\n";
        for (const auto& g : r.average->groups)
            out += csv_key(g.key) + "," + std::to_string(g.posterior_support) + "," +
                   num(g.error_contribution) + "," + csv_points(g.outputs) + "\n";
    }
    if (r.gap) {
        std::string header = "decoder,worst_error";
        std::vector<double> orders;
        for (const auto& [p, v] : r.gap->kersize_avg) orders.push_back(p);
        for (double p : orders) header += ",err_p" + order_label(p);
        if (r.gap->kersize_worst > 0.0) header += ",ratio_to_kersize,ratio_to_half_kersize";
        out += header + "\n";
        for (const auto& row : r.gap->rows) {
            std::string line = row.name + "," + num(row.worst_error);
            for (double p : orders) line += "," + num(row.avg_errors.at(p));
            if (row.ratios_valid)
                line += "," + num(row.ratio_to_kersize) + "," + num(row.ratio_to_half_kersize);
            out += line + "\n";
        }
    }
    if (r.sweep) {
        out += "model_id,kersize,is_best\n";
        for (std::size_t i = 0; i < r.sweep->kersizes.size(); ++i) {
            const bool best = std::find(r.sweep->best_ids.begin(), r.sweep->best_ids.end(),
                                        i) != r.sweep->best_ids.end();
            out += std::to_string(i) + "," + num(r.sweep->kersizes[i]) + "," +
                   (best ? "1" : "0") + "\n";
        }
    }
    return out;
}

std::string points_json(const std::vector<Point>& pts) {
    return json(pts).dump();
}

}  // namespace optrec
