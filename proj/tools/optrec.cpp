// Command-line front end: computes accuracy bounds and optimal decoders for
// finite discretized inverse problems, and benchmarks decoders against them.
//
// Exit codes: 0 success, 2 validation error, 3 verdict failure in --strict mode.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optrec/io.hpp"

namespace {

using namespace optrec;

constexpr int exit_ok = 0;
constexpr int exit_validation = 2;
constexpr int exit_verdict = 3;

struct CommonOpts {
    std::string problem_path;
    std::string out_path;
    std::string format = "json";
    int threads = 1;
    std::uint64_t seed = 0;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool need_problem = true) {
    auto* p = cmd->add_option("--problem", c.problem_path, "problem spec JSON file");
    if (need_problem) p->required();
    cmd->add_option("--out", c.out_path, "write the report here instead of stdout");
    cmd->add_option("--format", c.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--threads", c.threads, "worker threads over measurement groups")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "seed for randomized baselines/probes");
    cmd->add_flag("--strict", c.strict, "exit 3 if a theorem-backed verdict fails");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw spec_error("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_output(const CommonOpts& c, const std::string& text) {
    if (c.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.out_path, std::ios::binary);
    if (!out) throw spec_error("cannot write file: " + c.out_path);
    out << text;
}

double parse_order(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return order_inf;
    const double p = std::stod(s);
    if (!(p >= 1.0)) throw spec_error("order p must be >= 1 or 'inf'");
    return p;
}

std::vector<double> parse_order_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(parse_order(tok));
    return out;
}

Point parse_coords(const std::string& s) {
    Point y;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) y.push_back(std::stod(tok));
    if (y.empty()) throw spec_error("--y: expected comma-separated coordinates");
    return y;
}

ParsedSpec load_spec(const CommonOpts& c) {
    return parse_problem_spec(read_file(c.problem_path));
}

AverageDecoderOptions average_options(const Problem& p, double order, int threads) {
    AverageDecoderOptions opt;
    opt.threads = threads;
    if (order == order_inf)
        opt.policy = AveragePolicy::support_chebyshev;
    else if (order == 1.0 && p.metric_x.is_euclidean())
        opt.policy = AveragePolicy::median;
    else if (order == 2.0 && p.metric_x.is_euclidean())
        opt.policy = AveragePolicy::mean;
    else {
        opt.policy = AveragePolicy::candidate_argmin;
        opt.candidates = p.model_class.points;
    }
    return opt;
}

int finish(const CommonOpts& c, const RunReport& rep, bool verdicts_ok,
           std::chrono::steady_clock::time_point t0) {
    write_output(c, c.format == "csv" ? emit_report_csv(rep) : emit_report_json(rep));
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::cerr << "wall_clock_ms=" << ms << "\n";
    if (c.strict && !verdicts_ok) return exit_verdict;
    return exit_ok;
}

int cmd_analyze_worst(const CommonOpts& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const ParsedSpec spec = load_spec(c);
    WorstDecoderOptions opt;
    opt.threads = c.threads;
    if (!spec.problem.metric_x.is_euclidean()) opt.policy = CandidatePolicy::feasible_points;
    RunReport rep;
    rep.command = "analyze worst";
    rep.config_hash = config_hash_hex(canonical_spec_json(spec));
    rep.worst = worst_case_report(spec.problem, opt);
    const bool ok = rep.worst->lower_verdict &&
                    (!rep.worst->upper_applicable || rep.worst->upper_verdict);
    return finish(c, rep, ok, t0);
}

int cmd_analyze_average(const CommonOpts& c, const std::string& order_str) {
    const auto t0 = std::chrono::steady_clock::now();
    const ParsedSpec spec = load_spec(c);
    const double order = parse_order(order_str);
    RunReport rep;
    rep.command = "analyze average --p " + order_str;
    rep.config_hash = config_hash_hex(canonical_spec_json(spec));
    rep.average = average_report(spec.problem, spec.measure, order,
                                 average_options(spec.problem, order, c.threads));
    const bool ok = rep.average->lower_verdict &&
                    (!rep.average->upper_applicable || rep.average->upper_verdict);
    return finish(c, rep, ok, t0);
}

int cmd_decode(const CommonOpts& c, const std::string& y_str, const std::string& mode,
               const std::string& order_str) {
    const ParsedSpec spec = load_spec(c);
    const Point y = parse_coords(y_str);
    const MeasurementTable t = build_measurement_table(spec.problem);
    const GroupKey key = quantize(y, spec.problem.grouping_tol);
    const MeasurementGroup* g = t.find(key);
    if (!g)
        throw spec_error("decode: y does not quantize to any measurement in M2^E");
    const std::size_t gi = t.group_index(key);

    SetValuedDecoder dec;
    if (mode == "worst") {
        WorstDecoderOptions opt;
        opt.threads = c.threads;
        if (!spec.problem.metric_x.is_euclidean())
            opt.policy = CandidatePolicy::feasible_points;
        dec = optimal_decoder_worst(spec.problem, t, opt);
    } else {
        const double order = parse_order(order_str);
        const Disintegration dis = disintegrate(spec.measure, t);
        dec = optimal_decoder_average(spec.problem, t, dis, order,
                                      average_options(spec.problem, order, c.threads));
    }
    write_output(c, points_json(dec.outputs[gi]) + "\n");
    return exit_ok;
}

int cmd_evaluate(const CommonOpts& c, const std::string& decoder_arg,
                 const std::string& orders_str, const std::string& point_str) {
    const auto t0 = std::chrono::steady_clock::now();
    const ParsedSpec spec = load_spec(c);
    const MeasurementTable t = build_measurement_table(spec.problem);
    const std::vector<double> orders = parse_order_list(orders_str);

    SetValuedDecoder dec;
    std::string name = decoder_arg;
    if (decoder_arg.rfind("baseline:", 0) == 0) {
        const BaselineKind kind = baseline_from_string(decoder_arg.substr(9));
        BaselineOptions bopt;
        bopt.seed = c.seed;
        if (kind == BaselineKind::constant) {
            if (point_str.empty())
                throw spec_error("baseline:constant requires --point");
            bopt.constant_point = parse_coords(point_str);
        }
        dec = make_baseline(kind, spec.problem, t, bopt);
    } else {
        dec = load_decoder_table(read_file(decoder_arg), t);
    }

    RunReport rep;
    rep.command = "evaluate";
    rep.config_hash = config_hash_hex(canonical_spec_json(spec));
    rep.gap = evaluate_decoder(spec.problem, t, spec.measure, dec, name, orders);
    return finish(c, rep, true, t0);
}

int cmd_sweep(const CommonOpts& c, const std::string& models_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const ParsedSpec spec = load_spec(c);
    const auto family = parse_forward_family(read_file(models_path));
    RunReport rep;
    rep.command = "sweep";
    rep.config_hash = config_hash_hex(canonical_spec_json(spec));
    rep.sweep = forward_model_sweep(family, spec.problem.metric_x, spec.problem.metric_y,
                                    spec.problem.model_class, spec.problem.noise_class,
                                    spec.problem.grouping_tol);
    return finish(c, rep, true, t0);
}

int cmd_example(const CommonOpts& c, double alpha, const std::string& order_str) {
    const auto t0 = std::chrono::steady_clock::now();
    const ParsedSpec spec = two_point_fixture(alpha);
    const double order = parse_order(order_str);
    RunReport rep;
    rep.command = "example two-point";
    rep.config_hash = config_hash_hex(canonical_spec_json(spec));
    WorstDecoderOptions wopt;
    wopt.threads = c.threads;
    rep.worst = worst_case_report(spec.problem, wopt);
    rep.average = average_report(spec.problem, spec.measure, order,
                                 average_options(spec.problem, order, c.threads));
    const bool ok = rep.worst->lower_verdict && rep.worst->upper_verdict &&
                    rep.average->lower_verdict && rep.average->upper_verdict;
    return finish(c, rep, ok, t0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"accuracy bounds and optimal set-valued decoders for finite inverse problems"};
    app.require_subcommand(1);

    CommonOpts common;

    auto* analyze = app.add_subcommand("analyze", "compute kernel sizes and optimal decoders");
    analyze->require_subcommand(1);
    auto* aw = analyze->add_subcommand("worst", "worst-case bounds and decoder");
    add_common(aw, common);
    std::string order_str = "2";
    auto* aa = analyze->add_subcommand("average", "average-case bounds and decoder");
    add_common(aa, common);
    aa->add_option("--p", order_str, "error order in [1,inf]");

    auto* dec = app.add_subcommand("decode", "apply the optimal decoder to one measurement");
    add_common(dec, common);
    std::string y_str, mode = "worst";
    dec->add_option("--y", y_str, "measurement coordinates, comma separated")->required();
    dec->add_option("--mode", mode, "worst|avg")->check(CLI::IsMember({"worst", "avg"}));
    dec->add_option("--p", order_str, "error order for avg mode");

    auto* ev = app.add_subcommand("evaluate", "benchmark a decoder against the bounds");
    add_common(ev, common);
    std::string decoder_arg, orders_str, point_str;
    ev->add_option("--decoder", decoder_arg,
                   "decoder table JSON path, or baseline:KIND")->required();
    ev->add_option("--p", orders_str, "comma-separated error orders (may be empty)");
    ev->add_option("--point", point_str, "point for baseline:constant");

    auto* sw = app.add_subcommand("sweep", "kernel sizes across a forward-model family");
    add_common(sw, common);
    std::string models_path;
    sw->add_option("--models", models_path, "forward-model family JSON")->required();

    auto* ex = app.add_subcommand("example", "built-in fixtures");
    ex->require_subcommand(1);
    auto* tp = ex->add_subcommand("two-point", "two points observed through one coordinate");
    add_common(tp, common, /*need_problem=*/false);
    double alpha = 0.5;
    tp->add_option("--alpha", alpha, "weight of the first model point");
    tp->add_option("--p", order_str, "error order");

    CLI11_PARSE(app, argc, argv);

    try {
        if (aw->parsed()) return cmd_analyze_worst(common);
        if (aa->parsed()) return cmd_analyze_average(common, order_str);
        if (dec->parsed()) return cmd_decode(common, y_str, mode, order_str);
        if (ev->parsed()) return cmd_evaluate(common, decoder_arg, orders_str, point_str);
        if (sw->parsed()) return cmd_sweep(common, models_path);
        if (tp->parsed()) return cmd_example(common, alpha, order_str);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation;
    }
    return exit_validation;
}
