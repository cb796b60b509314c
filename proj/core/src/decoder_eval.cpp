#include "optrec/decoder_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace optrec {

std::string to_string(BaselineKind k) {
    switch (k) {
        case BaselineKind::first_feasible: return "first_feasible";
        case BaselineKind::constant: return "constant";
        case BaselineKind::full_feasible: return "full_feasible";
        case BaselineKind::random_feasible: return "random_feasible";
    }
    return "?";
}

BaselineKind baseline_from_string(const std::string& s) {
    if (s == "first_feasible") return BaselineKind::first_feasible;
    if (s == "constant") return BaselineKind::constant;
    if (s == "full_feasible") return BaselineKind::full_feasible;
    if (s == "random_feasible") return BaselineKind::random_feasible;
    throw std::invalid_argument("unknown baseline kind: " + s);
}

SetValuedDecoder make_baseline(BaselineKind kind, const Problem& p,
                               const MeasurementTable& t, const BaselineOptions& opt) {
    SetValuedDecoder dec;
    dec.outputs.resize(t.groups.size());
    std::mt19937_64 rng(opt.seed);
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        const auto feas = feasible_points(p, t.groups[g]);  // lexicographic order
        switch (kind) {
            case BaselineKind::first_feasible:
                dec.outputs[g] = {feas.front()};
                break;
            case BaselineKind::constant:
                if (opt.constant_point.empty())
                    throw std::invalid_argument("constant baseline needs a point");
                dec.outputs[g] = {opt.constant_point};
                break;
            case BaselineKind::full_feasible:
                dec.outputs[g] = feas;
                break;
            case BaselineKind::random_feasible: {
                std::uniform_int_distribution<std::size_t> pick(0, feas.size() - 1);
                dec.outputs[g] = {feas[pick(rng)]};
                break;
            }
        }
    }
    return dec;
}

GapReport evaluate_decoder(const Problem& p, const MeasurementTable& t,
                           const DiscreteMeasure& mu, const SetValuedDecoder& dec,
                           const std::string& name, const std::vector<double>& orders) {
    validate_decoder(dec, t.groups.size());
    GapReport rep;
    rep.kersize_worst = kersize_worst(p, t);
    const Disintegration dis = disintegrate(mu, t);
    for (double q : orders)
        rep.kersize_avg[q] = kersize_average(p, t, mu, dis, q);

    GapRow row;
    row.name = name;
    row.worst_error = worst_case_error(p, t, dec);
    const ResidualMap rm = residual(p, t, dec);
    for (double q : orders) row.avg_errors[q] = err_a(rm, mu, q);
    if (rep.kersize_worst > 0.0) {
        row.ratio_to_kersize = row.worst_error / rep.kersize_worst;
        row.ratio_to_half_kersize = row.worst_error / (rep.kersize_worst / 2.0);
        row.ratios_valid = true;
    }
    rep.rows.push_back(std::move(row));
    return rep;
}

RnspVerdict check_rnsp_bound(const Problem& p, const MeasurementTable& t,
                             const RnspCertificate& cert) {
    if (!std::holds_alternative<LinearAdditive>(p.forward))
        throw std::invalid_argument("check_rnsp_bound: requires a linear_additive forward model");
    if (!(cert.d1 > 0.0) || !(cert.d2 > 0.0))
        throw std::invalid_argument("check_rnsp_bound: D1, D2 must be positive");
    RnspVerdict v;
    v.eta = diameter(p.metric_y, p.noise_class.points);
    v.kersize = kersize_worst(p, t);
    v.bound = cert.d2 * v.eta;
    v.pass = v.kersize <= v.bound + 1e-9;
    return v;
}

namespace {

double lp_norm(const Point& h, double q) {
    if (q == order_inf) {
        double m = 0.0;
        for (double v : h) m = std::max(m, std::fabs(v));
        return m;
    }
    double s = 0.0;
    for (double v : h) s += std::pow(std::fabs(v), q);
    return std::pow(s, 1.0 / q);
}

}  // namespace

std::optional<Point> rnsp_falsify(const Matrix& a, const ModelClass& m1,
                                  const RnspCertificate& cert, std::size_t probes,
                                  std::uint64_t seed) {
    if (m1.points.empty()) throw std::invalid_argument("rnsp_falsify: empty model class");
    const std::size_t n = m1.points[0].size();
    if (a.empty() || a[0].size() != n)
        throw std::invalid_argument("rnsp_falsify: matrix does not match the model class");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick(0, m1.points.size() - 1);
    const double sigmas[] = {0.0, 0.25, 1.0, 4.0};

    for (std::size_t probe = 0; probe < probes; ++probe) {
        // difference of model points plus a Gaussian perturbation
        const Point& x = m1.points[pick(rng)];
        const Point& xp = m1.points[pick(rng)];
        const double sigma = sigmas[probe % 4];
        Point h(n);
        for (std::size_t i = 0; i < n; ++i)
            h[i] = x[i] - xp[i] + sigma * gauss(rng);

        const double n1 = lp_norm(h, cert.q1);
        if (n1 == 0.0) continue;  // h = 0 can never violate the inequality

        double dist2 = std::numeric_limits<double>::infinity();
        Point diff(n);
        for (const auto& u : m1.points)
            for (const auto& v : m1.points) {
                for (std::size_t i = 0; i < n; ++i) diff[i] = h[i] - (u[i] - v[i]);
                dist2 = std::min(dist2, lp_norm(diff, cert.q2));
            }

        Point ah(a.size(), 0.0);
        for (std::size_t r = 0; r < a.size(); ++r) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += a[r][i] * h[i];
            ah[r] = s;
        }
        const double n3 = lp_norm(ah, cert.q3);

        if (n1 > cert.d1 * dist2 + cert.d2 * n3 + 1e-12 * (1.0 + n1))
            return h;
    }
    return std::nullopt;
}

SweepResult forward_model_sweep(const std::vector<ForwardModel>& family,
                                const MetricSpace& metric_x, const MetricSpace& metric_y,
                                const ModelClass& m1, const NoiseClass& e,
                                double grouping_tol) {
    if (family.empty())
        throw std::invalid_argument("forward_model_sweep: empty family");
    SweepResult res;
    res.kersizes.reserve(family.size());
    for (const auto& model : family) {
        Problem p{metric_x, metric_y, m1, e, model, grouping_tol};
        res.kersizes.push_back(kersize_worst(p, build_measurement_table(p)));
    }
    const double best = *std::min_element(res.kersizes.begin(), res.kersizes.end());
    for (std::size_t i = 0; i < res.kersizes.size(); ++i)
        if (res.kersizes[i] <= best + 1e-12) res.best_ids.push_back(i);
    res.selected = res.best_ids.front();
    return res;
}

}  // namespace optrec
