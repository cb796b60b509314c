#include "optrec/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace optrec {

DiscreteMeasure make_measure(std::vector<std::vector<double>> weights) {
    if (weights.empty() || weights[0].empty())
        throw std::invalid_argument("measure: weights must be a non-empty matrix");
    double total = 0.0;
    for (const auto& row : weights) {
        if (row.size() != weights[0].size())
            throw std::invalid_argument("measure: weights must be rectangular");
        for (double w : row) {
            if (!std::isfinite(w) || w < 0.0)
                throw std::invalid_argument("measure: weights must be finite and >= 0");
            total += w;
        }
    }
    if (!(total > 0.0))
        throw std::invalid_argument("measure: total mass must be positive");
    return DiscreteMeasure{std::move(weights), total};
}

DiscreteMeasure uniform_measure(std::size_t n_model, std::size_t n_noise) {
    const double w = 1.0 / (static_cast<double>(n_model) * static_cast<double>(n_noise));
    return make_measure(std::vector<std::vector<double>>(n_model, std::vector<double>(n_noise, w)));
}

namespace {

void check_dims(const DiscreteMeasure& mu, const MeasurementTable& t) {
    if (mu.weights.size() != t.atom_group.size() ||
        (!mu.weights.empty() && mu.weights[0].size() != t.atom_group[0].size()))
        throw std::invalid_argument("measure: dimensions do not match the measurement table");
}

}  // namespace

PushforwardMeasure pushforward(const DiscreteMeasure& mu, const MeasurementTable& t) {
    check_dims(mu, t);
    PushforwardMeasure pf;
    pf.group_mass.assign(t.groups.size(), 0.0);
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        double s = 0.0;
        for (const auto& [xi, ei] : t.groups[g].members) s += mu.weights[xi][ei];
        pf.group_mass[g] = s;
        pf.total += s;
    }
    return pf;
}

Disintegration disintegrate(const DiscreteMeasure& mu, const MeasurementTable& t) {
    check_dims(mu, t);
    if (!(mu.total_mass > 0.0))
        throw std::invalid_argument("disintegrate: zero total mass");
    const PushforwardMeasure pf = pushforward(mu, t);
    Disintegration dis;
    dis.group_weights.resize(t.groups.size());
    dis.defined.assign(t.groups.size(), false);
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        const double mass = pf.group_mass[g];
        if (!(mass > 0.0)) continue;  // null set under F_*mu
        auto& w = dis.group_weights[g];
        w.reserve(t.groups[g].members.size());
        for (const auto& [xi, ei] : t.groups[g].members)
            w.push_back(mu.weights[xi][ei] / mass);
        dis.defined[g] = true;
    }
    return dis;
}

double ess_sup_discrete(const std::vector<double>& values,
                        const std::vector<double>& weights) {
    if (values.size() != weights.size())
        throw std::invalid_argument("ess_sup: values and weights differ in length");
    bool any = false;
    double best = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(weights[i] > 0.0)) continue;
        if (!any || values[i] > best) best = values[i];
        any = true;
    }
    if (!any) throw std::invalid_argument("ess_sup: all weights are zero");
    return best;
}

ResidualMap residual(const Problem& p, const MeasurementTable& t,
                     const SetValuedDecoder& dec) {
    validate_decoder(dec, t.groups.size());
    const std::size_t nx = p.model_class.points.size();
    const std::size_t ne = p.noise_class.points.size();
    ResidualMap rm;
    rm.r.assign(nx, std::vector<double>(ne, 0.0));
    for (std::size_t xi = 0; xi < nx; ++xi)
        for (std::size_t ei = 0; ei < ne; ++ei) {
            const std::size_t g = t.atom_group[xi][ei];
            rm.r[xi][ei] =
                hausdorff_point_set(p.metric_x, p.model_class.points[xi], dec.outputs[g]);
        }
    return rm;
}

double err_a(const ResidualMap& r, const DiscreteMeasure& mu, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("err_a: order must be >= 1");
    if (r.r.size() != mu.weights.size() ||
        (!r.r.empty() && r.r[0].size() != mu.weights[0].size()))
        throw std::invalid_argument("err_a: residual and measure dimensions differ");

    if (p == order_inf) {
        bool any = false;
        double best = 0.0;
        for (std::size_t xi = 0; xi < r.r.size(); ++xi)
            for (std::size_t ei = 0; ei < r.r[xi].size(); ++ei) {
                if (!(mu.weights[xi][ei] > 0.0)) continue;
                if (!any || r.r[xi][ei] > best) best = r.r[xi][ei];
                any = true;
            }
        if (!any) throw std::invalid_argument("err_a: measure has no positive atoms");
        return best;
    }

    double s = 0.0;  // ascending atom index: x-major, e-minor
    for (std::size_t xi = 0; xi < r.r.size(); ++xi)
        for (std::size_t ei = 0; ei < r.r[xi].size(); ++ei)
            s += mu.weights[xi][ei] * std::pow(r.r[xi][ei], p);
    return std::pow(s, 1.0 / p);
}

}  // namespace optrec
