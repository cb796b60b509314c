#include "optrec/average_case.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "optrec/parallel.hpp"

namespace optrec {

double kersize_average(const Problem& p, const MeasurementTable& t,
                       const DiscreteMeasure& mu, const Disintegration& dis,
                       double order) {
    if (!(order >= 1.0))
        throw std::invalid_argument("kersize_average: order must be >= 1");
    const PushforwardMeasure pf = pushforward(mu, t);

    if (order == order_inf) {
        bool any = false;
        double best = 0.0;
        for (std::size_t g = 0; g < t.groups.size(); ++g) {
            if (!(pf.group_mass[g] > 0.0)) continue;
            const auto& members = t.groups[g].members;
            const auto& w = dis.group_weights[g];
            for (std::size_t i = 0; i < members.size(); ++i) {
                if (!(w[i] > 0.0)) continue;
                for (std::size_t j = 0; j < members.size(); ++j) {
                    if (!(w[j] > 0.0)) continue;
                    const double d = p.metric_x.dist(p.model_class.points[members[i].first],
                                                     p.model_class.points[members[j].first]);
                    if (!any || d > best) best = d;
                    any = true;
                }
            }
        }
        if (!any) throw std::invalid_argument("kersize_average: no positive-mass groups");
        return best;
    }

    double total = 0.0;
    bool any = false;
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        if (!(pf.group_mass[g] > 0.0)) continue;
        any = true;
        const auto& members = t.groups[g].members;
        const auto& w = dis.group_weights[g];
        double inner = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = 0; j < members.size(); ++j) {
                if (i == j) continue;  // d(x,x) = 0 contributes nothing
                const double d = p.metric_x.dist(p.model_class.points[members[i].first],
                                                 p.model_class.points[members[j].first]);
                inner += w[i] * w[j] * std::pow(d, order);
            }
        total += pf.group_mass[g] * inner;
    }
    if (!any) throw std::invalid_argument("kersize_average: no positive-mass groups");
    return std::pow(total, 1.0 / order);
}

Point weighted_mean(const std::vector<Point>& points, const std::vector<double>& weights) {
    if (points.empty() || points.size() != weights.size())
        throw std::invalid_argument("weighted_mean: points and weights must match and be non-empty");
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("weighted_mean: weights must sum to 1");
    Point m(points[0].size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t d = 0; d < m.size(); ++d) m[d] += weights[i] * points[i][d];
    return m;
}

namespace {

double l1_objective(const std::vector<Point>& pts, const std::vector<double>& w,
                    const Point& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t d = 0; d < z.size(); ++d) {
            const double dd = pts[i][d] - z[d];
            d2 += dd * dd;
        }
        s += w[i] * std::sqrt(d2);
    }
    return s;
}

}  // namespace

Point weighted_geometric_median(const std::vector<Point>& points,
                                const std::vector<double>& weights, double tol,
                                std::size_t max_iters) {
    if (points.empty() || points.size() != weights.size())
        throw std::invalid_argument("geometric_median: points and weights must match");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("geometric_median: negative weight");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("geometric_median: weights must sum to 1");

    const std::size_t dim = points[0].size();
    if (points.size() == 1) return points[0];

    Point y = weighted_mean(points, weights);
    constexpr double anchor_eps = 1e-12;

    bool converged = false;
    for (std::size_t it = 0; it < max_iters && !converged; ++it) {
        // Weiszfeld map with Vardi-Zhang handling of iterates at data points
        std::size_t anchor = points.size();
        Point tnum(dim, 0.0);
        double tden = 0.0;
        Point force(dim, 0.0);  // pull of the non-coincident atoms
        for (std::size_t i = 0; i < points.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double dd = points[i][d] - y[d];
                d2 += dd * dd;
            }
            const double di = std::sqrt(d2);
            if (di < anchor_eps) {
                anchor = i;
                continue;
            }
            const double f = weights[i] / di;
            for (std::size_t d = 0; d < dim; ++d) {
                tnum[d] += f * points[i][d];
                force[d] += f * (points[i][d] - y[d]);
            }
            tden += f;
        }

        Point next(dim);
        if (anchor < points.size()) {
            double rnorm = 0.0;
            for (double f : force) rnorm += f * f;
            rnorm = std::sqrt(rnorm);
            if (rnorm <= weights[anchor] + tol) break;  // anchor certified optimal
            if (tden <= 0.0) break;
            const double shrink = std::max(0.0, 1.0 - weights[anchor] / rnorm);
            for (std::size_t d = 0; d < dim; ++d)
                next[d] = shrink * (tnum[d] / tden) + (1.0 - shrink) * y[d];
        } else {
            if (tden <= 0.0) break;
            for (std::size_t d = 0; d < dim; ++d) next[d] = tnum[d] / tden;
        }

        double step = 0.0, scale = 1.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double dd = next[d] - y[d];
            step += dd * dd;
            scale = std::max(scale, std::fabs(y[d]));
        }
        y = std::move(next);
        if (std::sqrt(step) <= tol * scale) converged = true;
    }

    // the minimizer may be a data atom (weighted majority); keep the best
    double best = l1_objective(points, weights, y);
    for (const auto& p : points) {
        const double obj = l1_objective(points, weights, p);
        if (obj < best) {
            best = obj;
            y = p;
        }
    }
    return y;
}

PosteriorDistribution posterior_distribution(const Problem& p, const MeasurementTable& t,
                                             const Disintegration& dis) {
    PosteriorDistribution post;
    post.x_indices.resize(t.groups.size());
    post.weights.resize(t.groups.size());
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        if (!dis.is_defined(g)) continue;
        const auto& members = t.groups[g].members;
        const auto& w = dis.group_weights[g];
        // x_proj is unique and ordered by point; marginalize noise onto it
        const auto& xs = t.groups[g].x_proj;
        std::vector<double> acc(xs.size(), 0.0);
        for (std::size_t i = 0; i < members.size(); ++i) {
            const std::size_t xi = members[i].first;
            const auto it = std::find(xs.begin(), xs.end(), xi);
            acc[static_cast<std::size_t>(it - xs.begin())] += w[i];
        }
        post.x_indices[g] = xs;
        post.weights[g] = std::move(acc);
    }
    return post;
}

std::string to_string(AveragePolicy p) {
    switch (p) {
        case AveragePolicy::mean: return "mean";
        case AveragePolicy::median: return "median";
        case AveragePolicy::candidate_argmin: return "candidate_argmin";
        case AveragePolicy::support_chebyshev: return "support_chebyshev";
    }
    return "?";
}

namespace {

struct GroupPosterior {
    std::vector<Point> points;
    std::vector<double> weights;
};

GroupPosterior group_posterior(const Problem& p, const MeasurementTable& t,
                               const PosteriorDistribution& post, std::size_t g) {
    GroupPosterior gp;
    if (!post.x_indices[g].empty()) {
        for (std::size_t i = 0; i < post.x_indices[g].size(); ++i) {
            gp.points.push_back(p.model_class.points[post.x_indices[g][i]]);
            gp.weights.push_back(post.weights[g][i]);
        }
    } else {
        // zero-pushforward group: uniform fallback keeps the decoder total
        gp.points = feasible_points(p, t.groups[g]);
        gp.weights.assign(gp.points.size(), 1.0 / static_cast<double>(gp.points.size()));
    }
    return gp;
}

std::vector<Point> decode_group(const Problem& p, const GroupPosterior& gp, double order,
                                const AverageDecoderOptions& opt) {
    if (gp.points.size() == 1) return {gp.points[0]};

    switch (opt.policy) {
        case AveragePolicy::mean:
            if (order != 2.0)
                throw std::invalid_argument("optimal_decoder_average: mean policy requires p = 2");
            if (!p.metric_x.is_euclidean())
                throw std::invalid_argument("optimal_decoder_average: mean requires Euclidean X");
            return {weighted_mean(gp.points, gp.weights)};

        case AveragePolicy::median:
            if (order != 1.0)
                throw std::invalid_argument("optimal_decoder_average: median policy requires p = 1");
            if (!p.metric_x.is_euclidean())
                throw std::invalid_argument("optimal_decoder_average: median requires Euclidean X");
            return {weighted_geometric_median(gp.points, gp.weights)};

        case AveragePolicy::candidate_argmin: {
            if (opt.candidates.empty())
                throw std::invalid_argument("optimal_decoder_average: empty candidate set");
            std::vector<double> obj(opt.candidates.size(), 0.0);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < opt.candidates.size(); ++c) {
                double s = 0.0;
                if (order == order_inf) {
                    for (std::size_t i = 0; i < gp.points.size(); ++i)
                        if (gp.weights[i] > 0.0)
                            s = std::max(s, p.metric_x.dist(gp.points[i], opt.candidates[c]));
                } else {
                    for (std::size_t i = 0; i < gp.points.size(); ++i)
                        s += gp.weights[i] *
                             std::pow(p.metric_x.dist(gp.points[i], opt.candidates[c]), order);
                }
                obj[c] = s;
                best = std::min(best, s);
            }
            std::vector<Point> out;
            for (std::size_t c = 0; c < opt.candidates.size(); ++c)
                if (obj[c] <= best + opt.tie_tol) out.push_back(opt.candidates[c]);
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        }

        case AveragePolicy::support_chebyshev: {
            if (order != order_inf)
                throw std::invalid_argument(
                    "optimal_decoder_average: support_chebyshev requires p = inf");
            std::vector<Point> support;
            for (std::size_t i = 0; i < gp.points.size(); ++i)
                if (gp.weights[i] > 0.0) support.push_back(gp.points[i]);
            if (support.size() == 1) return {support[0]};
            if (p.metric_x.is_euclidean())
                return chebyshev_center_euclidean(support, opt.tie_tol).centers;
            return chebyshev_center_candidates(p.metric_x, support, support, opt.tie_tol)
                .centers;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace

SetValuedDecoder optimal_decoder_average(const Problem& p, const MeasurementTable& t,
                                         const Disintegration& dis, double order,
                                         const AverageDecoderOptions& opt) {
    if (!(order >= 1.0))
        throw std::invalid_argument("optimal_decoder_average: order must be >= 1");
    const PosteriorDistribution post = posterior_distribution(p, t, dis);
    SetValuedDecoder dec;
    dec.outputs.resize(t.groups.size());
    parallel_for(t.groups.size(), opt.threads, [&](std::size_t g) {
        auto out = decode_group(p, group_posterior(p, t, post, g), order, opt);
        std::sort(out.begin(), out.end());
        dec.outputs[g] = std::move(out);
    });
    return dec;
}

AverageReport average_report(const Problem& p, const DiscreteMeasure& mu, double order,
                             const AverageDecoderOptions& opt) {
    return average_report(p, build_measurement_table(p), mu, order, opt);
}

AverageReport average_report(const Problem& p, const MeasurementTable& t,
                             const DiscreteMeasure& mu, double order,
                             const AverageDecoderOptions& opt) {
    AverageReport rep;
    rep.order = order;
    rep.policy = opt.policy;
    const Disintegration dis = disintegrate(mu, t);
    rep.kersize = kersize_average(p, t, mu, dis, order);
    rep.decoder = optimal_decoder_average(p, t, dis, order, opt);
    const ResidualMap rm = residual(p, t, rep.decoder);
    rep.decoder_error = err_a(rm, mu, order);

    const PosteriorDistribution post = posterior_distribution(p, t, dis);
    rep.groups.resize(t.groups.size());
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        AverageGroupRow row;
        row.key = t.groups[g].key;
        row.posterior_support = 0;
        for (double w : post.weights[g])
            if (w > 0.0) ++row.posterior_support;
        row.outputs = rep.decoder.outputs[g];
        double contrib = 0.0;
        for (const auto& [xi, ei] : t.groups[g].members) {
            const double w = mu.weights[xi][ei];
            if (order == order_inf) {
                if (w > 0.0) contrib = std::max(contrib, rm.r[xi][ei]);
            } else {
                contrib += w * std::pow(rm.r[xi][ei], order);
            }
        }
        row.error_contribution = contrib;
        rep.groups[g] = std::move(row);
    }

    rep.lower_verdict = rep.kersize / 2.0 - 1e-9 <= rep.decoder_error;
    rep.upper_verdict = rep.decoder_error <= rep.kersize + rep.tol;
    rep.upper_applicable = opt.policy == AveragePolicy::mean ||
                           opt.policy == AveragePolicy::median ||
                           opt.policy == AveragePolicy::support_chebyshev;
    return rep;
}

}  // namespace optrec
