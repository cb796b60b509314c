#include "optrec/worst_case.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "optrec/parallel.hpp"

namespace optrec {

double kersize_worst(const Problem& p, const MeasurementTable& t) {
    double best = 0.0;
    for (const auto& g : t.groups) {
        if (g.x_proj.size() < 2) continue;
        best = std::max(best, diameter(p.metric_x, feasible_points(p, g)));
    }
    return best;
}

namespace {

struct Ball {
    Point center;
    double r2 = -1.0;  // negative: encloses nothing
};

bool inside(const Ball& b, const Point& p) {
    if (b.r2 < 0.0) return false;
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - b.center[i];
        d2 += d * d;
    }
    return d2 <= b.r2 * (1.0 + 1e-12) + 1e-300;
}

/// Ball with all support points on its boundary (circumball within their
/// affine hull). Empty result when the support is affinely dependent.
std::optional<Ball> circumball(const std::vector<const Point*>& s) {
    const std::size_t k = s.size();
    if (k == 0) return std::nullopt;
    if (k == 1) return Ball{*s[0], 0.0};
    const Point& q0 = *s[0];
    const std::size_t dim = q0.size();
    const std::size_t n = k - 1;

    // Gram system: sum_j lam_j 2 v_i.v_j = v_i.v_i with v_i = q_i - q0
    std::vector<Point> v(n, Point(dim));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dim; ++d) v[i][d] = (*s[i + 1])[d] - q0[d];

    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = 2.0 * std::inner_product(v[i].begin(), v[i].end(), v[j].begin(), 0.0);
        a[i][n] = std::inner_product(v[i].begin(), v[i].end(), v[i].begin(), 0.0);
    }

    // Gaussian elimination with partial pivoting
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-12) return std::nullopt;  // degenerate support
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
        }
    }

    Ball b{q0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double lam = a[i][n] / a[i][i];
        for (std::size_t d = 0; d < dim; ++d) b.center[d] += lam * v[i][d];
    }
    double r2 = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        const double dd = b.center[d] - q0[d];
        r2 += dd * dd;
    }
    b.r2 = r2;
    return b;
}

/// Exact minimum ball of a small support set (<= dim+1 points), brute force
/// over subsets; robust to affinely dependent supports.
Ball ball_of_support(const std::vector<const Point*>& s, std::size_t dim) {
    if (s.empty()) return Ball{Point(dim, 0.0), -1.0};
    Ball best;
    best.r2 = std::numeric_limits<double>::infinity();
    bool found = false;
    const std::size_t n = s.size();
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<const Point*> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) sub.push_back(s[i]);
        if (sub.size() > dim + 1) continue;
        auto b = circumball(sub);
        if (!b) continue;
        bool ok = true;
        for (const Point* p : s)
            if (!inside(*b, *p)) { ok = false; break; }
        if (ok && b->r2 < best.r2) {
            best = *b;
            found = true;
        }
    }
    if (!found) return Ball{*s[0], 0.0};  // cannot happen for valid input
    return best;
}

Ball welzl(std::vector<const Point*>& pts, std::size_t n,
           std::vector<const Point*> support, std::size_t dim) {
    if (n == 0 || support.size() == dim + 1) return ball_of_support(support, dim);
    const Point* p = pts[n - 1];
    Ball b = welzl(pts, n - 1, support, dim);
    if (inside(b, *p)) return b;
    support.push_back(p);
    return welzl(pts, n - 1, std::move(support), dim);
}

}  // namespace

ChebyshevResult chebyshev_center_euclidean(const std::vector<Point>& points, double tol) {
    if (points.empty())
        throw std::invalid_argument("chebyshev_center_euclidean: empty point set");
    const std::size_t dim = points[0].size();
    for (const auto& p : points) {
        validate_point(p, "chebyshev point");
        if (p.size() != dim)
            throw std::invalid_argument("chebyshev_center_euclidean: inconsistent dimensions");
    }

    std::vector<const Point*> ptrs;
    ptrs.reserve(points.size());
    for (const auto& p : points) ptrs.push_back(&p);
    std::sort(ptrs.begin(), ptrs.end(),
              [](const Point* a, const Point* b) { return *a < *b; });
    ptrs.erase(std::unique(ptrs.begin(), ptrs.end(),
                           [](const Point* a, const Point* b) { return *a == *b; }),
               ptrs.end());
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);  // fixed seed: deterministic results
    std::shuffle(ptrs.begin(), ptrs.end(), rng);

    Ball b = welzl(ptrs, ptrs.size(), {}, dim);

    // report the true objective value at the returned center
    double r = 0.0;
    for (const auto& p : points) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = p[i] - b.center[i];
            d2 += d * d;
        }
        r = std::max(r, std::sqrt(d2));
    }
    return ChebyshevResult{{std::move(b.center)}, r, ChebyshevSolver::meb_euclidean, tol};
}

ChebyshevResult chebyshev_center_candidates(const MetricSpace& m,
                                            const std::vector<Point>& feasible,
                                            const std::vector<Point>& candidates,
                                            double tie_tol) {
    if (feasible.empty())
        throw std::invalid_argument("chebyshev_center_candidates: empty feasible set");
    if (candidates.empty())
        throw std::invalid_argument("chebyshev_center_candidates: empty candidate set");

    std::vector<double> obj(candidates.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        obj[i] = hausdorff_point_set(m, candidates[i], feasible);
        best = std::min(best, obj[i]);
    }
    std::vector<Point> centers;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (obj[i] <= best + tie_tol) centers.push_back(candidates[i]);
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    return ChebyshevResult{std::move(centers), best, ChebyshevSolver::candidate_argmin, tie_tol};
}

namespace {

std::vector<Point> grid_candidates(const std::vector<Point>& feasible, double step) {
    if (!(step > 0.0))
        throw std::invalid_argument("feasible_plus_grid: grid step must be positive");
    const std::size_t dim = feasible[0].size();
    Point lo = feasible[0], hi = feasible[0];
    for (const auto& p : feasible)
        for (std::size_t d = 0; d < dim; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    std::vector<long long> lo_i(dim), n_i(dim);
    double cells = 1.0;
    for (std::size_t d = 0; d < dim; ++d) {
        lo_i[d] = static_cast<long long>(std::floor(lo[d] / step));
        const long long hi_i = static_cast<long long>(std::ceil(hi[d] / step));
        n_i[d] = hi_i - lo_i[d] + 1;
        cells *= static_cast<double>(n_i[d]);
    }
    if (cells > 2e6)
        throw std::invalid_argument("feasible_plus_grid: grid would exceed 2e6 points");

    std::vector<Point> out = feasible;
    Point cur(dim);
    std::vector<long long> idx(dim, 0);
    for (;;) {
        for (std::size_t d = 0; d < dim; ++d)
            cur[d] = static_cast<double>(lo_i[d] + idx[d]) * step;
        out.push_back(cur);
        std::size_t d = 0;
        while (d < dim && ++idx[d] == n_i[d]) idx[d++] = 0;
        if (d == dim) break;
    }
    return out;
}

ChebyshevResult group_chebyshev(const Problem& p, const std::vector<Point>& feas,
                                const WorstDecoderOptions& opt) {
    if (feas.size() == 1)  // degenerate group, no solver needed
        return ChebyshevResult{{feas[0]}, 0.0,
                               opt.policy == CandidatePolicy::euclidean_meb
                                   ? ChebyshevSolver::meb_euclidean
                                   : ChebyshevSolver::candidate_argmin,
                               opt.tie_tol};
    switch (opt.policy) {
        case CandidatePolicy::euclidean_meb:
            if (!p.metric_x.is_euclidean())
                throw std::invalid_argument(
                    "optimal_decoder_worst: euclidean_meb requires a Euclidean metric on X");
            return chebyshev_center_euclidean(feas, opt.tie_tol);
        case CandidatePolicy::feasible_points:
            return chebyshev_center_candidates(p.metric_x, feas, feas, opt.tie_tol);
        case CandidatePolicy::feasible_plus_grid:
            return chebyshev_center_candidates(p.metric_x, feas,
                                               grid_candidates(feas, opt.grid_step),
                                               opt.tie_tol);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

std::string to_string(CandidatePolicy p) {
    switch (p) {
        case CandidatePolicy::euclidean_meb: return "euclidean_meb";
        case CandidatePolicy::feasible_points: return "feasible_points";
        case CandidatePolicy::feasible_plus_grid: return "feasible_plus_grid";
    }
    return "?";
}

SetValuedDecoder optimal_decoder_worst(const Problem& p, const MeasurementTable& t,
                                       const WorstDecoderOptions& opt) {
    SetValuedDecoder dec;
    dec.outputs.resize(t.groups.size());
    parallel_for(t.groups.size(), opt.threads, [&](std::size_t g) {
        dec.outputs[g] = group_chebyshev(p, feasible_points(p, t.groups[g]), opt).centers;
    });
    return dec;
}

double worst_case_error(const Problem& p, const MeasurementTable& t,
                        const SetValuedDecoder& dec) {
    validate_decoder(dec, t.groups.size());
    double worst = 0.0;
    for (std::size_t xi = 0; xi < p.model_class.points.size(); ++xi)
        for (std::size_t ei = 0; ei < p.noise_class.points.size(); ++ei) {
            const std::size_t g = t.atom_group[xi][ei];
            worst = std::max(worst, hausdorff_point_set(p.metric_x,
                                                        p.model_class.points[xi],
                                                        dec.outputs[g]));
        }
    return worst;
}

WorstCaseReport worst_case_report(const Problem& p, const WorstDecoderOptions& opt) {
    return worst_case_report(p, build_measurement_table(p), opt);
}

WorstCaseReport worst_case_report(const Problem& p, const MeasurementTable& t,
                                  const WorstDecoderOptions& opt) {
    WorstCaseReport rep;
    rep.policy = opt.policy;
    rep.groups.resize(t.groups.size());
    rep.decoder.outputs.resize(t.groups.size());

    parallel_for(t.groups.size(), opt.threads, [&](std::size_t g) {
        const auto feas = feasible_points(p, t.groups[g]);
        const auto cheb = group_chebyshev(p, feas, opt);
        WorstGroupRow row;
        row.key = t.groups[g].key;
        row.feasible_size = feas.size();
        row.diameter = feas.size() > 1 ? diameter(p.metric_x, feas) : 0.0;
        row.radius = cheb.radius;
        row.centers = cheb.centers;
        rep.groups[g] = std::move(row);
        rep.decoder.outputs[g] = cheb.centers;
    });

    for (const auto& row : rep.groups) rep.kersize = std::max(rep.kersize, row.diameter);
    rep.decoder_error = worst_case_error(p, t, rep.decoder);
    rep.lower_verdict = rep.kersize / 2.0 - rep.tol <= rep.decoder_error;
    rep.upper_verdict = rep.decoder_error <= rep.kersize + rep.tol;
    rep.upper_applicable = opt.policy == CandidatePolicy::euclidean_meb;
    return rep;
}

}  // namespace optrec
