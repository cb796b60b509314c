#include "optrec/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace optrec {

namespace {

void validate_matrix(const Matrix& a, const char* what) {
    if (a.empty() || a[0].empty())
        throw std::invalid_argument(std::string(what) + ": matrix must be non-empty");
    for (const auto& row : a) {
        if (row.size() != a[0].size())
            throw std::invalid_argument(std::string(what) + ": matrix must be rectangular");
        for (double v : row)
            if (!std::isfinite(v))
                throw std::invalid_argument(std::string(what) + ": matrix entries must be finite");
    }
}

Point apply_matrix(const Matrix& a, const Point& x) {
    Point y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += a[i][j] * x[j];
        y[i] = s;
    }
    return y;
}

}  // namespace

void validate_problem(const Problem& p) {
    if (!(p.grouping_tol > 0.0))
        throw std::invalid_argument("problem: grouping_tol must be positive");
    if (p.model_class.points.empty())
        throw std::invalid_argument("problem: model class must be non-empty");
    if (p.noise_class.points.empty())
        throw std::invalid_argument("problem: noise class must be non-empty");

    const std::size_t nx = p.model_class.points[0].size();
    for (const auto& x : p.model_class.points) {
        validate_point(x, "model point");
        if (x.size() != nx)
            throw std::invalid_argument("problem: model points have inconsistent dimension");
    }
    for (std::size_t i = 0; i < p.model_class.points.size(); ++i)
        for (std::size_t j = i + 1; j < p.model_class.points.size(); ++j)
            if (p.model_class.points[i] == p.model_class.points[j])
                throw std::invalid_argument("problem: duplicate model points are not allowed");

    const std::size_t ne = p.noise_class.points[0].size();
    for (const auto& e : p.noise_class.points) {
        validate_point(e, "noise point");
        if (e.size() != ne)
            throw std::invalid_argument("problem: noise points have inconsistent dimension");
    }

    if (!p.metric_x.is_table() && p.metric_x.dimension() != nx)
        throw std::invalid_argument("problem: metric_x dimension does not match model points");

    if (const auto* la = std::get_if<LinearAdditive>(&p.forward)) {
        validate_matrix(la->matrix, "linear_additive");
        if (la->matrix[0].size() != nx)
            throw std::invalid_argument("problem: forward matrix columns != model dimension");
        if (la->matrix.size() != ne)
            throw std::invalid_argument("problem: additive noise dimension != matrix rows");
    } else if (const auto* lm = std::get_if<LinearMultiplicative>(&p.forward)) {
        validate_matrix(lm->matrix, "linear_multiplicative");
        if (lm->matrix[0].size() != nx)
            throw std::invalid_argument("problem: forward matrix columns != model dimension");
        if (lm->matrix.size() != ne)
            throw std::invalid_argument("problem: multiplicative noise dimension != matrix rows");
    } else if (const auto* mx = std::get_if<MixedNoise>(&p.forward)) {
        validate_matrix(mx->matrix, "mixed");
        if (mx->matrix[0].size() != nx)
            throw std::invalid_argument("problem: forward matrix columns != model dimension");
        if (2 * mx->matrix.size() != ne)
            throw std::invalid_argument("problem: mixed noise dimension must be 2m");
    } else {
        const auto& tf = std::get<TableForward>(p.forward);
        if (tf.values.size() != p.model_class.points.size())
            throw std::invalid_argument("problem: forward table must cover every model point");
        for (const auto& row : tf.values) {
            if (row.size() != p.noise_class.points.size())
                throw std::invalid_argument("problem: forward table must cover every noise point");
            for (const auto& y : row) validate_point(y, "forward table value");
        }
    }

    if (!p.metric_y.is_table()) {
        std::size_t ny = 0;
        if (const auto* la = std::get_if<LinearAdditive>(&p.forward)) ny = la->matrix.size();
        else if (const auto* lm = std::get_if<LinearMultiplicative>(&p.forward)) ny = lm->matrix.size();
        else if (const auto* mx = std::get_if<MixedNoise>(&p.forward)) ny = mx->matrix.size();
        else ny = std::get<TableForward>(p.forward).values[0][0].size();
        if (p.metric_y.dimension() != ny)
            throw std::invalid_argument("problem: metric_y dimension does not match measurements");
    }
}

Point forward_eval(const Problem& p, std::size_t x_index, std::size_t e_index) {
    if (x_index >= p.model_class.points.size())
        throw std::out_of_range("forward_eval: x index out of range");
    if (e_index >= p.noise_class.points.size())
        throw std::out_of_range("forward_eval: e index out of range");
    const Point& x = p.model_class.points[x_index];
    const Point& e = p.noise_class.points[e_index];

    if (const auto* la = std::get_if<LinearAdditive>(&p.forward)) {
        Point y = apply_matrix(la->matrix, x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += e[i];
        return y;
    }
    if (const auto* lm = std::get_if<LinearMultiplicative>(&p.forward)) {
        Point y = apply_matrix(lm->matrix, x);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] *= e[i];
        return y;
    }
    if (const auto* mx = std::get_if<MixedNoise>(&p.forward)) {
        Point y = apply_matrix(mx->matrix, x);
        const std::size_t m = y.size();
        for (std::size_t i = 0; i < m; ++i) y[i] = y[i] * e[i] + e[m + i];
        return y;
    }
    return std::get<TableForward>(p.forward).values[x_index][e_index];
}

std::size_t MeasurementTable::group_index(const GroupKey& key) const {
    if (const auto* g = find(key))
        return static_cast<std::size_t>(g - groups.data());
    throw std::invalid_argument("measurement table: unknown group key");
}

const MeasurementGroup* MeasurementTable::find(const GroupKey& key) const {
    auto it = std::lower_bound(groups.begin(), groups.end(), key,
                               [](const MeasurementGroup& g, const GroupKey& k) {
                                   return g.key < k;
                               });
    if (it == groups.end() || it->key != key) return nullptr;
    return &*it;
}

MeasurementTable build_measurement_table(const Problem& p) {
    validate_problem(p);
    const std::size_t nx = p.model_class.points.size();
    const std::size_t ne = p.noise_class.points.size();

    std::map<GroupKey, MeasurementGroup> by_key;
    for (std::size_t xi = 0; xi < nx; ++xi) {
        for (std::size_t ei = 0; ei < ne; ++ei) {
            Point y = forward_eval(p, xi, ei);
            GroupKey key = quantize(y, p.grouping_tol);
            auto [it, inserted] = by_key.try_emplace(std::move(key));
            if (inserted) {
                it->second.key = it->first;
                it->second.representative = std::move(y);
            }
            it->second.members.emplace_back(xi, ei);
        }
    }

    MeasurementTable t;
    t.groups.reserve(by_key.size());
    t.atom_group.assign(nx, std::vector<std::size_t>(ne, 0));
    for (auto& [key, g] : by_key) {
        const std::size_t gi = t.groups.size();
        for (const auto& [xi, ei] : g.members) t.atom_group[xi][ei] = gi;

        std::vector<std::size_t> xs;
        for (const auto& [xi, ei] : g.members) xs.push_back(xi);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::sort(xs.begin(), xs.end(), [&](std::size_t a, std::size_t b) {
            return p.model_class.points[a] < p.model_class.points[b];
        });
        g.x_proj = std::move(xs);
        t.groups.push_back(std::move(g));
    }
    return t;
}

std::vector<Point> feasible_points(const Problem& p, const MeasurementGroup& g) {
    std::vector<Point> pts;
    pts.reserve(g.x_proj.size());
    for (std::size_t xi : g.x_proj) pts.push_back(p.model_class.points[xi]);
    return pts;
}

FeasibleSet feasible_set(const Problem& p, const MeasurementTable& t, const GroupKey& key) {
    const MeasurementGroup& g = t.groups[t.group_index(key)];
    return FeasibleSet{g.members, feasible_points(p, g)};
}

}  // namespace optrec
