#include <cmath>
#include <vector>

#include <doctest.h>

#include "ensemble.hpp"
#include "optrec/average_case.hpp"
#include "optrec/io.hpp"
#include "optrec/measure.hpp"
#include "optrec/worst_case.hpp"

using namespace optrec;

namespace {

Problem three_point_problem() {
    return Problem{MetricSpace::euclidean(2),
                   MetricSpace::euclidean(1),
                   {{{0, 0}, {0, 1}, {1, 0}}},
                   {{{0.0}}},
                   LinearAdditive{{{1, 0}}},
                   1e-9};
}

}  // namespace

TEST_CASE("measure construction") {
    const auto mu = make_measure({{0.25}, {0.75}});
    CHECK(mu.total_mass == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_measure({{-0.1}, {1.1}}), std::invalid_argument);
    CHECK_THROWS_AS(make_measure({{0.0}, {0.0}}), std::invalid_argument);

    const auto u = uniform_measure(2, 3);
    CHECK(u.weights[1][2] == doctest::Approx(1.0 / 6.0));
    CHECK(u.total_mass == doctest::Approx(1.0));
}

TEST_CASE("pushforward") {
    const auto spec = two_point_fixture(0.3);
    const auto t = build_measurement_table(spec.problem);
    const auto pf = pushforward(spec.measure, t);
    REQUIRE(pf.group_mass.size() == 1);
    CHECK(pf.group_mass[0] == doctest::Approx(1.0).epsilon(1e-12));

    const Problem th = three_point_problem();
    const auto tt = build_measurement_table(th);
    const auto pfu = pushforward(uniform_measure(3, 1), tt);
    const auto g0 = tt.group_index(quantize({0.0}, 1e-9));
    const auto g1 = tt.group_index(quantize({1.0}, 1e-9));
    CHECK(pfu.group_mass[g0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(pfu.group_mass[g1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // point mass lands entirely on its own group
    const auto point = make_measure({{0.0}, {0.0}, {1.0}});
    const auto pfp = pushforward(point, tt);
    CHECK(pfp.group_mass[tt.atom_group[2][0]] == 1.0);
}

TEST_CASE("disintegration") {
    const auto spec = two_point_fixture(0.3);
    const auto t = build_measurement_table(spec.problem);
    const auto dis = disintegrate(spec.measure, t);
    REQUIRE(dis.is_defined(0));
    CHECK(dis.group_weights[0][0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(dis.group_weights[0][1] == doctest::Approx(0.7).epsilon(1e-12));

    const Problem th = three_point_problem();
    const auto tt = build_measurement_table(th);
    const auto du = disintegrate(uniform_measure(3, 1), tt);
    const auto g0 = tt.group_index(quantize({0.0}, 1e-9));
    CHECK(du.group_weights[g0] == std::vector<double>{0.5, 0.5});

    // a group whose atoms all carry zero weight has no disintegration
    const auto partial = make_measure({{1.0}, {1.0}, {0.0}});
    const auto dp = disintegrate(partial, tt);
    const auto g1 = tt.group_index(quantize({1.0}, 1e-9));
    CHECK_FALSE(dp.is_defined(g1));
    CHECK(dp.is_defined(g0));
}

TEST_CASE("discrete essential supremum") {
    CHECK(ess_sup_discrete({3, 7}, {0.5, 0.5}) == 7.0);
    CHECK(ess_sup_discrete({3, 100}, {1.0, 0.0}) == 3.0);
    CHECK_THROWS_AS(ess_sup_discrete({1, 2}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("nested essential suprema agree with the flat one") {
    // ess-sup over all atoms == ess-sup over groups of the per-group ess-sup,
    // weighted by pushforward mass -- checked on ensemble problems with an
    // arbitrary atomwise function
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ens = testsupport::make_ensemble_problem(seed);
        const auto t = build_measurement_table(ens.problem);
        for (const DiscreteMeasure& mu : {ens.uniform, ens.random}) {
            const auto pf = pushforward(mu, t);
            const auto dis = disintegrate(mu, t);

            std::vector<double> flat_vals, flat_wts;
            for (std::size_t xi = 0; xi < mu.weights.size(); ++xi)
                for (std::size_t ei = 0; ei < mu.weights[xi].size(); ++ei) {
                    flat_vals.push_back(std::sin(3.0 * xi) + 0.5 * ei);
                    flat_wts.push_back(mu.weights[xi][ei]);
                }
            const double flat = ess_sup_discrete(flat_vals, flat_wts);

            std::vector<double> group_vals, group_wts;
            for (std::size_t g = 0; g < t.groups.size(); ++g) {
                if (!dis.is_defined(g)) continue;
                std::vector<double> vals, wts;
                for (std::size_t k = 0; k < t.groups[g].members.size(); ++k) {
                    const auto [xi, ei] = t.groups[g].members[k];
                    vals.push_back(std::sin(3.0 * xi) + 0.5 * ei);
                    wts.push_back(dis.group_weights[g][k]);
                }
                group_vals.push_back(ess_sup_discrete(vals, wts));
                group_wts.push_back(pf.group_mass[g]);
            }
            CHECK(ess_sup_discrete(group_vals, group_wts) == flat);
        }
    }
}

TEST_CASE("residual map") {
    const auto spec = two_point_fixture(0.5);
    const auto t = build_measurement_table(spec.problem);
    const auto psi = optimal_decoder_worst(spec.problem, t);
    const auto r = residual(spec.problem, t, psi);
    CHECK(r.r[0][0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.r[1][0] == doctest::Approx(0.5).epsilon(1e-12));

    SetValuedDecoder origin;
    origin.outputs = {{{0, 0}}};
    const auto rc = residual(spec.problem, t, origin);
    CHECK(rc.r[0][0] == 0.0);
    CHECK(rc.r[1][0] == doctest::Approx(1.0));
}

TEST_CASE("p-th order error") {
    const auto spec = two_point_fixture(0.25);
    const auto t = build_measurement_table(spec.problem);
    const auto dis = disintegrate(spec.measure, t);
    AverageDecoderOptions opt;
    opt.policy = AveragePolicy::mean;
    const auto psi = optimal_decoder_average(spec.problem, t, dis, 2.0, opt);
    const auto r = residual(spec.problem, t, psi);
    CHECK(err_a(r, spec.measure, 2.0) ==
          doctest::Approx(std::sqrt(0.1875)).epsilon(1e-12));

    ResidualMap zero;
    zero.r = {{0.0}, {0.0}};
    CHECK(err_a(zero, spec.measure, 1.0) == 0.0);
    CHECK(err_a(zero, spec.measure, order_inf) == 0.0);

    const auto half = two_point_fixture(0.5);
    SetValuedDecoder origin;
    origin.outputs = {{{0, 0}}};
    const auto rc = residual(half.problem, t, origin);
    CHECK(err_a(rc, half.measure, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(err_a(rc, half.measure, 0.5), std::invalid_argument);
}

TEST_CASE("disintegration identities on ensemble problems") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto ens = testsupport::make_ensemble_problem(seed);
        const auto t = build_measurement_table(ens.problem);
        for (const DiscreteMeasure& mu : {ens.uniform, ens.random}) {
            const auto pf = pushforward(mu, t);
            const auto dis = disintegrate(mu, t);

            double total = 0.0;
            for (double gm : pf.group_mass) total += gm;
            CHECK(total == doctest::Approx(mu.total_mass).epsilon(1e-12));

            for (std::size_t g = 0; g < t.groups.size(); ++g) {
                if (!dis.is_defined(g)) {
                    CHECK(pf.group_mass[g] == 0.0);
                    continue;
                }
                // probability: each conditional sums to 1
                double s = 0.0;
                for (double w : dis.group_weights[g]) s += w;
                CHECK(std::fabs(s - 1.0) <= 1e-12);
            }

            // reconstruction: integrating f against the conditionals and the
            // pushforward recovers the integral against mu, for an arbitrary f
            auto f = [](std::size_t xi, std::size_t ei) {
                return 1.0 + std::cos(2.0 * xi + ei);
            };
            double direct = 0.0;
            for (std::size_t xi = 0; xi < mu.weights.size(); ++xi)
                for (std::size_t ei = 0; ei < mu.weights[xi].size(); ++ei)
                    direct += f(xi, ei) * mu.weights[xi][ei];
            double nested = 0.0;
            for (std::size_t g = 0; g < t.groups.size(); ++g) {
                if (!dis.is_defined(g)) continue;
                double inner = 0.0;
                for (std::size_t k = 0; k < t.groups[g].members.size(); ++k) {
                    const auto [xi, ei] = t.groups[g].members[k];
                    inner += f(xi, ei) * dis.group_weights[g][k];
                }
                nested += pf.group_mass[g] * inner;
            }
            CHECK(std::fabs(direct - nested) <= 1e-12 * (1.0 + std::fabs(direct)));
        }
    }
}

TEST_CASE("measure scaling leaves conditionals fixed and scales errors") {
    const auto ens = testsupport::make_ensemble_problem(5);
    const auto t = build_measurement_table(ens.problem);
    const DiscreteMeasure& mu = ens.random;

    auto scaled_w = mu.weights;
    for (auto& row : scaled_w)
        for (double& v : row) v *= 3.0;
    const auto mu3 = make_measure(scaled_w);

    const auto d1 = disintegrate(mu, t);
    const auto d3 = disintegrate(mu3, t);
    for (std::size_t g = 0; g < t.groups.size(); ++g) {
        CHECK(d1.is_defined(g) == d3.is_defined(g));
        if (!d1.is_defined(g)) continue;
        for (std::size_t k = 0; k < d1.group_weights[g].size(); ++k)
            CHECK(d1.group_weights[g][k] == doctest::Approx(d3.group_weights[g][k]).epsilon(1e-12));
    }

    const auto psi = optimal_decoder_worst(ens.problem, t);
    const auto r = residual(ens.problem, t, psi);
    const double p = 2.0;
    CHECK(err_a(r, mu3, p) ==
          doctest::Approx(std::pow(3.0, 1.0 / p) * err_a(r, mu, p)).epsilon(1e-12));
    CHECK(err_a(r, mu3, order_inf) == err_a(r, mu, order_inf));
}

TEST_CASE("sup-norm error bounded by the worst-case error") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto ens = testsupport::make_ensemble_problem(seed);
        const auto t = build_measurement_table(ens.problem);
        const auto psi = optimal_decoder_worst(ens.problem, t);
        const auto r = residual(ens.problem, t, psi);
        const double worst = worst_case_error(ens.problem, t, psi);
        CHECK(err_a(r, ens.random, order_inf) <= worst + 1e-12);
        // with every atom positively weighted the two coincide
        CHECK(err_a(r, ens.uniform, order_inf) == worst);
    }
}
