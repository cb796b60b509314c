#include <cmath>
#include <vector>

#include <doctest.h>

#include "ensemble.hpp"
#include "optrec/decoder_eval.hpp"
#include "optrec/io.hpp"

using namespace optrec;

namespace {

Problem identity_problem() {
    return Problem{MetricSpace::euclidean(1),
                   MetricSpace::euclidean(1),
                   {{{0.0}, {1.0}, {5.0}}},
                   {{{0.0}}},
                   LinearAdditive{{{1.0}}},
                   1e-9};
}

}  // namespace

TEST_CASE("baseline decoders on the two-point fixture") {
    const auto spec = two_point_fixture(0.5);
    const auto t = build_measurement_table(spec.problem);

    const auto first = make_baseline(BaselineKind::first_feasible, spec.problem, t);
    CHECK(first.outputs[0] == std::vector<Point>{{0, 0}});
    CHECK(worst_case_error(spec.problem, t, first) == doctest::Approx(1.0));

    const auto full = make_baseline(BaselineKind::full_feasible, spec.problem, t);
    CHECK(full.outputs[0] == std::vector<Point>{{0, 0}, {0, 1}});
    // the sup convention charges the far output: error equals the kernel size
    CHECK(worst_case_error(spec.problem, t, full) ==
          kersize_worst(spec.problem, t));

    BaselineOptions copt;
    copt.constant_point = {0, 0};
    const auto constant = make_baseline(BaselineKind::constant, spec.problem, t, copt);
    CHECK(worst_case_error(spec.problem, t, constant) == doctest::Approx(1.0));

    BaselineOptions s1, s2;
    s1.seed = 7;
    s2.seed = 7;
    const auto r1 = make_baseline(BaselineKind::random_feasible, spec.problem, t, s1);
    const auto r2 = make_baseline(BaselineKind::random_feasible, spec.problem, t, s2);
    CHECK(r1.outputs == r2.outputs);

    CHECK_THROWS_AS(make_baseline(BaselineKind::constant, spec.problem, t),
                    std::invalid_argument);
    CHECK_THROWS_AS(baseline_from_string("nearest"), std::invalid_argument);
}

TEST_CASE("gap evaluation") {
    const auto spec = two_point_fixture(0.5);
    const auto t = build_measurement_table(spec.problem);

    const auto psi = optimal_decoder_worst(spec.problem, t);
    const auto rep = evaluate_decoder(spec.problem, t, spec.measure, psi, "psi", {2.0});
    CHECK(rep.kersize_worst == doctest::Approx(1.0));
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].worst_error == doctest::Approx(0.5));
    CHECK(rep.rows[0].ratios_valid);
    CHECK(rep.rows[0].ratio_to_half_kersize == doctest::Approx(1.0));
    CHECK(rep.rows[0].avg_errors.at(2.0) == doctest::Approx(0.5).epsilon(1e-9));

    const auto first = make_baseline(BaselineKind::first_feasible, spec.problem, t);
    const auto repf = evaluate_decoder(spec.problem, t, spec.measure, first, "first", {});
    CHECK(repf.rows[0].worst_error == doctest::Approx(1.0));
    CHECK(repf.rows[0].avg_errors.empty());

    const Problem id = identity_problem();
    const auto ti = build_measurement_table(id);
    const auto exact = optimal_decoder_worst(id, ti);
    const auto repi = evaluate_decoder(id, ti, uniform_measure(3, 1), exact, "exact", {1.0});
    CHECK(repi.kersize_worst == 0.0);
    CHECK(repi.rows[0].worst_error == 0.0);
    CHECK_FALSE(repi.rows[0].ratios_valid);
}

TEST_CASE("optimal decoder dominates every baseline") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto ens = testsupport::make_ensemble_problem(seed);
        const auto t = build_measurement_table(ens.problem);
        const auto psi = optimal_decoder_worst(ens.problem, t);
        const double opt_err = worst_case_error(ens.problem, t, psi);
        const double ks = kersize_worst(ens.problem, t);

        BaselineOptions copt;
        copt.constant_point = ens.problem.model_class.points[0];
        copt.seed = seed;
        for (BaselineKind kind : {BaselineKind::first_feasible, BaselineKind::constant,
                                  BaselineKind::full_feasible, BaselineKind::random_feasible}) {
            const auto base = make_baseline(kind, ens.problem, t, copt);
            const double base_err = worst_case_error(ens.problem, t, base);
            CHECK(opt_err <= base_err + 1e-9);
            // every decoder sits above the universal floor
            CHECK(base_err >= ks / 2.0 - 1e-9);
        }
    }
}

TEST_CASE("null-space-property consequence check") {
    // noiseless injective fixture: no collisions, kernel size 0
    const Problem inj = identity_problem();
    const auto ti = build_measurement_table(inj);
    const auto vi = check_rnsp_bound(inj, ti, RnspCertificate{1.0, 1.0});
    CHECK(vi.pass);
    CHECK(vi.kersize == 0.0);
    CHECK(vi.eta == 0.0);

    // noise spread but still no collisions
    const Problem spread{MetricSpace::euclidean(1), MetricSpace::euclidean(1),
                         {{{0.0}, {1.0}}}, {{{-0.4}, {0.0}, {0.4}}},
                         LinearAdditive{{{1.0}}}, 1e-9};
    const auto ts = build_measurement_table(spread);
    const auto vs = check_rnsp_bound(spread, ts, RnspCertificate{1.0, 1.0});
    CHECK(vs.eta == doctest::Approx(0.8));
    CHECK(vs.kersize == 0.0);
    CHECK(vs.pass);

    // zero matrix: everything collides, kersize = diam(M1) > D2 * eta
    const Problem zero{MetricSpace::euclidean(2), MetricSpace::euclidean(1),
                       {{{0, 0}, {3, 4}}}, {{{0.0}}},
                       LinearAdditive{{{0, 0}}}, 1e-9};
    const auto tz = build_measurement_table(zero);
    const auto vz = check_rnsp_bound(zero, tz, RnspCertificate{1.0, 1.0});
    CHECK_FALSE(vz.pass);
    CHECK(vz.kersize == doctest::Approx(5.0));

    const Problem mult{MetricSpace::euclidean(1), MetricSpace::euclidean(1),
                       {{{1.0}}}, {{{1.0}}}, LinearMultiplicative{{{1.0}}}, 1e-9};
    const auto tm = build_measurement_table(mult);
    CHECK_THROWS_AS(check_rnsp_bound(mult, tm, RnspCertificate{}), std::invalid_argument);
}

TEST_CASE("null-space-property falsifier") {
    // generous constants on an injective matrix: no counterexample expected
    const ModelClass m1{{{0, 0}, {1, 0}, {0, 1}}};
    const Matrix eye = {{1, 0}, {0, 1}};
    RnspCertificate generous;
    generous.d1 = 1e3;
    generous.d2 = 1e3;
    CHECK_FALSE(rnsp_falsify(eye, m1, generous, 10000, 1).has_value());

    // zero matrix with tiny constants: any h off the difference set violates
    RnspCertificate tiny;
    tiny.d1 = 1e-6;
    tiny.d2 = 1e-6;
    const Matrix zero = {{0, 0}};
    const auto h = rnsp_falsify(zero, m1, tiny, 10000, 1);
    REQUIRE(h.has_value());
    double n1 = 0.0;
    for (double v : *h) n1 += v * v;
    CHECK(std::sqrt(n1) > 0.0);
}

TEST_CASE("forward-model family sweep") {
    const MetricSpace ex = MetricSpace::euclidean(2);
    const MetricSpace ey = MetricSpace::euclidean(1);
    const ModelClass m1{{{0, 0}, {0, 1}}};
    const NoiseClass e{{{0.0}}};

    const std::vector<ForwardModel> family = {LinearAdditive{{{1, 0}}},
                                              LinearAdditive{{{0, 1}}}};
    const auto res = forward_model_sweep(family, ex, ey, m1, e);
    CHECK(res.kersizes[0] == doctest::Approx(1.0));
    CHECK(res.kersizes[1] == 0.0);
    CHECK(res.best_ids == std::vector<std::size_t>{1});
    CHECK(res.selected == 1);
    for (double ks : res.kersizes) CHECK(res.kersizes[res.selected] <= ks);

    const auto solo = forward_model_sweep({LinearAdditive{{{1, 0}}}}, ex, ey, m1, e);
    CHECK(solo.selected == 0);

    const std::vector<ForwardModel> same = {LinearAdditive{{{1, 0}}},
                                            LinearAdditive{{{1, 0}}}};
    const auto tie = forward_model_sweep(same, ex, ey, m1, e);
    CHECK(tie.best_ids == std::vector<std::size_t>{0, 1});
    CHECK(tie.selected == 0);

    CHECK_THROWS_AS(forward_model_sweep({}, ex, ey, m1, e), std::invalid_argument);
}
