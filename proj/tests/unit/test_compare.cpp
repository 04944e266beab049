#include "doctest.h"

#include <cmath>

#include "pipedrive/analytic.hpp"
#include "pipedrive/compare.hpp"
#include "setups.hpp"

using namespace pipedrive;
using doctest::Approx;

TEST_CASE("error norms")
{
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> a{0.0, 2.0, 4.0, 2.0};
    SUBCASE("identical fields")
    {
        const auto r = error_norms(x, a, a);
        CHECK(r.l2_rel == 0.0);
        CHECK(r.linf_rel == 0.0);
        CHECK(r.peak_reference == 4.0);
        CHECK(r.samples == 4);
    }
    SUBCASE("single deviation")
    {
        const auto r = error_norms(x, {0.0, 2.0, 4.0, 2.4}, a);
        CHECK(r.linf_rel == Approx(0.1));
        CHECK(r.linf_location == 3.0);
        CHECK(r.l2_rel == Approx(std::sqrt(0.16 / 4.0) / 4.0));
    }
    SUBCASE("masked points are ignored")
    {
        const auto r = error_norms(x, {9.0, 2.0, 4.0, 2.0}, a, {false, true, true, true});
        CHECK(r.linf_rel == 0.0);
        CHECK(r.samples == 3);
    }
    SUBCASE("failures")
    {
        CHECK_THROWS_AS(error_norms(x, a, {0.0, 0.0, 0.0, 0.0}), std::domain_error);
        CHECK_THROWS_AS(error_norms(x, a, a, {false, false, false, false}), std::invalid_argument);
        CHECK_THROWS_AS(error_norms(x, {1.0}, a), std::invalid_argument);
    }
}

TEST_CASE("edge exclusion")
{
    std::vector<double> x, a;
    for (int i = 0; i <= 100; ++i) {
        x.push_back(0.1 * i);
        a.push_back(i >= 30 && i <= 60 ? 1.0 : 0.0);
    }
    const auto keep = edge_exclusion_mask(x, a, 0.2, {8.0});
    CHECK(keep[10]);
    CHECK_FALSE(keep[29]);
    CHECK_FALSE(keep[31]);
    CHECK(keep[45]);
    CHECK_FALSE(keep[61]);
    CHECK(keep[70]);
    CHECK_FALSE(keep[80]);
    CHECK(keep[85]);
}

TEST_CASE("power-law fit")
{
    std::vector<double> x, y;
    for (double v : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        x.push_back(v);
        y.push_back(4.28 * std::pow(v, -0.9448));
    }
    const auto f = fit_power_law(x, y);
    CHECK(f.coeff == Approx(4.28).epsilon(1e-12));
    CHECK(f.exponent == Approx(-0.9448).epsilon(1e-12));
    CHECK(f.r_squared == Approx(1.0));

    // rescaling the abscissa keeps the exponent
    std::vector<double> xs;
    for (double v : x) xs.push_back(1e3 * v);
    const auto g = fit_power_law(xs, y);
    CHECK(g.exponent == Approx(-0.9448).epsilon(1e-12));
    CHECK(g.coeff == Approx(4.28 * std::pow(1e3, 0.9448)).epsilon(1e-12));

    CHECK(fit_power_law({1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}).exponent == Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 0.0}, {1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("decay time")
{
    std::vector<double> t, v;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i);
        v.push_back(i < 10 ? i : std::max(0.0, 10.0 - 0.5 * (i - 10)));
    }
    CHECK(decay_time(t, v, 0.01) == 30.0);
    CHECK(decay_time(t, v, 0.5) == 21.0);
    CHECK(std::isinf(decay_time({0.0, 1.0}, {1.0, 2.0})));
}

TEST_CASE("velocity maxima along the 100 m pipe")
{
    const auto p = setups::long_pipe(100.0);
    RunRequest req;
    const double ht = 0.1 / std::sqrt(p.pipe.E / p.pipe.rho);
    for (int i = 1; i * ht <= 10e-3; ++i) req.snapshot_times.push_back(i * ht);
    const auto r = run(p, setups::grid(10e-3), req);
    const auto m = velocity_maxima_profile(r.snapshots);
    const auto a = AnalyticParams::from(p);
    CHECK(m[0] == Approx(p.pulse.P0 * a.K()).epsilon(0.02));
    // maxima follow the linear decay of the arch peak
    for (double z : {10.0, 20.0, 40.0}) {
        const auto j = static_cast<std::size_t>(std::lround(z / r.grid.h_z));
        const double tp = z / a.c + 0.5 * a.t0;
        CHECK(m[j] == Approx((a.P0 - 0.5 * a.q_f * a.c * tp) * a.K()).epsilon(0.03));
    }
    for (std::size_t j = 1; j + 1 < 400; ++j) CHECK(m[j + 1] <= m[j] * (1.0 + 1e-3));
}

TEST_CASE("final slip")
{
    SUBCASE("a frictionless rod never settles")
    {
        const auto p = setups::short_pipe(4.0, 4.0, 0.0);
        const auto r = run(p, setups::grid(5e-3, 0.02), {{}, {0.0}});
        CHECK_THROWS_AS(final_slip(r.probes[0]), NotSettledError);
    }
    SUBCASE("strong friction stops the pulse before the far end")
    {
        const auto p = setups::long_pipe(30.0, 0.2e6);
        const auto a = AnalyticParams::from(p);
        REQUIRE(decay_estimates(a).z_star < 15.0);
        const auto r = run(p, setups::grid(10e-3), {{}, {0.0, 5.0}});
        CHECK(final_slip(r.probes[0]) == Approx(displacement_semi_infinite(a, 0.0, 1.0)).epsilon(0.03));
        CHECK(final_slip(r.probes[1]) == Approx(displacement_semi_infinite(a, 5.0, 1.0)).epsilon(0.03));
    }
    SUBCASE("empty series")
    {
        CHECK_THROWS_AS(final_slip(ProbeSeries{}), NotSettledError);
    }
}
