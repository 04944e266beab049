#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "pipedrive/fd_solver.hpp"
#include "setups.hpp"

using namespace pipedrive;
using doctest::Approx;

namespace {

// Frictionless travelling wave from a semi-sine: U = (1 / (rho S c)) int_0^{t - z/c} Q.
double exact_free_displacement(const Problem& p, double z, double t)
{
    const double S = std::numbers::pi * p.pipe.h * (2.0 * p.pipe.R - p.pipe.h);
    const double c = std::sqrt(p.pipe.E / p.pipe.rho);
    const double s = std::min(t - z / c, p.pulse.t0);
    if (s <= 0.0) return 0.0;
    return p.pulse.P0 / p.pulse.omega * (1.0 - std::cos(p.pulse.omega * s)) / (p.pipe.rho * S * c);
}

} // namespace

TEST_CASE("friction sign from trial velocities")
{
    const double ht = 1.9608e-5, tau = 264.4;
    SUBCASE("both trials moving forward")
    {
        const auto r = resolve_friction(0.0, 1e-5, tau, ht);
        CHECK(r.k == 1);
        CHECK(r.u_next_resolved == Approx(1e-5 - ht * ht * tau).epsilon(1e-14));
        CHECK(r.u_next_resolved == Approx(9.8983e-6).epsilon(1e-4));
    }
    SUBCASE("both trials moving backward")
    {
        const auto r = resolve_friction(0.0, -1e-5, tau, ht);
        CHECK(r.k == -1);
        CHECK(r.u_next_resolved == Approx(-1e-5 + ht * ht * tau).epsilon(1e-14));
    }
    SUBCASE("trials disagree: the node sticks")
    {
        const auto r = resolve_friction(0.0, 5e-8, tau, ht);
        CHECK(r.k == 0);
        CHECK(r.u_next_resolved == 0.0);
        const auto s = resolve_friction(3e-4, 3e-4 - 5e-8, tau, ht);
        CHECK(s.k == 0);
        CHECK(s.u_next_resolved == 3e-4);
    }
    SUBCASE("no friction leaves the trial value")
    {
        const auto r = resolve_friction(1.0, 0.5, 0.0, ht);
        CHECK(r.k == -1);
        CHECK(r.u_next_resolved == 0.5);
        CHECK(resolve_friction(1.0, 1.0, 0.0, ht).k == 0);
    }
    SUBCASE("sticking happens only inside the friction band")
    {
        for (int i = -200; i <= 200; ++i) {
            const double unf = 2e-3 + i * 1e-9;
            const auto r = resolve_friction(2e-3, unf, tau, ht);
            const double trial_v = (unf - 2e-3) / ht;
            CHECK((r.k == 0) == (std::abs(trial_v) <= ht * tau));
        }
    }
}

TEST_CASE("averaged load integrates the pulse exactly")
{
    const auto p = Pulse::semi_sine(989.6e3, 0.25e-3);
    const double ht = 0.1 / 5099.898882317714;
    double sum = averaged_load(p, 0, ht) * ht;
    CHECK(sum == Approx(pulse_impulse(p, 0.0, ht)));
    sum = 0.0;
    for (long n = 1; n < 40; n += 2) sum += averaged_load(p, n, ht) * 2.0 * ht;
    CHECK(sum == Approx(pulse_impulse(p, 0.0, 40 * ht)).epsilon(1e-13));
}

TEST_CASE("quiescent rod stays at rest")
{
    auto p = setups::long_pipe(10.0);
    p.pulse = Pulse::semi_sine(1e-300, 0.25e-3);
    p.pulse.P0 = 0.0;
    const StepContext ctx(p, resolve_grid(setups::grid(1e-3), std::sqrt(p.pipe.E / p.pipe.rho), 10.0));
    p.pulse.P0 = 1.0;
    WaveField f = make_field(ctx.grid.n_z);
    for (int n = 0; n < 200; ++n) step(f, ctx);
    CHECK(std::all_of(f.u_curr.begin(), f.u_curr.end(), [](double u) { return u == 0.0; }));
}

TEST_CASE("first step touches only the loaded node")
{
    const auto p = setups::long_pipe(10.0);
    const auto g = resolve_grid(setups::grid(1e-3), std::sqrt(p.pipe.E / p.pipe.rho), 10.0);
    const StepContext ctx(p, g);
    WaveField f = make_field(g.n_z);
    advance(f, ctx);
    const double q = averaged_load(p.pulse, 0, g.h_t);
    const double expected = 0.5 * ctx.load_coef * q - 0.5 * g.h_t * g.h_t * ctx.tau[0];
    CHECK(f.u_next[0] == Approx(expected).epsilon(1e-14));
    CHECK(std::all_of(f.u_next.begin() + 1, f.u_next.end(), [](double u) { return u == 0.0; }));
}

TEST_CASE("frictionless wave is reproduced to round-off at unit Courant number")
{
    const auto p = setups::long_pipe(100.0, 0.0);
    const auto r = run(p, setups::grid(5e-3), {{1e-3, 5e-3}, {}});
    for (const auto& s : r.snapshots) {
        const double scale = *std::max_element(s.U.begin(), s.U.end());
        for (std::size_t j = 0; j < s.U.size(); ++j)
            CHECK(std::abs(s.U[j] - exact_free_displacement(p, r.z[j], s.t)) <= 1e-12 * scale);
    }
}

TEST_CASE("front occupies nodes behind c t only")
{
    const auto p = setups::long_pipe(100.0);
    const auto g = resolve_grid(setups::grid(1e-3), std::sqrt(p.pipe.E / p.pipe.rho), 100.0);
    const StepContext ctx(p, g);
    WaveField f = make_field(g.n_z);
    for (long n = 1; n <= 50; ++n) {
        step(f, ctx);
        CHECK(f.u_curr[n - 1] != 0.0);
        for (long j = n; j <= g.n_z; ++j) REQUIRE(f.u_curr[j] == 0.0);
    }
}

TEST_CASE("causality with friction")
{
    const auto p = setups::long_pipe(100.0);
    const auto r = run(p, setups::grid(6e-3), {{2e-3, 6e-3}, {}});
    const double c = std::sqrt(p.pipe.E / p.pipe.rho);
    for (const auto& s : r.snapshots)
        for (std::size_t j = 0; j < s.U.size(); ++j)
            if (r.z[j] > c * s.t + r.grid.h_z) REQUIRE(s.U[j] == 0.0);
}

TEST_CASE("peak speed of the decaying pulse")
{
    const auto p = setups::long_pipe(100.0);
    const auto r = run(p, setups::grid(10e-3), {{10e-3}, {}});
    const auto& V = r.snapshots[0].V;
    CHECK(*std::max_element(V.begin(), V.end()) == Approx(1.19).epsilon(0.03));
    // no growth after the load has ended
    const double t0 = p.pulse.t0;
    double prev = 1e300;
    for (std::size_t n = 0; n < r.peak_t.size(); ++n)
        if (r.peak_t[n] > t0 + 2.0 * r.grid.h_t) {
            CHECK(r.peak_speed[n] <= prev * (1.0 + 1e-9));
            prev = r.peak_speed[n];
        }
}

TEST_CASE("free end keeps velocity sign and flips strain sign")
{
    const auto p = setups::short_pipe(4.0, 4.0, 0.0);
    const double c = std::sqrt(p.pipe.E / p.pipe.rho);
    const double S = std::numbers::pi * p.pipe.h * (2.0 * p.pipe.R - p.pipe.h);
    const double v0 = p.pulse.P0 / (p.pipe.rho * S * c);
    GridSpec g = setups::grid(1.1e-3, 0.01);
    const auto r = run(p, g, {{0.4e-3, 1.06e-3}, {}});
    const auto strain = [&](const Snapshot& s, std::size_t j) {
        return (s.U[j + 1] - s.U[j - 1]) / (2.0 * r.grid.h_z);
    };
    const auto& in = r.snapshots[0];
    const auto& out = r.snapshots[1];
    const std::size_t j_in = 150, j_out = 300;
    CHECK(in.V[j_in] > 0.0);
    CHECK(strain(in, j_in) < 0.0);
    CHECK(out.V[j_out] > 0.0);
    CHECK(strain(out, j_out) > 0.0);
    CHECK(*std::max_element(out.V.begin(), out.V.end()) == Approx(v0).epsilon(0.01));
}

TEST_CASE("reflection returns to the loaded end after 2L/c")
{
    const auto p = setups::long_pipe(30.0);
    const double c = std::sqrt(p.pipe.E / p.pipe.rho);
    const double back = 2.0 * 30.0 / c;
    const auto r = run(p, setups::grid(back + 1e-3), {{}, {0.0}});
    const auto& pr = r.probes[0];
    double quiet = 0.0, echo = 0.0;
    // the end relaxes its residual compression briefly once the load is gone
    for (std::size_t n = 0; n < pr.t.size(); ++n) {
        if (pr.t[n] > 1e-3 && pr.t[n] < back - 2.0 * r.grid.h_t)
            quiet = std::max(quiet, std::abs(pr.V[n]));
        if (pr.t[n] > back && pr.t[n] < back + p.pulse.t0) echo = std::max(echo, pr.V[n]);
    }
    CHECK(quiet == 0.0);
    CHECK(echo > 0.5);
}

TEST_CASE("runs are deterministic")
{
    const auto p = setups::short_pipe(4.0, 2.0, 3e3);
    const RunRequest req{{0.5e-3, 2e-3}, {0.0, 2.0}};
    const auto a = run(p, setups::grid(2e-3, 0.01), req);
    const auto b = run(p, setups::grid(2e-3, 0.01), req);
    CHECK(a.final_U == b.final_U);
    CHECK(a.snapshots[1].V == b.snapshots[1].V);
    CHECK(a.probes[1].U == b.probes[1].U);
    CHECK(a.peak_speed == b.peak_speed);
}

TEST_CASE("zero duration run")
{
    const auto p = setups::long_pipe(10.0);
    const auto r = run(p, setups::grid(0.0), {{0.0}, {5.0}});
    CHECK(r.grid.n_steps == 0);
    CHECK(r.probes[0].t.empty());
    CHECK(r.peak_speed.empty());
    REQUIRE(r.snapshots.size() == 1);
    CHECK(std::all_of(r.snapshots[0].U.begin(), r.snapshots[0].U.end(), [](double u) { return u == 0.0; }));
    CHECK(r.final_U.size() == 101);
}

TEST_CASE("requests are snapped and validated")
{
    const auto p = setups::long_pipe(10.0);
    const auto r = run(p, setups::grid(1e-3), {{0.5e-3}, {2.04}});
    CHECK(r.probes[0].z == Approx(2.0));
    CHECK(r.warnings.size() == 1);
    CHECK(std::abs(r.snapshots[0].t - 0.5e-3) <= 0.5 * r.grid.h_t);
    CHECK_THROWS_AS(run(p, setups::grid(1e-3), {{2e-3}, {}}), ValidationError);
    CHECK_THROWS_AS(run(p, setups::grid(1e-3), {{}, {11.0}}), ValidationError);
    GridSpec g = setups::grid(1e-3);
    g.courant = 1.2;
    CHECK_THROWS_AS(run(p, g, {}), ValidationError);
}

TEST_CASE("guard violation aborts the run")
{
    const auto p = setups::long_pipe(10.0);
    GridSpec g = setups::grid(1e-3);
    g.guard = 1e-9;
    CHECK_THROWS_AS(run(p, g, {}), InstabilityError);
    CHECK_THROWS_AS(run(p, g, {}), NumericalError);
}

TEST_CASE("sub-unit Courant number still converges")
{
    const auto p = setups::long_pipe(20.0, 0.0);
    GridSpec g = setups::grid(2e-3, 0.02);
    g.courant = 0.5;
    const auto r = run(p, g, {{2e-3}, {}});
    const auto& s = r.snapshots[0];
    double err = 0.0, peak = 0.0;
    for (std::size_t j = 0; j < s.U.size(); ++j) {
        err = std::max(err, std::abs(s.U[j] - exact_free_displacement(p, r.z[j], s.t)));
        peak = std::max(peak, std::abs(s.U[j]));
    }
    CHECK(err < 0.01 * peak);
}
