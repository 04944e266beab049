#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pipedrive/pulses.hpp"

using namespace pipedrive;
using doctest::Approx;

namespace {

double quad(const Pulse& p, double a, double b)
{
    // Split at the support edges so the integrand is smooth on each piece.
    double cuts[4] = {a, b, b, b};
    int n = 2;
    if (a < 0.0 && b > 0.0) cuts[n++] = 0.0;
    if (p.finite() && p.t0 > a && p.t0 < b) cuts[n++] = p.t0;
    std::sort(cuts, cuts + n);
    if (p.shape == PulseShape::Custom) {
        double acc = 0.0;
        const double dt = p.t0 / static_cast<double>(p.samples.size() - 1);
        double lo = a;
        for (double x = 0.0; x <= b + dt; x += dt) {
            const double hi = std::min(std::max(x, lo), b);
            if (hi > lo) {
                acc += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                    [&](double t) { return eval_pulse(p, t); }, lo, hi);
                lo = hi;
            }
        }
        return acc;
    }
    double acc = 0.0;
    for (int i = 0; i + 1 < n; ++i)
        acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            [&](double t) { return eval_pulse(p, t); }, cuts[i], cuts[i + 1], 10, 1e-14);
    return acc;
}

} // namespace

TEST_CASE("semi-sine values")
{
    const auto p = Pulse::semi_sine(989.6e3, 0.25e-3);
    CHECK(p.omega == Approx(std::numbers::pi / 0.25e-3));
    CHECK(eval_pulse(p, 0.125e-3) == Approx(989.6e3).epsilon(1e-14));
    CHECK(eval_pulse(p, 0.3e-3) == 0.0);
    CHECK(eval_pulse(p, -1e-6) == 0.0);
    CHECK(eval_pulse(p, 0.0) == 0.0);
    for (int i = 0; i <= 100; ++i) CHECK(eval_pulse(p, 0.25e-3 * i / 100.0) >= 0.0);
}

TEST_CASE("rectangular pulse is on at both ends of its support")
{
    const auto p = Pulse::rect(88e3, 0.11e-3);
    CHECK(eval_pulse(p, 0.05e-3) == 88e3);
    CHECK(eval_pulse(p, 0.0) == 88e3);
    CHECK(eval_pulse(p, 0.11e-3) == 88e3);
    CHECK(eval_pulse(p, 0.1100001e-3) == 0.0);
}

TEST_CASE("continuous sine never switches off")
{
    const auto p = Pulse::continuous_sine(1e3, 2000.0);
    CHECK(eval_pulse(p, 10.0) == Approx(1e3 * std::sin(20000.0)));
    CHECK(eval_pulse(p, -1.0) == 0.0);
}

TEST_CASE("custom profile interpolates its samples")
{
    const auto p = Pulse::custom(10.0, 1.0, {0.0, 1.0, 0.5});
    CHECK(eval_pulse(p, 0.25) == Approx(5.0));
    CHECK(eval_pulse(p, 0.75) == Approx(7.5));
    CHECK(eval_pulse(p, 1.0) == Approx(5.0));
    CHECK(eval_pulse(p, 1.01) == 0.0);
    const auto q = Pulse::custom(1.0, 2.0, [](double t) { return t / 2.0; }, 4);
    CHECK(q.samples.size() == 5);
    CHECK(eval_pulse(q, 1.3) == Approx(0.65));
}

TEST_CASE("impulse matches quadrature")
{
    const Pulse pulses[] = {Pulse::semi_sine(989.6e3, 0.25e-3), Pulse::rect(88e3, 0.11e-3),
                            Pulse::continuous_sine(5e5, std::numbers::pi / 1e-3),
                            Pulse::custom(3e4, 0.2e-3, {0.0, 0.3, 0.9, 1.0, 0.6, 0.1})};
    const double spans[][2] = {{-1e-5, 0.05e-3}, {0.02e-3, 0.09e-3}, {0.07e-3, 0.4e-3}, {0.0, 3e-3}};
    for (const auto& p : pulses)
        for (const auto& s : spans) {
            const double exact = quad(p, s[0], s[1]);
            CHECK(pulse_impulse(p, s[0], s[1]) == Approx(exact).epsilon(1e-9).scale(p.P0 * 1e-6));
        }
}

TEST_CASE("impact energy")
{
    CHECK(impact_energy(Pulse::semi_sine(989.6e3, 2.5e-4)) == Approx(1.2241352e8).epsilon(1e-12));
    CHECK(impact_energy(Pulse::rect(88e3, 1.1e-4)) == Approx(8.5184e5).epsilon(1e-12));
    CHECK(impact_energy(Pulse::semi_sine(1e-30, 2.5e-4)) == Approx(0.0));
    // equal energy for a rectangle of half the duration and the same amplitude
    CHECK(impact_energy(Pulse::semi_sine(88e3, 0.22e-3))
          == Approx(impact_energy(Pulse::rect(88e3, 0.11e-3))).epsilon(1e-14));
    CHECK_THROWS_AS(impact_energy(Pulse::continuous_sine(1.0, 1.0)), std::invalid_argument);

    const auto c = Pulse::custom(2.0, 0.5, {0.0, 1.0, 0.25});
    const double q = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                         [&](double t) { return eval_pulse(c, t) * eval_pulse(c, t); }, 0.0, 0.25)
                     + boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                         [&](double t) { return eval_pulse(c, t) * eval_pulse(c, t); }, 0.25, 0.5);
    CHECK(impact_energy(c) == Approx(q).epsilon(1e-12));
}

TEST_CASE("pulse validation")
{
    CHECK(validate_pulse(Pulse::semi_sine(1.0, 1.0)).empty());
    CHECK(validate_pulse(Pulse::semi_sine(0.0, 1.0)).size() == 1);
    CHECK(validate_pulse(Pulse::rect(1.0, 0.0)).size() == 1);
    CHECK(validate_pulse(Pulse::continuous_sine(1.0, 0.0)).size() == 1);
    CHECK(validate_pulse(Pulse::custom(1.0, 1.0, {0.0, 1.5})).size() == 1);
    CHECK(validate_pulse(Pulse::custom(1.0, 1.0, {0.5})).size() == 1);
    auto p = Pulse::semi_sine(1.0, 1.0);
    p.omega = 2.0;
    CHECK(validate_pulse(p).size() == 1);
}

TEST_CASE("shape names round-trip")
{
    for (auto s : {PulseShape::SemiSine, PulseShape::Rect, PulseShape::ContinuousSine, PulseShape::Custom})
        CHECK(parse_shape(shape_name(s)) == s);
    CHECK_FALSE(parse_shape("triangle"));
}
