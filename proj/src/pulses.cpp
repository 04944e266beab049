#include "pipedrive/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pipedrive {

namespace {

// Integral of the piecewise-linear unit profile from 0 to t (t clamped to [0, t0]).
double custom_primitive(const Pulse& p, double t)
{
    const auto& s = p.samples;
    const std::size_t m = s.size() - 1;
    const double dt = p.t0 / static_cast<double>(m);
    t = std::clamp(t, 0.0, p.t0);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = static_cast<double>(i) * dt;
        if (t <= a) break;
        const double len = std::min(t, a + dt) - a;
        const double slope = (s[i + 1] - s[i]) / dt;
        acc += s[i] * len + 0.5 * slope * len * len;
    }
    return acc;
}

double custom_value(const Pulse& p, double t)
{
    const auto& s = p.samples;
    const std::size_t m = s.size() - 1;
    const double x = t / p.t0 * static_cast<double>(m);
    const std::size_t i = std::min(static_cast<std::size_t>(x), m - 1);
    const double f = x - static_cast<double>(i);
    return s[i] + f * (s[i + 1] - s[i]);
}

} // namespace

Pulse Pulse::semi_sine(double P0, double t0)
{
    return {PulseShape::SemiSine, P0, t0, std::numbers::pi / t0, {}};
}

Pulse Pulse::rect(double P0, double duration)
{
    return {PulseShape::Rect, P0, duration, std::numbers::pi / duration, {}};
}

Pulse Pulse::continuous_sine(double P0, double omega)
{
    return {PulseShape::ContinuousSine, P0, 0.0, omega, {}};
}

Pulse Pulse::custom(double P0, double t0, std::vector<double> samples)
{
    return {PulseShape::Custom, P0, t0, std::numbers::pi / t0, std::move(samples)};
}

Pulse Pulse::custom(double P0, double t0, const std::function<double(double)>& profile,
                    int intervals)
{
    if (intervals < 1) throw std::invalid_argument("custom pulse needs at least one interval");
    std::vector<double> s(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) s[i] = profile(t0 * i / intervals);
    return custom(P0, t0, std::move(s));
}

double Pulse::duration() const
{
    return shape == PulseShape::ContinuousSine ? std::numbers::pi / omega : t0;
}

std::string_view shape_name(PulseShape shape)
{
    switch (shape) {
    case PulseShape::SemiSine: return "semisine";
    case PulseShape::Rect: return "rect";
    case PulseShape::ContinuousSine: return "sine";
    case PulseShape::Custom: return "custom";
    }
    return "?";
}

std::optional<PulseShape> parse_shape(std::string_view name)
{
    for (auto s : {PulseShape::SemiSine, PulseShape::Rect, PulseShape::ContinuousSine,
                   PulseShape::Custom})
        if (shape_name(s) == name) return s;
    return std::nullopt;
}

double unit_profile(const Pulse& p, double t)
{
    if (t < 0.0) return 0.0;
    if (p.shape == PulseShape::ContinuousSine) return std::sin(p.omega * t);
    if (t > p.t0) return 0.0;
    switch (p.shape) {
    case PulseShape::SemiSine: return std::sin(p.omega * t);
    case PulseShape::Rect: return 1.0;
    case PulseShape::Custom: return custom_value(p, t);
    default: return 0.0;
    }
}

double eval_pulse(const Pulse& p, double t) { return p.P0 * unit_profile(p, t); }

double pulse_impulse(const Pulse& p, double ta, double tb)
{
    if (tb < ta) return -pulse_impulse(p, tb, ta);
    ta = std::max(ta, 0.0);
    tb = std::max(tb, 0.0);
    if (p.finite()) {
        ta = std::min(ta, p.t0);
        tb = std::min(tb, p.t0);
    }
    switch (p.shape) {
    case PulseShape::SemiSine:
    case PulseShape::ContinuousSine:
        return p.P0 * (std::cos(p.omega * ta) - std::cos(p.omega * tb)) / p.omega;
    case PulseShape::Rect: return p.P0 * (tb - ta);
    case PulseShape::Custom: return p.P0 * (custom_primitive(p, tb) - custom_primitive(p, ta));
    }
    return 0.0;
}

double impact_energy(const Pulse& p)
{
    switch (p.shape) {
    case PulseShape::SemiSine: return 0.5 * p.t0 * p.P0 * p.P0;
    case PulseShape::Rect: return p.t0 * p.P0 * p.P0;
    case PulseShape::Custom: {
        const std::size_t m = p.samples.size() - 1;
        const double dt = p.t0 / static_cast<double>(m);
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = p.samples[i], b = p.samples[i + 1];
            acc += dt * (a * a + a * b + b * b) / 3.0;
        }
        return p.P0 * p.P0 * acc;
    }
    case PulseShape::ContinuousSine: break;
    }
    throw std::invalid_argument("impact energy is unbounded for a continuous sine load");
}

std::vector<Diagnostic> validate_pulse(const Pulse& p)
{
    std::vector<Diagnostic> d;
    if (!(p.P0 > 0.0)) d.push_back({"pulse.P0", "amplitude must be positive"});
    if (p.finite()) {
        if (!(p.t0 > 0.0)) d.push_back({"pulse.t0", "duration must be positive"});
        else if (p.shape == PulseShape::SemiSine
                 && std::abs(p.omega * p.t0 - std::numbers::pi) > 1e-9 * std::numbers::pi)
            d.push_back({"pulse.omega", "semi-sine requires omega = pi/t0"});
    } else if (!(p.omega > 0.0)) {
        d.push_back({"pulse.omega", "angular frequency must be positive"});
    }
    if (p.shape == PulseShape::Custom) {
        if (p.samples.size() < 2)
            d.push_back({"pulse.samples", "custom profile needs at least two samples"});
        for (double s : p.samples)
            if (!(s >= 0.0 && s <= 1.0)) {
                d.push_back({"pulse.samples", "profile values must lie in [0, 1]"});
                break;
            }
    }
    return d;
}

} // namespace pipedrive
