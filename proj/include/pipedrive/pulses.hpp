#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "pipedrive/errors.hpp"

namespace pipedrive {

enum class PulseShape { SemiSine, Rect, ContinuousSine, Custom };

// End load Q(t). For Custom, `samples` holds the unit profile on an
// equally spaced grid over [0, t0], linearly interpolated in between.
struct Pulse {
    PulseShape shape = PulseShape::SemiSine;
    double P0 = 0.0;    // N
    double t0 = 0.0;    // s, ignored for ContinuousSine
    double omega = 0.0; // rad/s
    std::vector<double> samples;

    static Pulse semi_sine(double P0, double t0);
    static Pulse rect(double P0, double duration);
    static Pulse continuous_sine(double P0, double omega);
    static Pulse custom(double P0, double t0, std::vector<double> samples);
    static Pulse custom(double P0, double t0, const std::function<double(double)>& profile,
                        int intervals = 256);

    bool finite() const { return shape != PulseShape::ContinuousSine; }
    // Half period for ContinuousSine, t0 otherwise.
    double duration() const;

    bool operator==(const Pulse&) const = default;
};

std::string_view shape_name(PulseShape shape);
std::optional<PulseShape> parse_shape(std::string_view name);

// Q(t)/P0, with H0(0) = 1 at both ends of the support.
double unit_profile(const Pulse& pulse, double t);
double eval_pulse(const Pulse& pulse, double t);

// Exact integral of Q over [ta, tb].
double pulse_impulse(const Pulse& pulse, double ta, double tb);

// Bookkeeping measure int Q^2 dt in N^2 s (t0 P0^2 / 2 for the semi-sine).
double impact_energy(const Pulse& pulse);

std::vector<Diagnostic> validate_pulse(const Pulse& pulse);

} // namespace pipedrive
