#pragma once

#include <optional>
#include <vector>

#include "pipedrive/errors.hpp"
#include "pipedrive/grid.hpp"
#include "pipedrive/pulses.hpp"

namespace pipedrive {

struct PipeSpec {
    double R = 0.0;   // outer radius, m
    double h = 0.0;   // wall thickness, m
    double L = 0.0;   // length, m
    double L1 = 0.0;  // embedded length, m
    double E = 0.0;   // Pa
    double rho = 0.0; // kg/m^3

    bool operator==(const PipeSpec&) const = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double z, double tol = 0.0) const { return z >= lo - tol && z <= hi + tol; }
    bool operator==(const Interval&) const = default;
};

struct FrictionSpec {
    double tau0 = 0.0; // Pa
    // Unset means soil at the far end: [L - L1, L].
    std::optional<Interval> active;

    bool operator==(const FrictionSpec&) const = default;
};

struct DerivedProps {
    double c = 0.0;   // m/s
    double S_t = 0.0; // m^2
    double P_t = 0.0; // m
    double a_f = 0.0; // friction deceleration tau0 P_t / (rho S_t), m/s^2
    double F_tp = 0.0; // N
};

struct Problem {
    PipeSpec pipe;
    FrictionSpec friction;
    Pulse pulse;

    bool operator==(const Problem&) const = default;
};

Interval active_interval(const PipeSpec& pipe, const FrictionSpec& friction);
bool fully_embedded(const PipeSpec& pipe, const FrictionSpec& friction);

DerivedProps derive_properties(const PipeSpec& pipe, const FrictionSpec& friction);

std::vector<Diagnostic> validate_pipe(const PipeSpec& pipe);
std::vector<Diagnostic> validate_friction(const PipeSpec& pipe, const FrictionSpec& friction);
std::vector<Diagnostic> validate_config(const PipeSpec& pipe, const FrictionSpec& friction,
                                        const Pulse& pulse, const GridSpec& grid);

} // namespace pipedrive
