#include "pipedrive/model.hpp"

#include <cmath>
#include <numbers>

namespace pipedrive {

Interval active_interval(const PipeSpec& pipe, const FrictionSpec& friction)
{
    if (friction.active) return *friction.active;
    return {pipe.L - pipe.L1, pipe.L};
}

bool fully_embedded(const PipeSpec& pipe, const FrictionSpec& friction)
{
    const Interval a = active_interval(pipe, friction);
    const double tol = 1e-12 * pipe.L;
    return std::abs(a.lo) <= tol && std::abs(a.hi - pipe.L) <= tol;
}

std::vector<Diagnostic> validate_pipe(const PipeSpec& p)
{
    std::vector<Diagnostic> d;
    if (!(p.R > 0.0)) d.push_back({"pipe.R", "radius must be positive"});
    if (!(p.h > 0.0 && p.h < 2.0 * p.R)) d.push_back({"pipe.h", "wall thickness must lie in (0, 2R)"});
    if (!(p.L > 0.0)) d.push_back({"pipe.L", "length must be positive"});
    if (!(p.L1 > 0.0 && p.L1 <= p.L))
        d.push_back({"pipe.L1", "embedded length must lie in (0, L]"});
    if (!(p.E > 0.0)) d.push_back({"pipe.E", "Young modulus must be positive"});
    if (!(p.rho > 0.0)) d.push_back({"pipe.rho", "density must be positive"});
    return d;
}

std::vector<Diagnostic> validate_friction(const PipeSpec& pipe, const FrictionSpec& f)
{
    std::vector<Diagnostic> d;
    if (!(f.tau0 >= 0.0)) d.push_back({"friction.tau0", "shear stress must be non-negative"});
    if (f.active) {
        const Interval a = *f.active;
        const double tol = 1e-12 * std::abs(pipe.L);
        if (!(a.lo <= a.hi)) d.push_back({"friction.active", "interval bounds are reversed"});
        if (!(a.lo >= -tol && a.hi <= pipe.L + tol))
            d.push_back({"friction.active", "interval must lie within [0, L]"});
    }
    return d;
}

DerivedProps derive_properties(const PipeSpec& pipe, const FrictionSpec& friction)
{
    auto d = validate_pipe(pipe);
    auto f = validate_friction(pipe, friction);
    d.insert(d.end(), f.begin(), f.end());
    if (!d.empty()) throw ValidationError(std::move(d));

    DerivedProps out;
    out.c = std::sqrt(pipe.E / pipe.rho);
    out.S_t = std::numbers::pi * pipe.h * (2.0 * pipe.R - pipe.h);
    out.P_t = 2.0 * std::numbers::pi * pipe.R;
    out.a_f = friction.tau0 * out.P_t / (pipe.rho * out.S_t);
    out.F_tp = friction.tau0 * out.P_t * active_interval(pipe, friction).length();
    return out;
}

std::vector<Diagnostic> validate_config(const PipeSpec& pipe, const FrictionSpec& friction,
                                        const Pulse& pulse, const GridSpec& grid)
{
    auto d = validate_pipe(pipe);
    for (auto& x : validate_friction(pipe, friction)) d.push_back(std::move(x));
    for (auto& x : validate_pulse(pulse)) d.push_back(std::move(x));

    if (!(grid.h_z > 0.0)) {
        d.push_back({"grid.hz", "space step must be positive"});
    } else if (pipe.L > 0.0) {
        const double n = pipe.L / grid.h_z;
        if (std::abs(n - std::round(n)) > 1e-6 || std::round(n) < 1.0)
            d.push_back({"grid.hz", "L must be an integer multiple of the space step"});
    }
    if (!(grid.t_end >= 0.0)) d.push_back({"grid.t_end", "horizon must be non-negative"});
    if (!(grid.guard > 0.0)) d.push_back({"grid.guard", "blow-up guard must be positive"});
    if (grid.h_t < 0.0) d.push_back({"grid.ht", "time step must be positive"});
    if (grid.h_t == 0.0 && !(grid.courant > 0.0))
        d.push_back({"grid.courant", "Courant number must be positive"});

    if (pipe.E > 0.0 && pipe.rho > 0.0 && grid.h_z > 0.0) {
        const double c = std::sqrt(pipe.E / pipe.rho);
        const double nu = grid.h_t > 0.0 ? c * grid.h_t / grid.h_z : grid.courant;
        if (nu > 1.0 + 1e-12)
            d.push_back({"grid.courant", "Courant condition violated: c*h_t/h_z = "
                                             + std::to_string(nu) + " > 1"});
    }
    return d;
}

ResolvedGrid resolve_grid(const GridSpec& grid, double c, double L)
{
    ResolvedGrid g;
    g.h_z = grid.h_z;
    g.h_t = grid.h_t > 0.0 ? grid.h_t : grid.courant * grid.h_z / c;
    g.courant = c * g.h_t / g.h_z;
    g.n_z = std::lround(L / grid.h_z);
    g.n_steps = std::lround(grid.t_end / g.h_t);
    g.guard = grid.guard;
    return g;
}

} // namespace pipedrive
