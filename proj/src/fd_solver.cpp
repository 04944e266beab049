#include "pipedrive/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pipedrive {

WaveField make_field(long n_z)
{
    const auto n = static_cast<std::size_t>(n_z + 1);
    WaveField f;
    f.u_prev.assign(n, 0.0);
    f.u_curr.assign(n, 0.0);
    f.u_next.assign(n, 0.0);
    f.k_field.assign(n, 0);
    return f;
}

FrictionResolution resolve_friction(double u_curr_j, double u_next_nofric_j, double tau_j,
                                    double h_t)
{
    if (tau_j == 0.0) {
        const double v = u_next_nofric_j - u_curr_j;
        return {u_next_nofric_j, (v > 0.0) - (v < 0.0)};
    }
    const double u_plus = u_next_nofric_j - h_t * h_t * tau_j;
    const double u_minus = u_next_nofric_j + h_t * h_t * tau_j;
    const double v_plus = (u_plus - u_curr_j) / h_t;
    const double v_minus = (u_minus - u_curr_j) / h_t;
    if (v_plus > 0.0 && v_minus > 0.0) return {u_plus, 1};
    if (v_plus < 0.0 && v_minus < 0.0) return {u_minus, -1};
    return {u_curr_j, 0};
}

StepContext::StepContext(const Problem& problem, const ResolvedGrid& g)
    : grid(g), pulse(problem.pulse)
{
    const DerivedProps d = derive_properties(problem.pipe, problem.friction);
    const Interval act = active_interval(problem.pipe, problem.friction);
    const double tol = 1e-9 * g.h_z;
    tau.assign(static_cast<std::size_t>(g.n_z + 1), 0.0);
    for (long j = 0; j <= g.n_z; ++j)
        if (act.contains(static_cast<double>(j) * g.h_z, tol)) tau[j] = d.a_f;
    nu2 = g.courant * g.courant;
    load_coef = 2.0 * g.h_z / (problem.pipe.E * d.S_t);
}

double averaged_load(const Pulse& pulse, long n, double h_t)
{
    if (n == 0) return pulse_impulse(pulse, 0.0, h_t) / h_t;
    const double t = static_cast<double>(n) * h_t;
    return pulse_impulse(pulse, t - h_t, t + h_t) / (2.0 * h_t);
}

namespace {

// Second-order in time update from the spatial second difference `lap`.
inline double leapfrog(const WaveField& f, std::size_t j, double lap, double nu2, bool first)
{
    if (first) return f.u_curr[j] + 0.5 * nu2 * lap;
    return 2.0 * f.u_curr[j] - f.u_prev[j] + nu2 * lap;
}

} // namespace

void apply_boundaries(WaveField& f, const StepContext& ctx, double q)
{
    const auto nz = static_cast<std::size_t>(ctx.grid.n_z);
    const auto& u = f.u_curr;
    const bool first = f.step == 0;
    const double ghost0 = u[1] + ctx.load_coef * q;
    f.u_next[0] = leapfrog(f, 0, u[1] - 2.0 * u[0] + ghost0, ctx.nu2, first);
    const double ghostL = u[nz - 1];
    f.u_next[nz] = leapfrog(f, nz, ghostL - 2.0 * u[nz] + u[nz - 1], ctx.nu2, first);
}

void advance(WaveField& f, const StepContext& ctx)
{
    const auto nz = static_cast<std::size_t>(ctx.grid.n_z);
    const bool first = f.step == 0;
    const auto& u = f.u_curr;
    for (std::size_t j = 1; j < nz; ++j)
        f.u_next[j] = leapfrog(f, j, u[j + 1] - 2.0 * u[j] + u[j - 1], ctx.nu2, first);
    apply_boundaries(f, ctx, averaged_load(ctx.pulse, f.step, ctx.grid.h_t));

    // The Taylor start carries half of the friction impulse.
    const double tau_scale = first ? 0.5 : 1.0;
    for (std::size_t j = 0; j <= nz; ++j) {
        const auto r = resolve_friction(u[j], f.u_next[j], tau_scale * ctx.tau[j], ctx.grid.h_t);
        f.u_next[j] = r.u_next_resolved;
        f.k_field[j] = r.k;
        if (!(std::abs(r.u_next_resolved) <= ctx.grid.guard)) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "displacement %.3e m at node %zu exceeds the guard at step %ld",
                          r.u_next_resolved, j, f.step + 1);
            throw InstabilityError(buf);
        }
    }
}

void rotate(WaveField& f)
{
    std::swap(f.u_prev, f.u_curr);
    std::swap(f.u_curr, f.u_next);
    ++f.step;
}

void step(WaveField& f, const StepContext& ctx)
{
    advance(f, ctx);
    rotate(f);
}

SimulationResult run(const Problem& problem, const GridSpec& grid_spec, const RunRequest& req)
{
    auto diags = validate_config(problem.pipe, problem.friction, problem.pulse, grid_spec);
    for (double t : req.snapshot_times)
        if (!(t >= 0.0 && t <= grid_spec.t_end * (1.0 + 1e-12)))
            diags.push_back({"output.snapshots", "snapshot time outside [0, t_end]"});
    for (double z : req.probe_z)
        if (!(z >= 0.0 && z <= problem.pipe.L * (1.0 + 1e-12)))
            diags.push_back({"output.probes", "probe position outside [0, L]"});
    if (!diags.empty()) throw ValidationError(std::move(diags));

    const DerivedProps props = derive_properties(problem.pipe, problem.friction);
    SimulationResult res;
    res.grid = resolve_grid(grid_spec, props.c, problem.pipe.L);
    const ResolvedGrid& g = res.grid;
    const StepContext ctx(problem, g);
    const auto n_nodes = static_cast<std::size_t>(g.n_z + 1);

    res.z.resize(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) res.z[j] = static_cast<double>(j) * g.h_z;

    for (double t : req.snapshot_times) {
        Snapshot s;
        s.t_requested = t;
        s.level = std::clamp(std::lround(t / g.h_t), 0L, g.n_steps);
        s.t = static_cast<double>(s.level) * g.h_t;
        res.snapshots.push_back(std::move(s));
    }
    for (double z : req.probe_z) {
        ProbeSeries p;
        p.z_requested = z;
        p.node = std::clamp(std::lround(z / g.h_z), 0L, g.n_z);
        p.z = static_cast<double>(p.node) * g.h_z;
        if (std::abs(p.z - z) > 1e-9 * g.h_z) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "probe z = %.6g m snapped to node z = %.6g m", z, p.z);
            res.warnings.emplace_back(buf);
        }
        const auto n = static_cast<std::size_t>(g.n_steps);
        p.t.reserve(n);
        p.U.reserve(n);
        p.V.reserve(n);
        res.probes.push_back(std::move(p));
    }
    res.peak_t.reserve(static_cast<std::size_t>(g.n_steps));
    res.peak_speed.reserve(static_cast<std::size_t>(g.n_steps));

    WaveField f = make_field(g.n_z);
    for (auto& s : res.snapshots)
        if (s.level == 0) {
            s.U.assign(n_nodes, 0.0);
            s.V.assign(n_nodes, 0.0);
        }

    // Level m is emitted once level m + 1 exists.
    std::vector<double> v(n_nodes);
    for (long m = 0; m < g.n_steps + 1 && g.n_steps > 0; ++m) {
        advance(f, ctx);
        if (m >= 1) {
            const double t = static_cast<double>(m) * g.h_t;
            double peak = 0.0;
            for (std::size_t j = 0; j < n_nodes; ++j) {
                v[j] = (f.u_next[j] - f.u_prev[j]) / (2.0 * g.h_t);
                peak = std::max(peak, std::abs(v[j]));
            }
            res.peak_t.push_back(t);
            res.peak_speed.push_back(peak);
            for (auto& p : res.probes) {
                p.t.push_back(t);
                p.U.push_back(f.u_curr[p.node]);
                p.V.push_back(v[p.node]);
            }
            for (auto& s : res.snapshots)
                if (s.level == m) {
                    s.U = f.u_curr;
                    s.V = v;
                }
        }
        if (m == g.n_steps) break;
        rotate(f);
    }
    res.final_U = g.n_steps > 0 ? f.u_curr : std::vector<double>(n_nodes, 0.0);
    return res;
}

} // namespace pipedrive
