#pragma once

#include <string>
#include <vector>

#include "pipedrive/grid.hpp"
#include "pipedrive/model.hpp"

namespace pipedrive {

struct WaveField {
    std::vector<double> u_prev, u_curr, u_next;
    std::vector<int> k_field; // friction sign of the last completed step
    long step = 0;
};

WaveField make_field(long n_z);

struct FrictionResolution {
    double u_next_resolved;
    int k;
};

// Fictive-velocity choice of the friction sign at one node. A node whose two
// trial velocities disagree in sign sticks and keeps its current position.
FrictionResolution resolve_friction(double u_curr_j, double u_next_nofric_j, double tau_j,
                                    double h_t);

struct StepContext {
    StepContext(const Problem& problem, const ResolvedGrid& grid);

    ResolvedGrid grid;
    Pulse pulse;
    std::vector<double> tau; // per-node friction deceleration, m/s^2
    double nu2 = 1.0;
    double load_coef = 0.0; // 2 h_z / (E S_t)
};

// Load fed to the ghost node at level n: the mean of Q over [t_{n-1}, t_{n+1}],
// or over [0, h_t] on the first step.
double averaged_load(const Pulse& pulse, long n, double h_t);

// Frictionless update of both end nodes through ghost values.
void apply_boundaries(WaveField& f, const StepContext& ctx, double q);

// Computes u_next and k_field without rotating the levels.
void advance(WaveField& f, const StepContext& ctx);
void rotate(WaveField& f);
void step(WaveField& f, const StepContext& ctx);

struct RunRequest {
    std::vector<double> snapshot_times; // s
    std::vector<double> probe_z;        // m
};

// Velocities are centred differences (U^{n+1} - U^{n-1}) / (2 h_t).
struct Snapshot {
    double t_requested = 0.0;
    double t = 0.0;
    long level = 0;
    std::vector<double> U, V;
};

struct ProbeSeries {
    double z_requested = 0.0;
    double z = 0.0;
    long node = 0;
    std::vector<double> t, U, V; // levels 1..n_steps
};

struct SimulationResult {
    ResolvedGrid grid;
    std::vector<double> z;
    std::vector<Snapshot> snapshots;
    std::vector<ProbeSeries> probes;
    std::vector<double> final_U;
    std::vector<double> peak_t, peak_speed; // max_j |V| per level 1..n_steps
    std::vector<std::string> warnings;
};

SimulationResult run(const Problem& problem, const GridSpec& grid, const RunRequest& request);

} // namespace pipedrive
