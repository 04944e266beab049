#pragma once

#include <vector>

#include "pipedrive/model.hpp"

namespace pipedrive {

// Constants shared by the closed-form solutions.
struct AnalyticParams {
    double c = 0.0;
    double rhoS = 0.0;  // rho S_t
    double ES = 0.0;    // E S_t
    double q_f = 0.0;   // tau0 P_t, friction force per unit length, N/m
    double P0 = 0.0;
    double t0 = 0.0;    // pulse duration (half period for a continuous sine)
    double omega = 0.0;
    double L = 0.0;     // rod length
    double L_emb = 0.0; // length of the friction interval
    bool full_embedment = true;
    Pulse pulse;

    static AnalyticParams from(const Problem& problem);
    double K() const { return 1.0 / (c * rhoS); }
    double F_tp() const { return q_f * L_emb; }
};

struct EpsSolution {
    double eps = 0.0;
    double residual = 0.0;
    double lo = 0.0, hi = 0.0; // final bracket
};

// Smallest root of sin(omega eps) = offset + slope eps on [0, t0/2], by bisection.
EpsSolution solve_eps(double slope, double offset, double omega, double t0);

struct DecayEstimates {
    double t_star = 0.0; // +inf without friction
    double z_star = 0.0;
};

DecayEstimates decay_estimates(const AnalyticParams& p);

// Fixed-time profile form with a single offset eps(t).
double velocity_semi_infinite_profile(const AnalyticParams& p, double z, double t);
// Fixed-section history form with eps1(z), eps2(z).
double velocity_semi_infinite(const AnalyticParams& p, double z, double t);
double displacement_semi_infinite(const AnalyticParams& p, double z, double t);

// Arbitrary finite pulse shape, offsets from 2 P0 Q(eps) = q_f (z + c eps).
double velocity_generic_pulse(const AnalyticParams& p, double z, double t);
double displacement_generic_pulse(const AnalyticParams& p, double z, double t);

struct ReachThreshold {
    double threshold = 0.0;  // (L + c t0/2) q_f / 2
    double simplified = 0.0; // F_tp / 2
    bool reached = false;
};

ReachThreshold reach_threshold(const AnalyticParams& p);

// One travelling window of the reflection sums. Direct windows (kind 1) carry
// eps11/eps12 and edges a1/a2, reflected ones (kind 2) eps21/eps22 and b1/b2.
struct ReflectionWindow {
    int kind = 1;
    long n = 0;
    double eps_start = 0.0; // eps11 or eps21
    double eps_end = 0.0;   // eps12 or eps22
    double start = 0.0;     // a2 or b2
    double end = 0.0;       // a1 or b1
};

// Windows reaching section z no later than t.
std::vector<ReflectionWindow> reflection_windows(const AnalyticParams& p, double z, double t);
std::vector<ReflectionWindow> rect_windows(const AnalyticParams& p, double z, double t);

// Sums over precomputed semi-sine windows; valid for any t not later than the
// time the windows were collected for.
double window_velocity(const AnalyticParams& p, const std::vector<ReflectionWindow>& windows, double t);
double window_displacement(const AnalyticParams& p, const std::vector<ReflectionWindow>& windows,
                           double t);

double velocity_finite_rod(const AnalyticParams& p, double z, double t);
double displacement_finite_rod(const AnalyticParams& p, double z, double t);

double velocity_rect_finite(const AnalyticParams& p, double z, double t);
double displacement_rect_finite(const AnalyticParams& p, double z, double t);

struct SlipEstimate {
    double exact = 0.0;
    double estimate = 0.0;
};

SlipEstimate slip_semi_sine(const AnalyticParams& p);
SlipEstimate slip_rect(const AnalyticParams& p);

enum class HarmonicVariant { MechanicalAnalogue, ComplexAmplitudes, Corrected };

double harmonic_A0(const AnalyticParams& p);
// Second summand under the A0 radical relative to the first.
double harmonic_radical_ratio(const AnalyticParams& p);
double harmonic_amplitude(const AnalyticParams& p, double z, HarmonicVariant variant);
double harmonic_solution(const AnalyticParams& p, double z, double t, HarmonicVariant variant);
double harmonic_velocity(const AnalyticParams& p, double z, double t, HarmonicVariant variant);

} // namespace pipedrive
