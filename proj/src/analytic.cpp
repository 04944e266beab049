#include "pipedrive/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pipedrive {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double pi = std::numbers::pi;

void require_shape(const AnalyticParams& p, PulseShape shape, const char* what)
{
    if (p.pulse.shape != shape)
        throw std::invalid_argument(std::string(what) + " requires a "
                                    + std::string(shape_name(shape)) + " pulse");
}

void require_finite_pulse(const AnalyticParams& p, const char* what)
{
    if (!p.pulse.finite())
        throw std::invalid_argument(std::string(what) + " requires a finite-duration pulse");
}

// Velocity reversal (k = -1) sets in when the pulse outlasts its own decay.
void require_validity(const AnalyticParams& p)
{
    const double t_star = decay_estimates(p).t_star;
    if (p.t0 > t_star)
        throw OutOfValidityError("pulse duration exceeds the decay time t*; the "
                                 "approximate solution assumes k = +1 throughout");
}

void require_full_embedment(const AnalyticParams& p)
{
    if (!p.full_embedment)
        throw OutOfValidityError("reflection sums assume friction along the whole rod");
}

bool try_eps(double slope, double offset, const AnalyticParams& p, double& eps)
{
    try {
        eps = solve_eps(slope, offset, p.omega, p.t0).eps;
        return true;
    } catch (const NoRootError&) {
        return false;
    }
}

// First eps in [0, t0/2] with h(eps) >= 0.
template <class H>
bool first_crossing(H h, double t0, double& eps)
{
    const double half = 0.5 * t0;
    if (h(0.0) >= 0.0) {
        eps = 0.0;
        return true;
    }
    constexpr int scan = 512;
    double lo = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double x = half * i / scan;
        if (h(x) >= 0.0) {
            double hi = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (h(mid) >= 0.0 ? hi : lo) = mid;
            }
            eps = hi;
            return true;
        }
        lo = x;
    }
    return false;
}

struct GenericOffsets {
    double eps1 = 0.0, eps2 = 0.0;
};

bool generic_offsets(const AnalyticParams& p, double z, GenericOffsets& out)
{
    const double P0 = p.P0, q = p.q_f, c = p.c, t0 = p.t0;
    const auto h1 = [&](double e) { return 2.0 * P0 * unit_profile(p.pulse, e) - q * (z + c * e); };
    const auto h2 = [&](double e) {
        return 2.0 * P0 * unit_profile(p.pulse, t0 - e) - q * (z + c * t0 - c * e);
    };
    return first_crossing(h1, t0, out.eps1) && first_crossing(h2, t0, out.eps2);
}

} // namespace

AnalyticParams AnalyticParams::from(const Problem& problem)
{
    const DerivedProps d = derive_properties(problem.pipe, problem.friction);
    AnalyticParams p;
    p.c = d.c;
    p.rhoS = problem.pipe.rho * d.S_t;
    p.ES = problem.pipe.E * d.S_t;
    p.q_f = problem.friction.tau0 * d.P_t;
    p.P0 = problem.pulse.P0;
    p.t0 = problem.pulse.duration();
    p.omega = problem.pulse.omega;
    p.L = problem.pipe.L;
    p.L_emb = active_interval(problem.pipe, problem.friction).length();
    p.full_embedment = fully_embedded(problem.pipe, problem.friction);
    p.pulse = problem.pulse;
    return p;
}

EpsSolution solve_eps(double slope, double offset, double omega, double t0)
{
    const double half = 0.5 * t0;
    const auto g = [&](double e) { return std::sin(omega * e) - offset - slope * e; };
    const double g0 = g(0.0);
    if (g0 == 0.0) return {0.0, 0.0, 0.0, 0.0};

    // g is concave on [0, t0/2]; em is its maximiser.
    double em;
    if (slope >= omega) em = 0.0;
    else if (slope <= -omega) em = half;
    else em = std::min(std::acos(slope / omega) / omega, half);

    double lo, hi;
    const bool rising = g0 < 0.0;
    if (rising) {
        lo = 0.0;
        hi = em;
        if (g(hi) < 0.0) throw NoRootError("sine stays below the line on [0, t0/2]");
    } else {
        lo = em;
        hi = half;
        if (g(hi) > 0.0) throw NoRootError("sine stays above the line on [0, t0/2]");
    }
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((gm < 0.0) == rising) lo = mid;
        else hi = mid;
    }
    const double e = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
    return {e, g(e), lo, hi};
}

DecayEstimates decay_estimates(const AnalyticParams& p)
{
    if (p.q_f == 0.0) return {inf, inf};
    const double t_star = 2.0 * p.P0 / (p.q_f * p.c);
    return {t_star, p.c * (t_star - 0.5 * p.t0)};
}

double velocity_semi_infinite_profile(const AnalyticParams& p, double z, double t)
{
    require_shape(p, PulseShape::SemiSine, "semi-infinite solution");
    require_validity(p);
    if (t < 0.0 || z > p.c * t) return 0.0;
    double eps;
    if (!try_eps(0.0, p.q_f * p.c * t / (2.0 * p.P0), p, eps)) return 0.0;
    const double s = t - z / p.c;
    if (s < eps || s > p.t0 - eps) return 0.0;
    return p.K() * (p.P0 * std::sin(p.omega * s) - 0.5 * p.q_f * p.c * t);
}

double velocity_semi_infinite(const AnalyticParams& p, double z, double t)
{
    require_shape(p, PulseShape::SemiSine, "semi-infinite solution");
    require_validity(p);
    const double kappa = p.q_f * p.c / (2.0 * p.P0);
    double e1, e2;
    if (!try_eps(kappa, kappa * z / p.c, p, e1)) return 0.0;
    if (!try_eps(-kappa, kappa * (z / p.c + p.t0), p, e2)) return 0.0;
    const double s = t - z / p.c;
    if (s < e1 || s > p.t0 - e2) return 0.0;
    return p.K() * (p.P0 * std::sin(p.omega * s) - 0.5 * p.q_f * p.c * t);
}

double displacement_semi_infinite(const AnalyticParams& p, double z, double t)
{
    require_shape(p, PulseShape::SemiSine, "semi-infinite solution");
    require_validity(p);
    const double kappa = p.q_f * p.c / (2.0 * p.P0);
    double e1, e2;
    if (!try_eps(kappa, kappa * z / p.c, p, e1)) return 0.0;
    if (!try_eps(-kappa, kappa * (z / p.c + p.t0), p, e2)) return 0.0;
    const double s = t - z / p.c;
    const double w = p.omega, zc = z / p.c;
    const double t_start = zc + e1;
    if (s < e1) return 0.0;
    if (s <= p.t0 - e2)
        return p.K()
               * (p.P0 / w * (std::cos(w * e1) - std::cos(w * s))
                  - 0.25 * p.q_f * p.c * (t * t - t_start * t_start));
    const double t_end = zc + p.t0 - e2;
    return p.K()
           * (p.P0 / w * (std::cos(w * e1) + std::cos(w * e2))
              - 0.25 * p.q_f * p.c * (t_end * t_end - t_start * t_start));
}

double velocity_generic_pulse(const AnalyticParams& p, double z, double t)
{
    require_finite_pulse(p, "generic pulse solution");
    require_validity(p);
    GenericOffsets e;
    if (!generic_offsets(p, z, e)) return 0.0;
    const double s = t - z / p.c;
    if (s < e.eps1 || s > p.t0 - e.eps2) return 0.0;
    return p.K() * (p.P0 * unit_profile(p.pulse, s) - 0.5 * p.q_f * p.c * t);
}

double displacement_generic_pulse(const AnalyticParams& p, double z, double t)
{
    require_finite_pulse(p, "generic pulse solution");
    require_validity(p);
    GenericOffsets e;
    if (!generic_offsets(p, z, e)) return 0.0;
    const double s = t - z / p.c;
    if (s < e.eps1) return 0.0;
    const double se = std::min(s, p.t0 - e.eps2);
    const double ta = z / p.c + e.eps1, tb = z / p.c + se;
    return p.K()
           * (pulse_impulse(p.pulse, e.eps1, se) - 0.25 * p.q_f * p.c * (tb * tb - ta * ta));
}

ReachThreshold reach_threshold(const AnalyticParams& p)
{
    ReachThreshold r;
    r.threshold = (p.L_emb + 0.5 * p.c * p.t0) * p.q_f / 2.0;
    r.simplified = 0.5 * p.F_tp();
    r.reached = p.P0 >= r.threshold;
    return r;
}

std::vector<ReflectionWindow> reflection_windows(const AnalyticParams& p, double z, double t)
{
    require_shape(p, PulseShape::SemiSine, "reflection sums");
    require_full_embedment(p);
    require_validity(p);
    const double L = p.L, c = p.c, t0 = p.t0;
    const double F = p.q_f * L;
    const double ratio = F / p.P0;
    const double kappa = p.q_f * c / (2.0 * p.P0);

    // Window counts, capped by the windows that have already arrived at z.
    const double arrived1 = std::floor((c * t - z) / (2.0 * L));
    const double arrived2 = std::floor((c * t + z) / (2.0 * L) - 1.0);
    const double n1 = F > 0.0 ? std::min(std::floor(p.P0 / F - z / (2.0 * L)), arrived1) : arrived1;
    const double n2 = F > 0.0 ? std::min(std::floor(p.P0 / F + z / (2.0 * L) - 1.0), arrived2)
                              : arrived2;

    std::vector<ReflectionWindow> out;
    for (long n = 0; n <= static_cast<long>(n1); ++n) {
        const double nn = static_cast<double>(n);
        double e11, e12;
        if (!try_eps(kappa, ratio * (nn + z / (2.0 * L)), p, e11)) continue;
        if (!try_eps(-kappa, ratio * (nn + (z + c * t0) / (2.0 * L)), p, e12)) continue;
        const double base = (2.0 * L * nn + z) / c;
        out.push_back({1, n, e11, e12, base + e11, base + t0 - e12});
    }
    for (long n = 0; n <= static_cast<long>(n2); ++n) {
        const double nn = static_cast<double>(n);
        double e21, e22;
        if (!try_eps(kappa, ratio * (nn + 1.0 - z / (2.0 * L)), p, e21)) continue;
        if (!try_eps(-kappa, ratio * (nn + 1.0 - z / (2.0 * L) + c * t0 / (2.0 * L)), p, e22))
            continue;
        const double base = (2.0 * L * (nn + 1.0) - z) / c;
        out.push_back({2, n, e21, e22, base + e21, base + t0 - e22});
    }
    return out;
}

std::vector<ReflectionWindow> rect_windows(const AnalyticParams& p, double z, double t)
{
    require_shape(p, PulseShape::Rect, "rectangular reflection sums");
    require_full_embedment(p);
    const double L = p.L, c = p.c;
    const double F = p.q_f * L;
    const double arrived1 = std::floor((c * t - z) / (2.0 * L));
    const double arrived2 = std::floor((c * t + z) / (2.0 * L) - 1.0);
    const double n1 = F > 0.0 ? std::min(std::floor(p.P0 / F - z / (2.0 * L)), arrived1) : arrived1;
    const double n2 = F > 0.0 ? std::min(std::floor(p.P0 / F + z / (2.0 * L) - 1.0), arrived2)
                              : arrived2;
    std::vector<ReflectionWindow> out;
    for (long n = 0; n <= static_cast<long>(n1); ++n) {
        const double a2 = (2.0 * L * static_cast<double>(n) + z) / c;
        out.push_back({1, n, 0.0, 0.0, a2, a2 + p.t0});
    }
    for (long n = 0; n <= static_cast<long>(n2); ++n) {
        const double b2 = (2.0 * L * static_cast<double>(n + 1) - z) / c;
        out.push_back({2, n, 0.0, 0.0, b2, b2 + p.t0});
    }
    return out;
}

double window_velocity(const AnalyticParams& p, const std::vector<ReflectionWindow>& windows, double t)
{
    double v = 0.0;
    for (const auto& w : windows)
        if (t >= w.start && t <= w.end)
            v += p.P0 * std::sin(p.omega * (t - w.start + w.eps_start)) - 0.5 * p.q_f * p.c * t;
    return p.K() * v;
}

double window_displacement(const AnalyticParams& p, const std::vector<ReflectionWindow>& windows,
                           double t)
{
    const double w = p.omega;
    double u = 0.0;
    for (const auto& win : windows) {
        if (t < win.start) continue;
        const double a2 = win.start;
        if (t <= win.end) {
            u += p.P0 / w * (std::cos(w * win.eps_start) - std::cos(w * (t - a2 + win.eps_start)))
                 - 0.25 * p.q_f * p.c * (t * t - a2 * a2);
        } else {
            const double a1 = win.end;
            u += p.P0 / w * (std::cos(w * win.eps_start) + std::cos(w * win.eps_end))
                 - 0.25 * p.q_f * p.c * (a1 * a1 - a2 * a2);
        }
    }
    return p.K() * u;
}

double velocity_finite_rod(const AnalyticParams& p, double z, double t)
{
    return window_velocity(p, reflection_windows(p, z, t), t);
}

double displacement_finite_rod(const AnalyticParams& p, double z, double t)
{
    return window_displacement(p, reflection_windows(p, z, t), t);
}

double velocity_rect_finite(const AnalyticParams& p, double z, double t)
{
    double v = 0.0;
    for (const auto& w : rect_windows(p, z, t))
        if (t >= w.start && t <= w.end) v += p.P0 - 0.5 * p.q_f * p.c * t;
    return p.K() * v;
}

double displacement_rect_finite(const AnalyticParams& p, double z, double t)
{
    double u = 0.0;
    for (const auto& w : rect_windows(p, z, t)) {
        if (t < w.start) continue;
        const double te = std::min(t, w.end);
        u += p.P0 * (te - w.start) - 0.25 * p.q_f * p.c * (te * te - w.start * w.start);
    }
    return p.K() * u;
}

SlipEstimate slip_semi_sine(const AnalyticParams& p)
{
    require_shape(p, PulseShape::SemiSine, "semi-sine slip");
    require_full_embedment(p);
    require_validity(p);
    const double L = p.L, c = p.c, t0 = p.t0, w = p.omega, P0 = p.P0;
    const double F = p.q_f * L;
    if (!(F > 0.0) || P0 < F)
        throw OutOfValidityError("slip sums need P0 >= F_tp (at least one full transit)");
    const long n_star = static_cast<long>(std::floor(P0 / F));
    const double ratio = F / P0;
    const double kappa = p.q_f * c / (2.0 * P0);
    const double g = c * t0 / (2.0 * L);

    const auto term = [&](double e1, double e2, double shift) {
        return P0 / w * (std::cos(w * e1) + std::cos(w * e2))
               - F * c / (4.0 * L) * (t0 - e1 - e2) * (t0 + shift + e1 - e2);
    };
    double sum = 0.0;
    for (long n = 0; n <= n_star; ++n) {
        const double nn = static_cast<double>(n);
        double e11, e12;
        if (try_eps(kappa, ratio * nn, p, e11) && try_eps(-kappa, ratio * (nn + g), p, e12))
            sum += term(e11, e12, 4.0 * L * nn / c);
    }
    for (long n = 0; n <= n_star - 1; ++n) {
        const double nn = static_cast<double>(n);
        double e21, e22;
        if (try_eps(kappa, ratio * (nn + 1.0), p, e21)
            && try_eps(-kappa, ratio * (nn + 1.0 + g), p, e22))
            sum += term(e21, e22, 4.0 * L * (nn + 1.0) / c);
    }

    SlipEstimate s;
    s.exact = p.K() * sum;
    s.estimate = t0 / (2.0 * c * p.rhoS * F)
                 * (P0 * P0 + 2.0 * P0 * F * (1.0 + 2.0 / pi * (1.0 + g)) - F * F * g);
    return s;
}

SlipEstimate slip_rect(const AnalyticParams& p)
{
    require_shape(p, PulseShape::Rect, "rectangular slip");
    require_full_embedment(p);
    const double L = p.L, c = p.c, t0 = p.t0, P0 = p.P0;
    const double F = p.q_f * L;
    if (!(F > 0.0) || P0 < F)
        throw OutOfValidityError("slip sums need P0 >= F_tp (at least one full transit)");
    const double m = std::floor(P0 / F);
    const double a = F * t0 * c / (4.0 * L);
    const double k = t0 / (c * p.rhoS);
    SlipEstimate s;
    s.exact = k * ((P0 - a) * (1.0 + 2.0 * m) - F * m * (m + 1.0));
    s.estimate = k / F * ((P0 - a) * (P0 - a) - F * a);
    return s;
}

double harmonic_radical_ratio(const AnalyticParams& p)
{
    const double first = pi * p.P0 / (2.0 * p.ES);
    const double second = p.q_f / (p.c * p.omega * p.rhoS);
    return (second * second) / (first * first);
}

double harmonic_A0(const AnalyticParams& p)
{
    const double first = pi * p.P0 / (2.0 * p.ES);
    const double second = p.q_f / (p.c * p.omega * p.rhoS);
    const double rad = first * first - second * second;
    if (rad < 0.0) throw OutOfValidityError("overdamped regime outside formula validity");
    return 2.0 * p.c / (pi * p.omega) * std::sqrt(rad);
}

double harmonic_amplitude(const AnalyticParams& p, double z, HarmonicVariant variant)
{
    const double denom = p.c * p.omega * p.rhoS;
    switch (variant) {
    case HarmonicVariant::MechanicalAnalogue:
        return harmonic_A0(p) - 2.0 * p.q_f * z / (pi * denom);
    case HarmonicVariant::ComplexAmplitudes: return harmonic_A0(p) - p.q_f * z / (2.0 * denom);
    case HarmonicVariant::Corrected: {
        if (z > decay_estimates(p).z_star) return 0.0;
        return (p.P0 + 0.5 * p.q_f) / denom;
    }
    }
    return 0.0;
}

double harmonic_solution(const AnalyticParams& p, double z, double t, HarmonicVariant variant)
{
    const double phase = p.omega * (t - z / p.c);
    const double a = harmonic_amplitude(p, z, variant);
    return variant == HarmonicVariant::Corrected ? a * std::cos(phase) : a * std::sin(phase);
}

double harmonic_velocity(const AnalyticParams& p, double z, double t, HarmonicVariant variant)
{
    const double phase = p.omega * (t - z / p.c);
    const double a = harmonic_amplitude(p, z, variant) * p.omega;
    return variant == HarmonicVariant::Corrected ? -a * std::sin(phase) : a * std::cos(phase);
}

} // namespace pipedrive
