#pragma once

#include <cstddef>
#include <vector>

#include "pipedrive/fd_solver.hpp"

namespace pipedrive {

struct ComparisonReport {
    double l2_rel = 0.0;   // RMS error / analytic peak
    double linf_rel = 0.0; // max error / analytic peak
    double linf_location = 0.0;
    double peak_reference = 0.0;
    std::size_t samples = 0;
};

// Norms over the points where `keep` is true (all points when empty).
ComparisonReport error_norms(const std::vector<double>& x, const std::vector<double>& numeric,
                             const std::vector<double>& analytic,
                             const std::vector<bool>& keep = {});

// Drops points within `half_width` of every edge of the analytic support
// (zero/non-zero transitions) and of each coordinate in `extra_edges`.
std::vector<bool> edge_exclusion_mask(const std::vector<double>& x,
                                      const std::vector<double>& analytic, double half_width,
                                      const std::vector<double>& extra_edges = {});

// Per-node maximum of V over the snapshots.
std::vector<double> velocity_maxima_profile(const std::vector<Snapshot>& snapshots);

struct PowerLawFit {
    double coeff = 0.0;
    double exponent = 0.0;
    double r_squared = 0.0;
};

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// Mean displacement over the trailing 10% of the series, provided the speed
// there stays below settle_fraction times the peak speed of the series.
double final_slip(const ProbeSeries& series, double settle_fraction = 1e-4);

// First time after the maximum at which the series drops below fraction * max.
double decay_time(const std::vector<double>& t, const std::vector<double>& peak,
                  double fraction = 0.01);

} // namespace pipedrive
