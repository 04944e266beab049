#include "pipedrive/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pipedrive {

ComparisonReport error_norms(const std::vector<double>& x, const std::vector<double>& numeric,
                             const std::vector<double>& analytic, const std::vector<bool>& keep)
{
    if (numeric.size() != analytic.size() || x.size() != analytic.size()
        || (!keep.empty() && keep.size() != analytic.size()))
        throw std::invalid_argument("compared fields are sampled on different grids");

    ComparisonReport r;
    double sq = 0.0, worst = -1.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        if (!keep.empty() && !keep[i]) continue;
        const double e = std::abs(numeric[i] - analytic[i]);
        r.peak_reference = std::max(r.peak_reference, std::abs(analytic[i]));
        sq += e * e;
        if (e > worst) {
            worst = e;
            r.linf_location = x[i];
        }
        ++r.samples;
    }
    if (r.samples == 0) throw std::invalid_argument("comparison window is empty");
    if (r.peak_reference == 0.0)
        throw std::domain_error("analytic field vanishes on the window; nothing to normalise by");
    r.l2_rel = std::sqrt(sq / static_cast<double>(r.samples)) / r.peak_reference;
    r.linf_rel = worst / r.peak_reference;
    return r;
}

std::vector<bool> edge_exclusion_mask(const std::vector<double>& x,
                                      const std::vector<double>& analytic, double half_width,
                                      std::vector<double> const& extra_edges)
{
    std::vector<double> edges = extra_edges;
    for (std::size_t i = 0; i + 1 < analytic.size(); ++i)
        if ((analytic[i] == 0.0) != (analytic[i + 1] == 0.0)) edges.push_back(0.5 * (x[i] + x[i + 1]));

    std::vector<bool> keep(x.size(), true);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (double e : edges)
            if (std::abs(x[i] - e) <= half_width * (1.0 + 1e-9)) {
                keep[i] = false;
                break;
            }
    return keep;
}

std::vector<double> velocity_maxima_profile(const std::vector<Snapshot>& snapshots)
{
    std::vector<double> out;
    for (const auto& s : snapshots) {
        if (out.empty()) out.assign(s.V.size(), -std::numeric_limits<double>::infinity());
        if (s.V.size() != out.size()) throw std::invalid_argument("snapshots differ in size");
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::max(out[j], s.V[j]);
    }
    return out;
}

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size()) throw std::invalid_argument("sample lists differ in length");
    if (x.size() < 3) throw std::invalid_argument("power-law fit needs at least three samples");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0))
            throw std::invalid_argument("power-law fit needs strictly positive samples");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("power-law fit needs distinct abscissae");
    PowerLawFit f;
    f.exponent = sxy / sxx;
    f.coeff = std::exp(my - f.exponent * mx);
    if (syy == 0.0) {
        f.r_squared = 1.0;
    } else {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = ly[i] - (my + f.exponent * (lx[i] - mx));
            ss_res += r * r;
        }
        f.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return f;
}

double final_slip(const ProbeSeries& s, double settle_fraction)
{
    const std::size_t n = s.V.size();
    if (n == 0 || s.U.size() != n) throw NotSettledError("empty probe series");
    double peak = 0.0;
    for (double v : s.V) peak = std::max(peak, std::abs(v));
    const std::size_t first = n - std::max<std::size_t>(1, n / 10);
    double trailing = 0.0, mean = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        trailing = std::max(trailing, std::abs(s.V[i]));
        mean += s.U[i];
    }
    if (!(trailing < settle_fraction * peak) && peak > 0.0)
        throw NotSettledError("section z = " + std::to_string(s.z)
                              + " m is still moving at the end of the run; increase t_end");
    return mean / static_cast<double>(n - first);
}

double decay_time(const std::vector<double>& t, const std::vector<double>& peak, double fraction)
{
    if (t.size() != peak.size() || t.empty()) throw std::invalid_argument("bad peak history");
    const auto it = std::max_element(peak.begin(), peak.end());
    const double thr = fraction * *it;
    for (auto i = static_cast<std::size_t>(it - peak.begin()); i < peak.size(); ++i)
        if (peak[i] < thr) return t[i];
    return std::numeric_limits<double>::infinity();
}

} // namespace pipedrive
