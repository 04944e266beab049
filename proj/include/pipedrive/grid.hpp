#pragma once

namespace pipedrive {

// Either h_t > 0 is given explicitly, or it follows from the Courant number.
struct GridSpec {
    double h_z = 0.1;     // m
    double courant = 1.0; // c h_t / h_z
    double h_t = 0.0;     // s, 0 = derive from courant
    double t_end = 0.0;   // s
    double guard = 1e3;   // m, blow-up threshold on |U|

    bool operator==(const GridSpec&) const = default;
};

struct ResolvedGrid {
    double h_z = 0.0;
    double h_t = 0.0;
    double courant = 0.0;
    long n_z = 0;     // nodes are j = 0..n_z
    long n_steps = 0; // time levels 0..n_steps
    double guard = 1e3;
};

ResolvedGrid resolve_grid(const GridSpec& grid, double c, double L);

} // namespace pipedrive
