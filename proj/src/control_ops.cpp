#include "kdv5/control_ops.hpp"

#include <cmath>

#include "kdv5/random_field.hpp"

namespace kdv5 {

GridFunction apply_g_op(const GridFunction& h, const ControlProfile& p) {
    if (h.grid() != p.grid()) throw DimensionError("apply_g_op: grid mismatch");
    const GridFunction& g = p.samples();
    GridFunction gh = g * h;
    const double ip = gh.quad();
    GridFunction out(h.grid());
    for (int j = 0; j < h.grid().n_points(); ++j) out[j] = g[j] * (h[j] - ip);
    return out;
}

SpectralField apply_g_op(const SpectralField& h, const ControlProfile& p) {
    if (h.grid() != p.grid()) throw DimensionError("apply_g_op: grid mismatch");
    return truncate(apply_g_op(to_grid(h), p));
}

SpectralField feedback(const SpectralField& u, double gamma, const ControlProfile& p) {
    return apply_g_op(apply_multiplier(apply_g_op(u, p), Multiplier::Dr(gamma)), p);
}

double control_dissipation(const SpectralField& u, double gamma, const ControlProfile& p) {
    const double n = sobolev_norm(apply_multiplier(apply_g_op(u, p), Multiplier::Dr(gamma / 2.0)), 0.0);
    return n * n;
}

double commutator_constant(double r, double s, const SpectralField& psi, int trials,
                           unsigned long long seed) {
    if (trials < 1) throw DomainError("commutator_constant: trials must be >= 1");
    const PeriodicGrid& grid = psi.grid();
    const GridFunction psig = to_grid(psi);
    const Multiplier Ds = Multiplier::Dr(s);
    const Multiplier Drr = Multiplier::Dr(r);
    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
        SpectralField f = random_field(grid, rng, 1.2);
        const GridFunction fg = to_grid(f);
        // [D^s; psi] f = D^s(psi f) - psi D^s f, composed at grid level
        GridFunction comm = apply_multiplier(psig * fg, Ds) - psig * apply_multiplier(fg, Ds);
        const double num = grid_l2_norm(apply_multiplier(comm, Drr));
        const double den = sobolev_norm(f, r + s - 1.0);
        if (den > 0.0) best = std::max(best, num / den);
    }
    return best;
}

}  // namespace kdv5
