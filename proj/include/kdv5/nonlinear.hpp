#pragma once

#include "kdv5/linear_evolution.hpp"

namespace kdv5 {

// u_t - dx^5 u + b0 u_xxx + b1 u_x + P(u) = F with
//   P(u) = c0 u u_x + c1 u^2 u_x + c2 u_x u_xx + c3 u u_xxx,
// or, with the hierarchy term active (order_l may exceed 2),
//   P(u) = u dx^{2l-1} u.
// The fifth-order KdV equation is (c0,c1,c2,c3) = (0,-30,20,10).
struct NonlinearModel {
    LinearModel linear;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
    bool hierarchy_term = false;

    NonlinearModel(LinearModel lin) : linear(std::move(lin)) {}
    void validate() const {
        linear.validate();
        if (hierarchy_term && (c0 != 0.0 || c1 != 0.0 || c2 != 0.0 || c3 != 0.0))
            throw DomainError("NonlinearModel: hierarchy term excludes c coefficients");
    }
};

// P(u), products formed pointwise on the collocation grid and truncated to
// the retained band (the default grids make quadratic and cubic retained-band
// convolutions alias-free: n_points >= 4K+2).
SpectralField nonlinearity(const SpectralField& u, const NonlinearModel& model);

struct RunDiagnostics {
    bool small_data_warning = false;
    double initial_norm = 0.0;
    double mean_shift = 0.0;
};

struct NonlinearOptions {
    double guard_s = 2.5;            // norm index for the blow-up guard
    double guard_factor = 1e3;
    double small_data_radius = 1e-2; // rho, in H^{guard_s}
};

// Exponential time stepping: linear part by the cached propagators S(dt),
// S(dt/2); the nonlinearity enters the Duhamel integral through an explicit
// RK2 midpoint; an open-loop signal G D^{3/2} k(t) is integrated with the
// same node-trapezoid rule as evolve_linear so that HUM resimulations are
// quadrature-consistent. Nonzero-mean data is reduced by u~ = u - [u0]
// (coefficient shifts in the linear part) and the mean is restored on output.
Trajectory evolve_nonlinear(const NonlinearModel& model, const SpectralField& u0,
                            std::span<const SpectralField> open_loop_k, double T, double dt,
                            const NonlinearOptions& opts = {}, RunDiagnostics* diag = nullptr);
Trajectory evolve_nonlinear(const NonlinearModel& model, const SpectralField& u0, double T,
                            double dt, const NonlinearOptions& opts = {},
                            RunDiagnostics* diag = nullptr);

struct PicardResult {
    Trajectory trajectory;
    int iterations = 0;
    std::vector<double> distances;   // successive Z_{s,T} iterate distances
    std::vector<double> ratios;      // contraction-ratio trace
};

struct PicardOptions {
    double s = 2.5;
    int max_iterations = 50;
    double contraction_horizon = 1.0;
    double small_data_radius = 1e-2;
};

// Fixed-point iteration on the discrete Duhamel map u -> S(t)u0 - int S.P(u),
// started from u^0(t) = S(t)u0, stopped when successive iterates differ by
// less than tol in the discrete Z_{s,T} norm on the trajectory's own dt grid.
PicardResult picard_solve(const NonlinearModel& model, const SpectralField& u0, double T,
                          double dt, double tol, const PicardOptions& opts = {});

DecayFit measure_decay(const Trajectory& traj, double s);

}  // namespace kdv5
