#pragma once

#include <map>
#include <optional>
#include <string>

#include "kdv5/dense_operator.hpp"
#include "kdv5/trajectory.hpp"

namespace kdv5 {

// The closed-loop linear system
//   v_t + (eps D^{2l+1} + (-1)^{l+1} dx^{2l+1}) v + b0 v_xxx + b1 v_x
//       + [feedback] G D^{2l-1} G v = F,
// l = 2 being the fifth-order case v_t + (eps D^5 - dx^5) v + ... = F.
struct LinearModel {
    double eps = 0.0;
    double beta0 = 0.0;
    double beta1 = 0.0;
    int order_l = 2;             // spatial order 2l+1
    ControlProfile profile;
    bool feedback_on = true;

    LinearModel(ControlProfile p) : profile(std::move(p)) {}

    double smoothing() const { return order_l - 0.5; }   // Z-norm exponent
    double feedback_gamma() const { return 2.0 * order_l - 1.0; }
    void validate() const {
        if (order_l < 2) throw DomainError("LinearModel: order_l must be >= 2");
        if (eps < 0.0) throw DomainError("LinearModel: eps must be nonnegative");
    }
};

// L such that dv/dt = -L v reproduces the homogeneous equation. Throws
// ResolutionError when the grid does not resolve the profile.
DenseOperator assemble_generator(const LinearModel& model, const PeriodicGrid& grid);

// v(t_{n+1}) = S v(t_n) + dt/2 (S F_n + F_{n+1}) with S = exp(-dt L); the
// trapezoid Duhamel rule composes to v_N = S^N v_0 + dt sum_n w_n S^{N-n} F_n,
// which the control machinery relies on being exact.
Trajectory evolve_linear(const LinearModel& model, const SpectralField& v0,
                         std::span<const SpectralField> forcing, double T, double dt);
Trajectory evolve_linear(const LinearModel& model, const SpectralField& v0, double T, double dt);

// Backward solve of -u_t + dx^{2l+1} u + eps D^{2l+1} u + G D^{2l-1} G u = 0
// from u(T) = uT, stored forward-indexed (states[n] = u(t_n)); realized as the
// forward evolution of the adjoint generator under time reversal.
Trajectory adjoint_evolve(const LinearModel& model, const SpectralField& uT, double T, double dt);

struct LedgerReport {
    // keys: kinetic, dissipation_eps, dissipation_G, forcing_work, residual
    std::map<std::string, double> terms;
    double residual = 0.0;
    double relative_residual = 0.0;
};

// Energy identity ledger: 1/2||v(T)||^2 - 1/2||v0||^2 + eps int ||D^{(2l+1)/2} v||^2
// + int ||D^{(2l-1)/2}(G v)||^2 - int (v, F) = residual, time integrals by
// composite trapezoid on the trajectory nodes.
LedgerReport energy_ledger(const LinearModel& model, const Trajectory& traj,
                           std::span<const SpectralField> forcing = {});

struct WeightedLedgerReport {
    std::map<std::string, double> terms;
    double residual = 0.0;
    double relative_residual = 0.0;
};

// Weighted identity for w = D^s v and weight psi (fifth-order case):
//   1/2 d/dt int w^2 psi + 5/2 int (w_xx)^2 psi'
//   + int D^{3/2}(Gw) D^{3/2} G(psi w) + int psi w Ew
//   + eps { int (D^{5/2}w)^2 psi + int D^{5/2}w [D^{5/2}; psi] w }
//   = 5/2 int (w_x)^2 psi''' - 1/2 int w^2 psi^(5) + int psi w D^s F.
// With psi == 1 and s = 0 every weight term vanishes and the ledger reduces
// to the energy identity.
WeightedLedgerReport weighted_ledger(const LinearModel& model, const Trajectory& traj,
                                     const SpectralField& psi, double s,
                                     std::span<const SpectralField> forcing = {});

struct DecayFit {
    double lambda_hat = 0.0;     // fitted rate from the tail half
    double c_hat = 0.0;          // fitted prefactor relative to ||v0||_s
    double spectral_abscissa = 0.0;
    bool conclusive = false;
};

// Least-squares fit of log||v(t)||_s on the tail half of a feedback run,
// flagged inconclusive unless ||v(T)||_s/||v0||_s < 1/2.
DecayFit decay_rate(const LinearModel& model, const SpectralField& v0, double T, double dt,
                    double s);

// Shared fitting helper for nonlinear trajectories (no abscissa attached).
DecayFit fit_decay(const Trajectory& traj, double s);

}  // namespace kdv5
