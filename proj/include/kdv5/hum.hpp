#pragma once

#include "kdv5/nonlinear.hpp"

namespace kdv5 {

// Open-loop control samples k(t_n), mean-zero at each node.
struct ControlSignal {
    PeriodicGrid grid;
    double dt;
    std::vector<SpectralField> values;

    ControlSignal(const PeriodicGrid& g, double dt_) : grid(g), dt(dt_) {}
    int size() const { return static_cast<int>(values.size()); }
    // discrete L^2(0,T;H^s) norm (trapezoid in time)
    double l2hs_norm(double s) const;
};

// Observability Gramian of the truncated system: the quadratic form
// <Lambda phi, phi> is the observation energy int ||D^{3/2}(G u_phi)||^2 of
// the adjoint solution with u(T) = phi (weighted by D^{-2s} when the control
// is measured in H^s). Hermitian PSD by construction.
struct Gramian {
    DenseOperator op;
    double T;
    double dt;
    double metric_s;   // 0 = L^2 control metric

    double lambda_min() const;
    double lambda_max() const;
};

// k(t_n) = D^{3/2}(G u(t_n)) along the adjoint solve from u(T) = phi.
ControlSignal control_from_adjoint(const SpectralField& phi, const LinearModel& model, double T,
                                   double dt);

// Dense assembly, column-parallel: column j runs one adjoint recursion from
// the j-th basis mode and one forward trapezoid-Duhamel accumulation.
Gramian assemble_gramian(const LinearModel& model, double T, double dt, const PeriodicGrid& grid,
                         double metric_s = 0.0, int threads = 1);

struct LinearControlResult {
    ControlSignal signal;
    double resimulation_error = 0.0;   // ||v(T)-vT||_s / max(||vT||_s, 1e-14)
    int solver_iterations = 0;         // 0 for the direct factorization path
    double lambda_min_estimate = 0.0;
    Trajectory resimulated;
};

struct LinearControlOptions {
    double metric_s = 0.0;     // H^s control metric; 0 keeps the L^2 pairing
    int cg_max_iterations = 500;
    double cg_tolerance = 1e-12;
    int dense_dim_limit = 128; // direct factorization up to this dimension
    int threads = 1;
};

// Minimum-energy steering v0 -> vT over [0,T]: solve Lambda phi = vT - S^N v0,
// k = control_from_adjoint(phi). Direct LDLT with iterative refinement at
// desk scale, matrix-free preconditioned CG above it.
LinearControlResult solve_linear_control(const LinearModel& model, const SpectralField& v0,
                                         const SpectralField& vT, double T, double dt, double s,
                                         const LinearControlOptions& opts = {});

struct NonlinearControlResult {
    ControlSignal signal;
    int iterations = 0;                 // Gamma fixed-point iterations
    std::vector<double> iterate_distances;
    double endpoint_error = 0.0;        // H^s error of the nonlinear resimulation
    Trajectory controlled;              // resimulated closed trajectory
    std::vector<SpectralField> physical_control;  // h = -D^3 G u + D^{3/2} k
    bool small_data_warning = false;

    NonlinearControlResult(const PeriodicGrid& g, double dt)
        : signal(g, dt), controlled(g, dt) {}
};

struct NonlinearControlOptions {
    double delta = 1e-2;          // small-data radius at s = 2.5
    int max_iterations = 25;
    double relaxation = 1.0;      // plain fixed point by default
    int threads = 1;
};

// Fixed point of Gamma(v) = S(t)u0 - int S (v dx^{2l-1} v or P(v))
//                          + W(Lambda^{-1}(uT - S(T)u0 + omega(v)(T))),
// re-solving the linear control for the corrected target each sweep. The HUM
// solve runs in the H^s control metric, so Lambda maps H^s data to controls
// in L^2(0,T;H^s). The result carries the endpoint error of a full nonlinear
// resimulation driven by G D^{3/2} k.
NonlinearControlResult solve_nonlinear_control(const NonlinearModel& model,
                                               const SpectralField& u0, const SpectralField& uT,
                                               double T, double dt, double s, double tol,
                                               const NonlinearControlOptions& opts = {});

struct ObservabilityReport {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double condition = 0.0;
    double c_hat = 0.0;          // 1/lambda_min
    int worst_mode = 0;          // dominant |k| of the least-observable eigenvector
    double symmetry_defect = 0.0;
    std::vector<double> spectrum;
};

ObservabilityReport observability_report(const LinearModel& model, double T, double dt,
                                         const PeriodicGrid& grid, int threads = 1);

}  // namespace kdv5
