#pragma once

#include <vector>

#include "kdv5/field.hpp"

namespace kdv5 {

// Time-indexed states at t_n = n*dt, all on one grid.
class Trajectory {
  public:
    Trajectory(const PeriodicGrid& grid, double dt) : grid_(grid), dt_(dt) {
        if (dt <= 0.0) throw DomainError("Trajectory: dt must be positive");
    }

    const PeriodicGrid& grid() const { return grid_; }
    double dt() const { return dt_; }
    int size() const { return static_cast<int>(states_.size()); }
    double t_final() const { return dt_ * (size() - 1); }

    void push_back(SpectralField f) {
        if (f.grid() != grid_) throw DimensionError("Trajectory: state grid mismatch");
        states_.push_back(std::move(f));
    }
    const SpectralField& operator[](int n) const { return states_[n]; }
    const std::vector<SpectralField>& states() const { return states_; }

  private:
    PeriodicGrid grid_;
    double dt_;
    std::vector<SpectralField> states_;
};

// Composite trapezoid in time of per-node samples.
double time_quad(std::span<const double> values, double dt);

// Discrete Z_{s,T} norm: max_n ||v(t_n)||_s + (trapz dt ||v||^2_{s+sm})^{1/2}.
// The smoothing exponent sm is 3/2 for the fifth-order case and l-1/2 for the
// order-(2l+1) hierarchy.
double zst_norm(const Trajectory& traj, double s, double smoothing = 1.5);

// Same norm restricted to the unit interval [n, n+1] (clamped to the
// trajectory's span).
double unit_interval_znorm(const Trajectory& traj, int n, double s, double smoothing = 1.5);

double zst_distance(const Trajectory& a, const Trajectory& b, double s, double smoothing = 1.5);

}  // namespace kdv5
