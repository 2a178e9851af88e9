#pragma once

#include <span>
#include <vector>

#include "kdv5/grid.hpp"

namespace kdv5 {

// One periodic function stored by its Fourier coefficients u_hat(k),
// k in {-K,...,K}, with the convention u(x) = sum_k u_hat(k) e^{ikx},
// u_hat(k) = (1/2pi) int u e^{-ikx} dx. Real-valued fields satisfy
// u_hat(-k) = conj(u_hat(k)); complex content is permitted (test vectors,
// operator columns) and all norms remain well-defined.
class SpectralField {
  public:
    explicit SpectralField(const PeriodicGrid& grid)
        : grid_(grid), c_(2 * grid.n_modes() + 1, cdouble(0.0, 0.0)) {}

    const PeriodicGrid& grid() const { return grid_; }
    int n_modes() const { return grid_.n_modes(); }

    cdouble& at(int k) { return c_[k + grid_.n_modes()]; }
    const cdouble& at(int k) const { return c_[k + grid_.n_modes()]; }

    std::span<const cdouble> coeffs() const { return c_; }
    std::span<cdouble> coeffs() { return c_; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }

    // Max relative deviation from u_hat(-k) = conj(u_hat(k)).
    double conjugate_symmetry_defect() const;
    // Average the +/-k pairs so the field is exactly real-valued.
    void symmetrize();

  private:
    PeriodicGrid grid_;
    std::vector<cdouble> c_;
};

// Exact discrete Fourier pair between collocation samples and retained
// coefficients. to_physical . to_spectral is the identity on bandlimited data.
SpectralField to_spectral(std::span<const double> samples, const PeriodicGrid& grid);
std::vector<double> to_physical(const SpectralField& field);

double mean(const SpectralField& field);
SpectralField project_mean_zero(const SpectralField& field);

// H^s norm (2pi sum_k (1+k^2)^s |u_hat(k)|^2)^{1/2}.
double sobolev_norm(const SpectralField& field, double s);

// L^2 inner product 2pi sum_k u_hat(k) conj(v_hat(k)); real part equals
// int u v dx for real fields.
cdouble inner_l2(const SpectralField& u, const SpectralField& v);

// Samples of one function on the full collocation grid: the n_points-mode
// trigonometric interpolant. Used where operator identities must compose in
// sample space with a single end truncation (control-operator identities,
// weighted ledgers, commutator diagnostics).
class GridFunction {
  public:
    explicit GridFunction(const PeriodicGrid& grid)
        : grid_(grid), v_(grid.n_points(), 0.0) {}
    GridFunction(const PeriodicGrid& grid, std::vector<double> values)
        : grid_(grid), v_(std::move(values)) {
        if (static_cast<int>(v_.size()) != grid_.n_points())
            throw DimensionError("GridFunction: sample count != n_points");
    }

    const PeriodicGrid& grid() const { return grid_; }
    std::span<const double> values() const { return v_; }
    std::span<double> values() { return v_; }
    double& operator[](int j) { return v_[j]; }
    double operator[](int j) const { return v_[j]; }

    // (2pi/N) sum_j v_j, the exact integral of the interpolant.
    double quad() const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator-=(const GridFunction& o);
    GridFunction& operator*=(double a);
    friend GridFunction operator*(const GridFunction& a, const GridFunction& b);
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double a, GridFunction f) { return f *= a; }

  private:
    PeriodicGrid grid_;
    std::vector<double> v_;
};

GridFunction to_grid(const SpectralField& field);
SpectralField truncate(const GridFunction& f);   // project onto |k| <= K
double grid_l2_norm(const GridFunction& f);      // sqrt(Q(f^2))

}  // namespace kdv5
