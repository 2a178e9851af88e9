#pragma once

#include <complex>
#include <vector>

#include "kdv5/errors.hpp"

namespace kdv5 {

using cdouble = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Truncated Fourier discretization of the torus [0,2pi). Retained modes are
// k in {-K,...,K}; collocation points x_j = 2*pi*j/n_points. The default
// point count 2*(2K+1) rounded up to a power of two leaves enough headroom
// that pointwise products of up to three retained-band factors are alias-free
// on the grid (cubic terms need n_points > 4K).
class PeriodicGrid {
  public:
    PeriodicGrid(int n_modes, int n_points = 0)
        : n_modes_(n_modes),
          n_points_(n_points > 0 ? n_points : default_points(n_modes)) {
        if (n_modes_ < 1) throw DomainError("PeriodicGrid: n_modes must be positive");
        if (n_points_ < 2 * n_modes_ + 1)
            throw DomainError("PeriodicGrid: n_points must be >= 2*n_modes+1");
    }

    int n_modes() const { return n_modes_; }
    int n_points() const { return n_points_; }
    double length() const { return kTwoPi; }
    double point(int j) const { return kTwoPi * j / n_points_; }

    std::vector<double> points() const {
        std::vector<double> x(n_points_);
        for (int j = 0; j < n_points_; ++j) x[j] = point(j);
        return x;
    }

    static int default_points(int n_modes) {
        int want = 2 * (2 * n_modes + 1);
        int p = 1;
        while (p < want) p *= 2;
        return p;
    }

    friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) {
        return a.n_modes_ == b.n_modes_ && a.n_points_ == b.n_points_;
    }
    friend bool operator!=(const PeriodicGrid& a, const PeriodicGrid& b) { return !(a == b); }

  private:
    int n_modes_;
    int n_points_;
};

namespace detail {

// In-place complex DFT, convention X_k = sum_j x_j e^{-2pi i jk/N} for
// forward (sign=-1). Radix-2 when N is a power of two, direct summation
// otherwise (grids are small enough that the fallback stays exact and cheap).
void dft(std::vector<cdouble>& a, int sign);

}  // namespace detail

}  // namespace kdv5
