#pragma once

#include <vector>

#include "kdv5/field.hpp"

namespace kdv5 {

// Fourier multiplier symbols:
//   Dr(r):        |k|^r for k != 0, identity on the mean
//   Derivative(j): (ik)^j
//   Hilbert:      -i sgn(k)
//   Mollifier(e): exp(-e^{1/10} k^2)
//   Custom:       arbitrary table over k in {-K,...,K}
class Multiplier {
  public:
    enum class Kind { dr, derivative, hilbert, mollifier, custom };

    static Multiplier Dr(double r) { return Multiplier(Kind::dr, r, 0, 0.0, {}); }
    static Multiplier Derivative(int j) {
        if (j < 0) throw DomainError("Multiplier::Derivative: order must be nonnegative");
        return Multiplier(Kind::derivative, 0.0, j, 0.0, {});
    }
    static Multiplier Hilbert() { return Multiplier(Kind::hilbert, 0.0, 0, 0.0, {}); }
    static Multiplier Mollifier(double eps) {
        if (eps <= 0.0) throw DomainError("Multiplier::Mollifier: eps must be positive");
        return Multiplier(Kind::mollifier, 0.0, 0, eps, {});
    }
    // table indexed k+K over {-K,...,K}
    static Multiplier Custom(std::vector<cdouble> table) {
        return Multiplier(Kind::custom, 0.0, 0, 0.0, std::move(table));
    }

    Kind kind() const { return kind_; }
    cdouble symbol(int k) const;
    int custom_size() const { return static_cast<int>(table_.size()); }

  private:
    Multiplier(Kind kind, double r, int j, double eps, std::vector<cdouble> table)
        : kind_(kind), r_(r), j_(j), eps_(eps), table_(std::move(table)) {}

    Kind kind_;
    double r_;
    int j_;
    double eps_;
    std::vector<cdouble> table_;
};

SpectralField apply_multiplier(const SpectralField& field, const Multiplier& m);

// Same symbol applied to the full grid spectrum of a grid function
// (Nyquist mode zeroed). Custom tables are not supported here.
GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m);

}  // namespace kdv5
