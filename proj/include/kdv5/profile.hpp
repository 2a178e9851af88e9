#pragma once

#include "kdv5/field.hpp"

namespace kdv5 {

// The localized control weight g: smooth, nonnegative, unit integral,
// supported in [center-radius, center+radius]. Stored by its collocation
// samples (so nonnegativity and support are exact) with the discrete
// quadrature normalization int g = 1 exact to roundoff; g_field() is the
// retained-band truncation.
class ControlProfile {
  public:
    const PeriodicGrid& grid() const { return grid_; }
    double center() const { return center_; }
    double radius() const { return radius_; }
    bool uniform() const { return uniform_; }
    const GridFunction& samples() const { return samples_; }
    const SpectralField& g_field() const { return field_; }
    // c in g = c*exp(-1/(1-y^2)); 1/(2pi) for the uniform variant.
    double normalization() const { return normalization_; }
    // max relative magnitude of the top-quartile grid modes; gauges whether
    // the collocation grid resolves g.
    double spectral_tail() const { return tail_; }

    friend ControlProfile make_profile(const PeriodicGrid& grid, double center, double radius);
    friend ControlProfile make_uniform_profile(const PeriodicGrid& grid);

  private:
    ControlProfile(const PeriodicGrid& grid, double center, double radius, bool uniform,
                   GridFunction samples, double normalization);

    PeriodicGrid grid_;
    double center_;
    double radius_;
    bool uniform_;
    GridFunction samples_;
    SpectralField field_;
    double normalization_;
    double tail_;
};

// Smooth bump c*exp(-1/(1-((x-center)/radius)^2)) inside the support, zero
// outside, c chosen so the grid quadrature of g is exactly 1.
// radius must lie in (0, pi).
ControlProfile make_profile(const PeriodicGrid& grid, double center, double radius);

// g == 1/(2pi): full-domain control, used by the closed-form reduction tests.
ControlProfile make_uniform_profile(const PeriodicGrid& grid);

}  // namespace kdv5
