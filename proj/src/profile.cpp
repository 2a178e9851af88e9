#include "kdv5/profile.hpp"

#include <cmath>

#include "kdv5/grid.hpp"

namespace kdv5 {

namespace {

// relative magnitude of the strongest top-quartile grid mode
double tail_ratio(const GridFunction& g) {
    const int N = g.grid().n_points();
    std::vector<cdouble> buf(N);
    for (int j = 0; j < N; ++j) buf[j] = cdouble(g[j], 0.0);
    detail::dft(buf, -1);
    const double g0 = std::abs(buf[0]);
    if (g0 == 0.0) return 0.0;
    double top = 0.0;
    const int half = N / 2;
    for (int k = (3 * half) / 4; k <= half; ++k) {
        top = std::max(top, std::abs(buf[k]));
        top = std::max(top, std::abs(buf[(N - k) % N]));
    }
    return top / g0;
}

}  // namespace

ControlProfile::ControlProfile(const PeriodicGrid& grid, double center, double radius,
                               bool uniform, GridFunction samples, double normalization)
    : grid_(grid),
      center_(center),
      radius_(radius),
      uniform_(uniform),
      samples_(std::move(samples)),
      field_(truncate(samples_)),
      normalization_(normalization),
      tail_(uniform ? 0.0 : tail_ratio(samples_)) {}

ControlProfile make_profile(const PeriodicGrid& grid, double center, double radius) {
    if (!(radius > 0.0 && radius < 3.14159265358979323846))
        throw DomainError("make_profile: radius must lie in (0, pi)");
    const int N = grid.n_points();
    GridFunction g(grid);
    for (int j = 0; j < N; ++j) {
        // wrapped offset in (-pi, pi]
        double d = std::fmod(grid.point(j) - center + 3.0 * kTwoPi / 2.0, kTwoPi) - kTwoPi / 2.0;
        const double y = d / radius;
        g[j] = std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
    }
    const double integral = g.quad();
    if (integral <= 0.0) throw ResolutionError("make_profile: support contains no grid points");
    const double c = 1.0 / integral;
    g *= c;
    return ControlProfile(grid, center, radius, false, std::move(g), c);
}

ControlProfile make_uniform_profile(const PeriodicGrid& grid) {
    GridFunction g(grid);
    const double v = 1.0 / kTwoPi;
    for (int j = 0; j < grid.n_points(); ++j) g[j] = v;
    return ControlProfile(grid, 0.0, 3.14159265358979323846, true, std::move(g), v);
}

}  // namespace kdv5
