#include "kdv5/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace kdv5 {

double time_quad(std::span<const double> values, double dt) {
    const int n = static_cast<int>(values.size());
    if (n < 2) return 0.0;
    double s = 0.5 * (values[0] + values[n - 1]);
    for (int i = 1; i < n - 1; ++i) s += values[i];
    return dt * s;
}

namespace {

double znorm_range(const Trajectory& traj, int i0, int i1, double s, double smoothing) {
    double sup = 0.0;
    std::vector<double> sq;
    sq.reserve(i1 - i0 + 1);
    for (int i = i0; i <= i1; ++i) {
        sup = std::max(sup, sobolev_norm(traj[i], s));
        const double hi = sobolev_norm(traj[i], s + smoothing);
        sq.push_back(hi * hi);
    }
    return sup + std::sqrt(time_quad(sq, traj.dt()));
}

}  // namespace

double zst_norm(const Trajectory& traj, double s, double smoothing) {
    if (traj.size() < 2) throw DomainError("zst_norm: need at least two states");
    return znorm_range(traj, 0, traj.size() - 1, s, smoothing);
}

double unit_interval_znorm(const Trajectory& traj, int n, double s, double smoothing) {
    const int i0 = std::clamp(static_cast<int>(std::llround(n / traj.dt())), 0, traj.size() - 1);
    const int i1 =
        std::clamp(static_cast<int>(std::llround((n + 1) / traj.dt())), i0, traj.size() - 1);
    return znorm_range(traj, i0, i1, s, smoothing);
}

double zst_distance(const Trajectory& a, const Trajectory& b, double s, double smoothing) {
    if (a.size() != b.size() || a.grid() != b.grid())
        throw DimensionError("zst_distance: incompatible trajectories");
    Trajectory d(a.grid(), a.dt());
    for (int i = 0; i < a.size(); ++i) d.push_back(a[i] - b[i]);
    return zst_norm(d, s, smoothing);
}

}  // namespace kdv5
