#include "kdv5/nonlinear.hpp"

#include <cmath>

#include "kdv5/control_ops.hpp"

namespace kdv5 {

namespace {

int step_count(double T, double dt) {
    const double r = T / dt;
    const long long n = std::llround(r);
    if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-8 * std::max(1.0, r))
        throw DomainError("evolve_nonlinear: dt must divide T");
    return static_cast<int>(n);
}

Vec nonlinearity_packed(const Vec& u, const NonlinearModel& model, const PeriodicGrid& grid) {
    return pack(nonlinearity(unpack(u, grid), model));
}

// u~ = u - m shifts the linear coefficients; the hierarchy term additionally
// contributes m dx^{2l-1}.
NonlinearModel shifted_model(const NonlinearModel& model, double m) {
    NonlinearModel out = model;
    if (model.hierarchy_term) return out;  // handled by the extra diagonal
    out.linear.beta1 += model.c0 * m + model.c1 * m * m;
    out.linear.beta0 += model.c3 * m;
    out.c0 += 2.0 * model.c1 * m;
    return out;
}

}  // namespace

SpectralField nonlinearity(const SpectralField& u, const NonlinearModel& model) {
    const PeriodicGrid& grid = u.grid();
    const GridFunction ug = to_grid(u);
    if (model.hierarchy_term) {
        const GridFunction du =
            to_grid(apply_multiplier(u, Multiplier::Derivative(2 * model.linear.order_l - 1)));
        return truncate(ug * du);
    }
    const GridFunction u1 = to_grid(apply_multiplier(u, Multiplier::Derivative(1)));
    GridFunction p(grid);
    if (model.c0 != 0.0) p += model.c0 * (ug * u1);
    if (model.c1 != 0.0) p += model.c1 * (ug * ug * u1);
    if (model.c2 != 0.0) {
        const GridFunction u2 = to_grid(apply_multiplier(u, Multiplier::Derivative(2)));
        p += model.c2 * (u1 * u2);
    }
    if (model.c3 != 0.0) {
        const GridFunction u3 = to_grid(apply_multiplier(u, Multiplier::Derivative(3)));
        p += model.c3 * (ug * u3);
    }
    return truncate(p);
}

Trajectory evolve_nonlinear(const NonlinearModel& model, const SpectralField& u0,
                            std::span<const SpectralField> open_loop_k, double T, double dt,
                            const NonlinearOptions& opts, RunDiagnostics* diag) {
    model.validate();
    const PeriodicGrid& grid = u0.grid();
    const int N = step_count(T, dt);
    if (!open_loop_k.empty() && static_cast<int>(open_loop_k.size()) != N + 1)
        throw DimensionError("evolve_nonlinear: control signal needs N+1 node samples");

    const double m0 = mean(u0);
    const NonlinearModel work = shifted_model(model, m0);
    DenseOperator L = assemble_generator(work.linear, grid);
    if (model.hierarchy_term && m0 != 0.0) {
        const Multiplier dhi = Multiplier::Derivative(2 * model.linear.order_l - 1);
        const Vec extra =
            m0 * symbol_diagonal(grid, [&dhi](int k) { return dhi.symbol(k); });
        L.m += Mat(extra.asDiagonal());
    }
    const Mat S1 = propagator(L, dt).m;
    const Mat Sh = propagator(L, 0.5 * dt).m;

    SpectralField u0z = project_mean_zero(u0);
    const double guard0 = sobolev_norm(u0z, opts.guard_s);
    if (diag) {
        diag->initial_norm = guard0;
        diag->mean_shift = m0;
        diag->small_data_warning = guard0 > opts.small_data_radius;
    }

    // control forcing samples G D^{3/2} k(t_n), integrated by the same
    // node-trapezoid rule as evolve_linear
    std::vector<Vec> F;
    if (!open_loop_k.empty()) {
        F.reserve(N + 1);
        for (const auto& k : open_loop_k)
            F.push_back(pack(apply_g_op(apply_multiplier(k, Multiplier::Dr(1.5)),
                                        model.linear.profile)));
    }

    Trajectory traj(grid, dt);
    auto emit = [&](const Vec& v) {
        SpectralField f = unpack(v, grid);
        f.symmetrize();
        if (m0 != 0.0) f.at(0) = cdouble(m0, 0.0);
        traj.push_back(std::move(f));
    };

    Vec u = pack(u0z);
    emit(u);
    const double guard_limit = opts.guard_factor * std::max(guard0, 1e-14);
    for (int n = 0; n < N; ++n) {
        const Vec r0 = -nonlinearity_packed(u, work, grid);
        const Vec uh = Sh * (u + (0.5 * dt) * r0);
        const Vec rm = -nonlinearity_packed(uh, work, grid);
        u = S1 * u + dt * (Sh * rm);
        if (!F.empty()) u += (0.5 * dt) * (S1 * F[n] + F[n + 1]);
        const double norm_now = sobolev_norm(u, grid, opts.guard_s);
        if (!std::isfinite(norm_now) || norm_now > guard_limit)
            throw DivergenceError("evolve_nonlinear: solution exceeded " +
                                  std::to_string(opts.guard_factor) +
                                  " x initial norm at t = " + std::to_string((n + 1) * dt));
        emit(u);
    }
    return traj;
}

Trajectory evolve_nonlinear(const NonlinearModel& model, const SpectralField& u0, double T,
                            double dt, const NonlinearOptions& opts, RunDiagnostics* diag) {
    return evolve_nonlinear(model, u0, {}, T, dt, opts, diag);
}

PicardResult picard_solve(const NonlinearModel& model, const SpectralField& u0, double T,
                          double dt, double tol, const PicardOptions& opts) {
    model.validate();
    if (T > opts.contraction_horizon + 1e-12)
        throw DomainError("picard_solve: T exceeds the contraction horizon (" +
                          std::to_string(opts.contraction_horizon) + ")");
    if (std::abs(mean(u0)) > 1e-12 * std::max(1.0, sobolev_norm(u0, 0.0)))
        throw DomainError("picard_solve: data must have mean zero");
    const PeriodicGrid& grid = u0.grid();
    const double smoothing = model.linear.smoothing();
    const int N = step_count(T, dt);
    const DenseOperator L = assemble_generator(model.linear, grid);
    const Mat S1 = propagator(L, dt).m;
    const Vec v0 = pack(u0);

    auto sweep = [&](const std::vector<Vec>* prev) {
        std::vector<Vec> out;
        out.reserve(N + 1);
        out.push_back(v0);
        Vec v = v0;
        for (int n = 0; n < N; ++n) {
            if (prev) {
                const Vec Fn = -nonlinearity_packed((*prev)[n], model, grid);
                const Vec Fn1 = -nonlinearity_packed((*prev)[n + 1], model, grid);
                v = S1 * (v + (0.5 * dt) * Fn) + (0.5 * dt) * Fn1;
            } else {
                v = S1 * v;
            }
            out.push_back(v);
        }
        return out;
    };
    auto zdist = [&](const std::vector<Vec>& a, const std::vector<Vec>& b) {
        double sup = 0.0;
        std::vector<double> sq(N + 1);
        for (int i = 0; i <= N; ++i) {
            const Vec d = a[i] - b[i];
            sup = std::max(sup, sobolev_norm(d, grid, opts.s));
            const double hi = sobolev_norm(d, grid, opts.s + smoothing);
            sq[i] = hi * hi;
        }
        return sup + std::sqrt(time_quad(sq, dt));
    };

    std::vector<Vec> cur = sweep(nullptr);
    PicardResult res{Trajectory(grid, dt)};
    int growing = 0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        std::vector<Vec> next = sweep(&cur);
        const double d = zdist(next, cur);
        if (!res.distances.empty()) {
            const double prev = res.distances.back();
            if (prev > 0.0) {
                const double ratio = d / prev;
                res.ratios.push_back(ratio);
                growing = ratio >= 1.0 ? growing + 1 : 0;
            }
        }
        res.distances.push_back(d);
        cur = std::move(next);
        res.iterations = it;
        if (d < tol) {
            for (const auto& v : cur) {
                SpectralField f = unpack(v, grid);
                f.symmetrize();
                res.trajectory.push_back(std::move(f));
            }
            return res;
        }
        if (growing >= 3)
            throw ConvergenceError(
                "picard_solve: contraction ratio >= 1 for 3 consecutive iterates "
                "(data outside the contraction regime)");
    }
    throw ConvergenceError("picard_solve: no convergence within " +
                           std::to_string(opts.max_iterations) + " iterations");
}

DecayFit measure_decay(const Trajectory& traj, double s) { return fit_decay(traj, s); }

}  // namespace kdv5
