#include "kdv5/linear_evolution.hpp"

#include <cmath>

#include "kdv5/control_ops.hpp"

namespace kdv5 {

namespace {

constexpr double kProfileTailLimit = 5e-2;

int step_count(double T, double dt) {
    const double r = T / dt;
    const long long n = std::llround(r);
    if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-8 * std::max(1.0, r))
        throw DomainError("evolve: dt must divide T");
    return static_cast<int>(n);
}

void require_mean_zero(const SpectralField& v, const char* what) {
    const double scale = std::max(1.0, sobolev_norm(v, 0.0));
    if (std::abs(v.at(0)) > 1e-12 * scale)
        throw DomainError(std::string(what) + ": data must have mean zero (project first)");
}

std::vector<Vec> pack_forcing(std::span<const SpectralField> forcing) {
    std::vector<Vec> F;
    F.reserve(forcing.size());
    for (const auto& f : forcing) F.push_back(pack(f));
    return F;
}

// v_{n+1} = S v_n + dt/2 (S F_n + F_{n+1}); composes to the exact
// trapezoid Duhamel sum v_N = S^N v_0 + dt sum w_n S^{N-n} F_n.
std::vector<Vec> evolve_packed(const Mat& S, const Vec& v0, const std::vector<Vec>& F, int N,
                               double dt) {
    std::vector<Vec> out;
    out.reserve(N + 1);
    out.push_back(v0);
    Vec v = v0;
    for (int n = 0; n < N; ++n) {
        if (F.empty()) {
            v = S * v;
        } else {
            v = S * (v + (0.5 * dt) * F[n]) + (0.5 * dt) * F[n + 1];
        }
        out.push_back(v);
    }
    return out;
}

Trajectory to_trajectory(const std::vector<Vec>& states, const PeriodicGrid& grid, double dt) {
    Trajectory traj(grid, dt);
    for (const auto& v : states) {
        SpectralField f = unpack(v, grid);
        f.symmetrize();
        traj.push_back(std::move(f));
    }
    return traj;
}

}  // namespace

DenseOperator assemble_generator(const LinearModel& model, const PeriodicGrid& grid) {
    model.validate();
    if (model.profile.grid() != grid) throw DimensionError("assemble_generator: profile grid mismatch");
    if (!model.profile.uniform() && model.profile.spectral_tail() > kProfileTailLimit)
        throw ResolutionError("assemble_generator: control profile unresolved on this grid "
                              "(relative spectral tail " +
                              std::to_string(model.profile.spectral_tail()) + " > " +
                              std::to_string(kProfileTailLimit) + ")");
    const int l = model.order_l;
    const double disp_sign = (l % 2 == 0) ? -1.0 : 1.0;  // (-1)^{l+1}
    const Multiplier d_high = Multiplier::Derivative(2 * l + 1);
    const Multiplier d3 = Multiplier::Derivative(3);
    const Multiplier d1 = Multiplier::Derivative(1);
    Vec diag = symbol_diagonal(grid, [&](int k) {
        const double kk = std::abs(static_cast<double>(k));
        return model.eps * std::pow(kk, 2 * l + 1) + disp_sign * d_high.symbol(k) +
               model.beta0 * d3.symbol(k) + model.beta1 * d1.symbol(k);
    });
    Mat L = diag.asDiagonal();
    if (model.feedback_on) {
        const double gamma = model.feedback_gamma();
        L += assemble_matrix(
                 [&](const SpectralField& f) { return feedback(f, gamma, model.profile); }, grid)
                 .m;
    }
    return DenseOperator(grid, std::move(L));
}

Trajectory evolve_linear(const LinearModel& model, const SpectralField& v0,
                         std::span<const SpectralField> forcing, double T, double dt) {
    require_mean_zero(v0, "evolve_linear");
    const int N = step_count(T, dt);
    if (!forcing.empty() && static_cast<int>(forcing.size()) != N + 1)
        throw DimensionError("evolve_linear: forcing needs N+1 node samples");
    const PeriodicGrid& grid = v0.grid();
    const DenseOperator L = assemble_generator(model, grid);
    const Mat S = propagator(L, dt).m;
    const auto states = evolve_packed(S, pack(v0), pack_forcing(forcing), N, dt);
    return to_trajectory(states, grid, dt);
}

Trajectory evolve_linear(const LinearModel& model, const SpectralField& v0, double T, double dt) {
    return evolve_linear(model, v0, {}, T, dt);
}

Trajectory adjoint_evolve(const LinearModel& model, const SpectralField& uT, double T, double dt) {
    require_mean_zero(uT, "adjoint_evolve");
    const int N = step_count(T, dt);
    const PeriodicGrid& grid = uT.grid();
    const DenseOperator L = assemble_generator(model, grid);
    const Mat Sadj = propagator(L, dt).m.adjoint();
    Trajectory traj(grid, dt);
    std::vector<Vec> back;
    back.reserve(N + 1);
    Vec u = pack(uT);
    back.push_back(u);
    for (int n = 0; n < N; ++n) {
        u = Sadj * u;
        back.push_back(u);
    }
    // states[n] = u(t_n) = (S^H)^{N-n} uT
    for (int n = N; n >= 0; --n) {
        SpectralField f = unpack(back[n], grid);
        f.symmetrize();
        traj.push_back(std::move(f));
    }
    return traj;
}

LedgerReport energy_ledger(const LinearModel& model, const Trajectory& traj,
                           std::span<const SpectralField> forcing) {
    const int n = traj.size();
    LedgerReport rep;
    if (n == 0) return rep;
    if (!forcing.empty() && static_cast<int>(forcing.size()) != n)
        throw DimensionError("energy_ledger: forcing must match the trajectory nodes");
    const double gamma = model.feedback_gamma();
    const double half_order = model.order_l + 0.5;
    std::vector<double> dissG(n, 0.0), dissE(n, 0.0), work(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (model.feedback_on) dissG[i] = control_dissipation(traj[i], gamma, model.profile);
        if (model.eps > 0.0) {
            const double d = sobolev_norm(apply_multiplier(traj[i], Multiplier::Dr(half_order)), 0.0);
            dissE[i] = model.eps * d * d;
        }
        if (!forcing.empty()) work[i] = inner_l2(traj[i], forcing[i]).real();
    }
    const double n0 = sobolev_norm(traj[0], 0.0);
    const double nT = sobolev_norm(traj[n - 1], 0.0);
    const double kinetic = 0.5 * (nT * nT - n0 * n0);
    rep.terms["kinetic"] = kinetic;
    rep.terms["dissipation_eps"] = time_quad(dissE, traj.dt());
    rep.terms["dissipation_G"] = time_quad(dissG, traj.dt());
    rep.terms["forcing_work"] = time_quad(work, traj.dt());
    rep.residual = kinetic + rep.terms["dissipation_eps"] + rep.terms["dissipation_G"] -
                   rep.terms["forcing_work"];
    rep.terms["residual"] = rep.residual;
    rep.relative_residual = rep.residual / std::max(0.5 * n0 * n0, 1e-300);
    return rep;
}

WeightedLedgerReport weighted_ledger(const LinearModel& model, const Trajectory& traj,
                                     const SpectralField& psi, double s,
                                     std::span<const SpectralField> forcing) {
    const int n = traj.size();
    WeightedLedgerReport rep;
    if (n == 0) return rep;
    if (!forcing.empty() && static_cast<int>(forcing.size()) != n)
        throw DimensionError("weighted_ledger: forcing must match the trajectory nodes");
    const PeriodicGrid& grid = traj.grid();
    const GridFunction psig = to_grid(psi);
    const GridFunction psi1 = apply_multiplier(psig, Multiplier::Derivative(1));
    const GridFunction psi3 = apply_multiplier(psig, Multiplier::Derivative(3));
    const GridFunction psi5 = apply_multiplier(psig, Multiplier::Derivative(5));
    const Multiplier Ds = Multiplier::Dr(s);
    const Multiplier D32 = Multiplier::Dr(1.5);
    const Multiplier D52 = Multiplier::Dr(2.5);
    const DenseOperator E = remainder_operator(s, model.profile, grid);
    const bool with_feedback = model.feedback_on;

    std::vector<double> t_psi1(n), t_ctrl(n), t_rem(n), t_eps(n), t_psi3(n), t_psi5(n), t_forc(n);
    double ddt_first = 0.0, ddt_last = 0.0;
    for (int i = 0; i < n; ++i) {
        const SpectralField w = apply_multiplier(traj[i], Ds);
        const GridFunction wg = to_grid(w);
        const GridFunction w1 = apply_multiplier(wg, Multiplier::Derivative(1));
        const GridFunction w2 = apply_multiplier(wg, Multiplier::Derivative(2));
        const double ddt = 0.5 * (psig * wg * wg).quad();
        if (i == 0) ddt_first = ddt;
        if (i == n - 1) ddt_last = ddt;
        t_psi1[i] = 2.5 * (psi1 * w2 * w2).quad();
        const SpectralField psiw = truncate(psig * wg);
        if (with_feedback) {
            const SpectralField a = apply_multiplier(apply_g_op(w, model.profile), D32);
            const SpectralField b = apply_multiplier(apply_g_op(psiw, model.profile), D32);
            t_ctrl[i] = inner_l2(a, b).real();
            t_rem[i] = inner_l2(psiw, unpack(E.apply(pack(w)), grid)).real();
        }
        if (model.eps > 0.0) {
            const GridFunction d52w = to_grid(apply_multiplier(w, D52));
            const GridFunction comm = apply_multiplier(psig * wg, D52) - psig * d52w;
            t_eps[i] = model.eps * ((psig * d52w * d52w).quad() + (d52w * comm).quad());
        }
        t_psi3[i] = 2.5 * (psi3 * w1 * w1).quad();
        t_psi5[i] = 0.5 * (psi5 * wg * wg).quad();
        if (!forcing.empty()) {
            const GridFunction dsF = to_grid(apply_multiplier(forcing[i], Ds));
            t_forc[i] = (psig * wg * dsF).quad();
        }
    }
    const double dt = traj.dt();
    rep.terms["ddt"] = ddt_last - ddt_first;
    rep.terms["psi1_dissipation"] = time_quad(t_psi1, dt);
    rep.terms["control_dissipation"] = time_quad(t_ctrl, dt);
    rep.terms["remainder"] = time_quad(t_rem, dt);
    rep.terms["eps_terms"] = time_quad(t_eps, dt);
    rep.terms["psi3"] = time_quad(t_psi3, dt);
    rep.terms["psi5"] = time_quad(t_psi5, dt);
    rep.terms["forcing"] = time_quad(t_forc, dt);
    const double lhs = rep.terms["ddt"] + rep.terms["psi1_dissipation"] +
                       rep.terms["control_dissipation"] + rep.terms["remainder"] +
                       rep.terms["eps_terms"];
    const double rhs = rep.terms["psi3"] - rep.terms["psi5"] + rep.terms["forcing"];
    rep.residual = lhs - rhs;
    rep.terms["residual"] = rep.residual;
    double scale = std::max({std::abs(lhs), std::abs(rhs), std::abs(ddt_first)});
    rep.relative_residual = rep.residual / std::max(scale, 1e-300);
    return rep;
}

DecayFit fit_decay(const Trajectory& traj, double s) {
    DecayFit fit;
    const int n = traj.size();
    if (n < 4) return fit;
    const double n0 = sobolev_norm(traj[0], s);
    const double nT = sobolev_norm(traj[n - 1], s);
    if (n0 <= 0.0 || nT <= 0.0 || nT / n0 >= 0.5) return fit;  // inconclusive
    const int i0 = n / 2;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (int i = i0; i < n; ++i) {
        const double t = i * traj.dt();
        const double y = std::log(sobolev_norm(traj[i], s));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++m;
    }
    const double det = m * sxx - sx * sx;
    if (det == 0.0) return fit;
    const double slope = (m * sxy - sx * sy) / det;
    const double intercept = (sy * sxx - sx * sxy) / det;
    fit.lambda_hat = -slope;
    fit.c_hat = std::exp(intercept) / n0;
    fit.conclusive = true;
    return fit;
}

DecayFit decay_rate(const LinearModel& model, const SpectralField& v0, double T, double dt,
                    double s) {
    if (!model.feedback_on) throw DomainError("decay_rate: feedback must be on");
    const DenseOperator L = assemble_generator(model, v0.grid());
    Trajectory traj = evolve_linear(model, v0, T, dt);
    DecayFit fit = fit_decay(traj, s);
    fit.spectral_abscissa = spectral_abscissa(L);
    return fit;
}

}  // namespace kdv5
