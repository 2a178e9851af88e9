#include "kdv5/verify.hpp"

#include <cmath>

#include "kdv5/control_ops.hpp"
#include "kdv5/random_field.hpp"

namespace kdv5 {

namespace {

SpectralField sine_mode(const PeriodicGrid& grid, int k, double amp) {
    SpectralField f(grid);
    f.at(k) = cdouble(0.0, -0.5 * amp);
    f.at(-k) = cdouble(0.0, 0.5 * amp);
    return f;
}

SpectralField cosine_mode(const PeriodicGrid& grid, int k, double amp) {
    SpectralField f(grid);
    f.at(k) = cdouble(0.5 * amp, 0.0);
    f.at(-k) = cdouble(0.5 * amp, 0.0);
    return f;
}

double rel_field_diff(const SpectralField& a, const SpectralField& b) {
    const double scale = std::max({sobolev_norm(a, 0.0), sobolev_norm(b, 0.0), 1e-300});
    return sobolev_norm(a - b, 0.0) / scale;
}

double rel_matrix_diff(const Mat& a, const Mat& b) {
    const double scale = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / scale;
}

// G(psi h) and psi.Gh + g(psi int gh - int psi gh), composed in sample space
// with one end truncation each.
std::pair<Mat, Mat> ctrl1_matrices(const ControlProfile& p, const GridFunction& psi,
                                   const PeriodicGrid& grid) {
    const GridFunction& g = p.samples();
    auto lhs = [&](const SpectralField& h) {
        return truncate(apply_g_op(psi * to_grid(h), p));
    };
    auto rhs = [&](const SpectralField& h) {
        const GridFunction hg = to_grid(h);
        const GridFunction Gh = apply_g_op(hg, p);
        const double igh = (g * hg).quad();
        const double ipgh = (psi * g * hg).quad();
        GridFunction out = psi * Gh;
        for (int j = 0; j < grid.n_points(); ++j) out[j] += g[j] * (psi[j] * igh - ipgh);
        return truncate(out);
    };
    return {assemble_matrix(lhs, grid).m, assemble_matrix(rhs, grid).m};
}

// [D^s; G] D^r f against the expansion
// [D^s; g] D^r f - D^s g . int f D^r g + g . int f D^{r+s} g.
std::pair<Mat, Mat> ctrl2_matrices(const ControlProfile& p, double s, double r,
                                   const PeriodicGrid& grid) {
    const GridFunction& g = p.samples();
    const Multiplier Ds = Multiplier::Dr(s);
    const GridFunction Dsg = apply_multiplier(g, Ds);
    const GridFunction Drg = apply_multiplier(g, Multiplier::Dr(r));
    const GridFunction Drsg = apply_multiplier(g, Multiplier::Dr(r + s));
    auto lhs = [&](const SpectralField& f) {
        const SpectralField m = apply_multiplier(f, Multiplier::Dr(r));
        const GridFunction mg = to_grid(m);
        const GridFunction a = apply_multiplier(apply_g_op(mg, p), Ds);
        const GridFunction b = apply_g_op(apply_multiplier(mg, Ds), p);
        return truncate(a - b);
    };
    auto rhs = [&](const SpectralField& f) {
        const GridFunction fg = to_grid(f);
        const GridFunction mg = to_grid(apply_multiplier(f, Multiplier::Dr(r)));
        GridFunction out = apply_multiplier(g * mg, Ds) - g * apply_multiplier(mg, Ds);
        const double ifdrg = (fg * Drg).quad();
        const double ifdrsg = (fg * Drsg).quad();
        for (int j = 0; j < grid.n_points(); ++j)
            out[j] += -Dsg[j] * ifdrg + g[j] * ifdrsg;
        return truncate(out);
    };
    return {assemble_matrix(lhs, grid).m, assemble_matrix(rhs, grid).m};
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
    std::vector<CheckResult> out;
    auto push = [&](const std::string& name, double value, double threshold,
                    const std::string& detail = "") {
        out.push_back({name, value <= threshold, value, threshold, detail});
    };
    auto push_min = [&](const std::string& name, double value, double lower,
                        const std::string& detail = "") {
        out.push_back({name, value > lower, value, lower, detail});
    };

    const PeriodicGrid grid(opts.K);
    std::mt19937_64 rng(opts.seed);
    const ControlProfile bump = make_profile(grid, opts.center, opts.radius);
    LinearModel model(bump);

    // -- spectral calculus --
    {
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            SpectralField u = project_mean_zero(random_field(grid, rng));
            const double a = 0.7, b = -1.3;
            worst = std::max(worst,
                             rel_field_diff(apply_multiplier(apply_multiplier(u, Multiplier::Dr(a)),
                                                             Multiplier::Dr(b)),
                                            apply_multiplier(u, Multiplier::Dr(a + b))));
        }
        push("multiplier_composition", worst, 1e-10);
    }
    {
        double worst = 0.0, isom = 0.0, hd = 0.0;
        for (int t = 0; t < 5; ++t) {
            SpectralField u = project_mean_zero(random_field(grid, rng));
            SpectralField hh = apply_multiplier(apply_multiplier(u, Multiplier::Hilbert()),
                                                Multiplier::Hilbert());
            worst = std::max(worst, rel_field_diff(hh, -1.0 * u));
            isom = std::max(isom,
                            std::abs(sobolev_norm(apply_multiplier(u, Multiplier::Hilbert()), 0.0) -
                                     sobolev_norm(u, 0.0)) /
                                sobolev_norm(u, 0.0));
            hd = std::max(
                hd, rel_field_diff(apply_multiplier(apply_multiplier(u, Multiplier::Derivative(1)),
                                                    Multiplier::Hilbert()),
                                   apply_multiplier(u, Multiplier::Dr(1.0))));
        }
        push("hilbert_involution", worst, 1e-10);
        push("hilbert_isometry", isom, 1e-10);
        push("d_equals_hilbert_dx", hd, 1e-10);
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            SpectralField u = random_field(grid, rng);
            const auto smp = to_physical(u);
            double q = 0.0;
            for (double x : smp) q += x * x;
            q *= kTwoPi / grid.n_points();
            const double n2 = std::pow(sobolev_norm(u, 0.0), 2);
            worst = std::max(worst, std::abs(n2 - q) / std::max(n2, 1e-300));
        }
        push("parseval", worst, 1e-10);
    }
    {
        SpectralField u = random_field(grid, rng, 1.5);
        double worst = 0.0;
        for (double gamma : {1.0, 3.5}) {
            for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
                const double r = std::pow(eps, gamma / 10.0) *
                                 sobolev_norm(apply_multiplier(u, Multiplier::Mollifier(eps)),
                                              1.0 + gamma) /
                                 sobolev_norm(u, 1.0);
                worst = std::max(worst, r);
            }
        }
        push("mollifier_bound", worst, 1.0);
    }

    // -- control operator --
    {
        double sa = 0.0, mz = 0.0;
        for (int t = 0; t < 5; ++t) {
            SpectralField u = random_field(grid, rng), v = random_field(grid, rng);
            const double a = inner_l2(apply_g_op(u, bump), v).real();
            const double b = inner_l2(u, apply_g_op(v, bump)).real();
            sa = std::max(sa, std::abs(a - b) / std::max(std::abs(a), 1e-300));
            mz = std::max(mz, std::abs(mean(apply_g_op(u, bump))));
        }
        SpectralField c(grid);
        c.at(0) = cdouble(3.0, 0.0);
        push("g_self_adjoint", sa, 1e-12);
        push("g_mean_zero", mz, 1e-12);
        push("g_annihilates_constants", sobolev_norm(apply_g_op(c, bump), 0.0), 1e-12);
    }
    {
        GridFunction psi(grid);
        for (int j = 0; j < grid.n_points(); ++j)
            psi[j] = 1.0 + 0.5 * std::sin(grid.point(j));
        const auto [l1, r1] = ctrl1_matrices(bump, psi, grid);
        push("g_product_identity", rel_matrix_diff(l1, r1), 1e-10);
        double worst = 0.0;
        for (auto [s, r] : {std::pair{1.0, 0.0}, {1.5, 3.0}, {-0.5, 3.0}}) {
            const auto [l2, r2] = ctrl2_matrices(bump, s, r, grid);
            worst = std::max(worst, rel_matrix_diff(l2, r2));
        }
        push("g_commutator_identity", worst, 1e-10);
    }
    {
        double eq = 0.0, psd = 0.0;
        for (int t = 0; t < 5; ++t) {
            SpectralField u = project_mean_zero(random_field(grid, rng));
            const double quad = inner_l2(u, feedback(u, 3.0, bump)).real();
            const double diss = control_dissipation(u, 3.0, bump);
            eq = std::max(eq, std::abs(quad - diss) / std::max(diss, 1e-300));
            psd = std::min(psd, quad);
        }
        push("feedback_quadratic_form", eq, 1e-10);
        push_min("feedback_psd", psd, -1e-12);
    }

    // -- linear evolution --
    {
        const DenseOperator L = assemble_generator(model, grid);
        const Mat s1 = propagator(L, 0.37).m;
        const Mat s2 = propagator(L, 0.58).m;
        const Mat s12 = propagator(L, 0.95).m;
        push("semigroup_property", rel_matrix_diff(s1 * s2, s12), 1e-10);
    }
    {
        SpectralField v0 = sine_mode(grid, 1, 1.0);
        Trajectory traj = evolve_linear(model, v0, opts.T, opts.dt);
        double mz = 0.0;
        for (int n = 0; n < traj.size(); ++n) mz = std::max(mz, std::abs(mean(traj[n])));
        push("mean_zero_preservation", mz, 1e-13);
        const LedgerReport led = energy_ledger(model, traj);
        push("energy_identity", std::abs(led.relative_residual), std::max(opts.tol, 1e-6));
        SpectralField one(grid);
        one.at(0) = cdouble(1.0, 0.0);
        const WeightedLedgerReport wled = weighted_ledger(model, traj, one, 0.0);
        push("weighted_reduces_to_energy", std::abs(wled.residual - led.residual),
             1e-10 * std::max(1.0, std::abs(led.residual)));
    }
    {
        // discrete duality: (u(T), v(T)) - (u(0), v(0)) = sum' dt (k_n, D^{3/2} G u_n)
        const int N = static_cast<int>(std::llround(opts.T / opts.dt));
        std::mt19937_64 r2(opts.seed + 17);
        SpectralField v0 = project_mean_zero(random_field(grid, r2));
        SpectralField phi = project_mean_zero(random_field(grid, r2));
        std::vector<SpectralField> k, F;
        for (int n = 0; n <= N; ++n) {
            k.push_back(project_mean_zero(random_field(grid, r2, 2.0, 0, 0.3)));
            F.push_back(apply_g_op(apply_multiplier(k.back(), Multiplier::Dr(1.5)), bump));
        }
        Trajectory v = evolve_linear(model, v0, F, opts.T, opts.dt);
        Trajectory u = adjoint_evolve(model, phi, opts.T, opts.dt);
        std::vector<double> obs(N + 1);
        for (int n = 0; n <= N; ++n)
            obs[n] = inner_l2(k[n], apply_multiplier(apply_g_op(u[n], bump), Multiplier::Dr(1.5)))
                         .real();
        const double lhs =
            inner_l2(u[N], v[N]).real() - inner_l2(u[0], v[0]).real();
        const double rhs = time_quad(obs, opts.dt);
        push("duality_identity", std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300), 1e-8);
    }

    // -- Gramian --
    {
        const Gramian gram = assemble_gramian(model, std::min(opts.T, 1.0), opts.dt, grid, 0.0,
                                              opts.threads);
        push("gramian_symmetry", gram.op.hermitian_defect(), 1e-10);
        push_min("gramian_positive", gram.lambda_min(), 0.0);
    }

    // -- conservation (nonlinear, fifth-order KdV coefficients) --
    {
        NonlinearModel nl(model);
        nl.c1 = -30.0;
        nl.c2 = 20.0;
        nl.c3 = 10.0;
        SpectralField u0 = sine_mode(grid, 1, 2e-3) + cosine_mode(grid, 2, 1e-3);
        u0.at(0) = cdouble(0.15, 0.0);  // nonzero volume
        Trajectory traj = evolve_nonlinear(nl, u0, std::min(opts.T, 1.0), opts.dt);
        double drift = 0.0;
        for (int n = 0; n < traj.size(); ++n)
            drift = std::max(drift, std::abs(mean(traj[n]) - mean(u0)));
        push("volume_conservation", drift, 1e-10);
    }

    return out;
}

}  // namespace kdv5
