#include "kdv5/hum.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <thread>

#include "kdv5/control_ops.hpp"

namespace kdv5 {

namespace {

int step_count(double T, double dt) {
    const double r = T / dt;
    const long long n = std::llround(r);
    if (n < 1 || std::abs(r - static_cast<double>(n)) > 1e-8 * std::max(1.0, r))
        throw DomainError("hum: dt must divide T");
    return static_cast<int>(n);
}

struct HumWorkspace {
    PeriodicGrid grid;
    int N;
    double dt;
    Mat S;      // exp(-dt L)
    Mat Sadj;   // S^H
    Mat M;      // input map G D^{3/2}
    Mat Madj;   // observation map D^{3/2} G
    Vec w2s;    // control-metric weight D^{-2s} (ones for the L^2 pairing)
};

HumWorkspace make_workspace(const LinearModel& model, double T, double dt,
                            const PeriodicGrid& grid, double metric_s) {
    HumWorkspace ws{grid, step_count(T, dt), dt, {}, {}, {}, {}, {}};
    const DenseOperator L = assemble_generator(model, grid);
    ws.S = propagator(L, dt).m;
    ws.Sadj = ws.S.adjoint();
    const Mat G =
        assemble_matrix([&](const SpectralField& f) { return apply_g_op(f, model.profile); }, grid)
            .m;
    const Vec d32 =
        symbol_diagonal(grid, [](int k) { return Multiplier::Dr(1.5).symbol(k); });
    ws.M = G * d32.asDiagonal();
    ws.Madj = ws.M.adjoint();
    ws.w2s = metric_s == 0.0
                 ? Vec::Ones(ws.M.rows())
                 : symbol_diagonal(grid, [metric_s](int k) {
                       return Multiplier::Dr(-2.0 * metric_s).symbol(k);
                   });
    return ws;
}

// k_n = D^{-2s} M^H (S^H)^{N-n} phi for n = 0..N
std::vector<Vec> adjoint_signal(const HumWorkspace& ws, const Vec& phi) {
    std::vector<Vec> k(ws.N + 1);
    Vec u = phi;
    for (int n = ws.N; n >= 0; --n) {
        k[n] = ws.w2s.cwiseProduct(ws.Madj * u);
        if (n > 0) u = ws.Sadj * u;
    }
    return k;
}

// trapezoid Duhamel endpoint of the forcing M k_n from zero data
Vec input_endpoint(const HumWorkspace& ws, const std::vector<Vec>& k) {
    Vec z = Vec::Zero(ws.M.rows());
    for (int n = 0; n < ws.N; ++n)
        z = ws.S * (z + (0.5 * ws.dt) * (ws.M * k[n])) + (0.5 * ws.dt) * (ws.M * k[n + 1]);
    return z;
}

Mat assemble_gramian_matrix(const HumWorkspace& ws, int threads) {
    const int dim = static_cast<int>(ws.M.rows());
    Mat Lam(dim, dim);
    auto column = [&](int j) {
        Vec e = Vec::Zero(dim);
        e[j] = cdouble(1.0, 0.0);
        Lam.col(j) = input_endpoint(ws, adjoint_signal(ws, e));
    };
    if (threads <= 1) {
        for (int j = 0; j < dim; ++j) column(j);
    } else {
        std::vector<std::thread> pool;
        const int used = std::min(threads, dim);
        for (int t = 0; t < used; ++t)
            pool.emplace_back([&, t] {
                for (int j = t; j < dim; j += used) column(j);
            });
        for (auto& th : pool) th.join();
    }
    return Lam;
}

Vec stepped_endpoint(const HumWorkspace& ws, const Vec& v0) {
    Vec v = v0;
    for (int n = 0; n < ws.N; ++n) v = ws.S * v;
    return v;
}

// LDLT with two rounds of iterative refinement; keeps the endpoint residual
// at roundoff even for poorly conditioned Gramians.
Vec solve_refined(const Eigen::LDLT<Mat>& ldlt, const Mat& A, const Vec& b) {
    Vec x = ldlt.solve(b);
    for (int r = 0; r < 2; ++r) x += ldlt.solve(b - A * x);
    return x;
}

SpectralField unpack_real(const Vec& v, const PeriodicGrid& grid) {
    SpectralField f = unpack(v, grid);
    f.symmetrize();
    return f;
}

struct CgOutcome {
    int iterations = 0;
    double lambda_min_estimate = 0.0;
};

// Matrix-free preconditioned CG for K beyond the dense limit. The
// preconditioner is the uniform-profile closed form T |k|^3 / (4 pi^2)
// (metric-weighted), a good diagonal surrogate for localized profiles.
CgOutcome gramian_cg(const HumWorkspace& ws, double T, const Vec& b, Vec& x, int max_iter,
                     double tol) {
    const int dim = static_cast<int>(b.size());
    const int K = ws.grid.n_modes();
    Vec precond(dim);
    for (int i = 0; i < dim; ++i) {
        const double k = std::abs(static_cast<double>(index_to_mode(i, K)));
        const double base = T * std::pow(k, 3.0) / (4.0 * M_PI * M_PI);
        precond[i] = cdouble(1.0 / std::max(base * std::abs(ws.w2s[i]), 1e-300), 0.0);
    }
    auto apply = [&](const Vec& v) { return input_endpoint(ws, adjoint_signal(ws, v)); };
    x = Vec::Zero(dim);
    Vec r = b;
    Vec z = precond.cwiseProduct(r);
    Vec p = z;
    double rz = r.dot(z).real();
    const double bnorm = b.norm();
    CgOutcome out;
    std::vector<double> alphas, betas;
    for (int it = 0; it < max_iter; ++it) {
        const Vec Ap = apply(p);
        const double pAp = p.dot(Ap).real();
        if (pAp <= 0.0) throw IllConditionedError("gramian_cg: lost positive definiteness");
        const double alpha = rz / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        out.iterations = it + 1;
        alphas.push_back(alpha);
        if (r.norm() <= tol * bnorm) break;
        z = precond.cwiseProduct(r);
        const double rz_new = r.dot(z).real();
        const double beta = rz_new / rz;
        betas.push_back(beta);
        rz = rz_new;
        p = z + beta * p;
    }
    // smallest Ritz value of the CG (Lanczos) tridiagonal, as a lambda_min
    // estimate for diagnostics
    const int m = static_cast<int>(alphas.size());
    if (m > 0) {
        Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            double d = 1.0 / alphas[i];
            if (i > 0) d += betas[i - 1] / alphas[i - 1];
            Tm(i, i) = d;
            if (i + 1 < m) {
                const double off = std::sqrt(std::max(betas[i], 0.0)) / alphas[i];
                Tm(i, i + 1) = off;
                Tm(i + 1, i) = off;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Tm);
        out.lambda_min_estimate = es.eigenvalues()[0];
    }
    if (out.iterations >= max_iter)
        throw IllConditionedError(
            "solve_linear_control: CG did not converge in " + std::to_string(max_iter) +
            " iterations (lambda_min estimate " + std::to_string(out.lambda_min_estimate) + ")");
    return out;
}

}  // namespace

double ControlSignal::l2hs_norm(double s) const {
    std::vector<double> sq(values.size());
    for (size_t i = 0; i < values.size(); ++i) {
        const double n = kdv5::sobolev_norm(values[i], s);
        sq[i] = n * n;
    }
    return std::sqrt(time_quad(sq, dt));
}

double Gramian::lambda_min() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(op.m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

double Gramian::lambda_max() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(op.m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[es.eigenvalues().size() - 1];
}

ControlSignal control_from_adjoint(const SpectralField& phi, const LinearModel& model, double T,
                                   double dt) {
    const Trajectory adj = adjoint_evolve(model, phi, T, dt);
    ControlSignal k(phi.grid(), dt);
    k.values.reserve(adj.size());
    for (int n = 0; n < adj.size(); ++n)
        k.values.push_back(
            apply_multiplier(apply_g_op(adj[n], model.profile), Multiplier::Dr(1.5)));
    return k;
}

Gramian assemble_gramian(const LinearModel& model, double T, double dt, const PeriodicGrid& grid,
                         double metric_s, int threads) {
    HumWorkspace ws = make_workspace(model, T, dt, grid, metric_s);
    Mat Lam = assemble_gramian_matrix(ws, threads);
    return Gramian{DenseOperator(grid, std::move(Lam)), T, dt, metric_s};
}

LinearControlResult solve_linear_control(const LinearModel& model, const SpectralField& v0,
                                         const SpectralField& vT, double T, double dt, double s,
                                         const LinearControlOptions& opts) {
    const PeriodicGrid& grid = v0.grid();
    if (vT.grid() != grid) throw DimensionError("solve_linear_control: grid mismatch");
    HumWorkspace ws = make_workspace(model, T, dt, grid, opts.metric_s);
    const Vec b = pack(vT) - stepped_endpoint(ws, pack(v0));

    Vec phi;
    int iterations = 0;
    double lambda_min_est = 0.0;
    if (static_cast<int>(b.size()) <= opts.dense_dim_limit) {
        const Mat Lam = assemble_gramian_matrix(ws, opts.threads);
        Eigen::LDLT<Mat> ldlt(Lam);
        if (ldlt.info() != Eigen::Success)
            throw IllConditionedError("solve_linear_control: Gramian factorization failed");
        phi = solve_refined(ldlt, Lam, b);
        Eigen::SelfAdjointEigenSolver<Mat> es(Lam, Eigen::EigenvaluesOnly);
        lambda_min_est = es.eigenvalues()[0];
    } else {
        const CgOutcome cg = gramian_cg(ws, T, b, phi, opts.cg_max_iterations, opts.cg_tolerance);
        iterations = cg.iterations;
        lambda_min_est = cg.lambda_min_estimate;
    }

    const std::vector<Vec> kvec = adjoint_signal(ws, phi);
    ControlSignal signal(grid, dt);
    signal.values.reserve(ws.N + 1);
    for (const auto& kn : kvec) signal.values.push_back(unpack_real(kn, grid));

    // resimulate through the forward trapezoid stepper
    Trajectory resim(grid, dt);
    Vec v = pack(v0);
    resim.push_back(unpack_real(v, grid));
    for (int n = 0; n < ws.N; ++n) {
        v = ws.S * (v + (0.5 * dt) * (ws.M * kvec[n])) + (0.5 * dt) * (ws.M * kvec[n + 1]);
        resim.push_back(unpack_real(v, grid));
    }
    const double err =
        sobolev_norm(resim[ws.N] - vT, s) / std::max(sobolev_norm(vT, s), 1e-14);
    return LinearControlResult{std::move(signal), err, iterations, lambda_min_est,
                               std::move(resim)};
}

NonlinearControlResult solve_nonlinear_control(const NonlinearModel& model,
                                               const SpectralField& u0, const SpectralField& uT,
                                               double T, double dt, double s, double tol,
                                               const NonlinearControlOptions& opts) {
    model.validate();
    const PeriodicGrid& grid = u0.grid();
    if (uT.grid() != grid) throw DimensionError("solve_nonlinear_control: grid mismatch");
    if (std::abs(mean(u0)) > 1e-12 || std::abs(mean(uT)) > 1e-12)
        throw DomainError("solve_nonlinear_control: data must have mean zero "
                          "(reduce by the mean substitution first)");
    const double smoothing = model.linear.smoothing();

    // HUM in the H^s control metric: Lambda maps H^s data to controls in
    // L^2(0,T;H^s), as the nonlinear construction requires.
    HumWorkspace ws = make_workspace(model.linear, T, dt, grid, s);
    const Mat Lam = assemble_gramian_matrix(ws, opts.threads);
    Eigen::LDLT<Mat> ldlt(Lam);
    if (ldlt.info() != Eigen::Success)
        throw IllConditionedError("solve_nonlinear_control: Gramian factorization failed");

    NonlinearControlResult res(grid, dt);
    res.small_data_warning = sobolev_norm(u0, s) + sobolev_norm(uT, s) > opts.delta;

    const Vec Su0 = stepped_endpoint(ws, pack(u0));
    const Vec target = pack(uT);
    const int N = ws.N;

    // v^0(t) = S(t) u0
    std::vector<Vec> v(N + 1);
    v[0] = pack(u0);
    for (int n = 0; n < N; ++n) v[n + 1] = ws.S * v[n];

    auto zdist = [&](const std::vector<Vec>& a, const std::vector<Vec>& b2) {
        double sup = 0.0;
        std::vector<double> sq(N + 1);
        for (int i = 0; i <= N; ++i) {
            const Vec d = a[i] - b2[i];
            sup = std::max(sup, sobolev_norm(d, grid, s));
            const double hi = sobolev_norm(d, grid, s + smoothing);
            sq[i] = hi * hi;
        }
        return sup + std::sqrt(time_quad(sq, dt));
    };

    std::vector<Vec> kvec;
    int growing = 0;
    bool converged = false;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        std::vector<Vec> P(N + 1);
        for (int n = 0; n <= N; ++n)
            P[n] = pack(nonlinearity(unpack(v[n], grid), model));
        // omega(v)(T) = trapezoid Duhamel endpoint of +P(v) from zero data
        Vec omega = Vec::Zero(2 * grid.n_modes());
        for (int n = 0; n < N; ++n)
            omega = ws.S * (omega + (0.5 * dt) * P[n]) + (0.5 * dt) * P[n + 1];
        const Vec b = target - Su0 + omega;
        const Vec phi = solve_refined(ldlt, Lam, b);
        kvec = adjoint_signal(ws, phi);

        std::vector<Vec> next(N + 1);
        next[0] = v[0];
        Vec z = v[0];
        for (int n = 0; n < N; ++n) {
            const Vec Fn = ws.M * kvec[n] - P[n];
            const Vec Fn1 = ws.M * kvec[n + 1] - P[n + 1];
            z = ws.S * (z + (0.5 * dt) * Fn) + (0.5 * dt) * Fn1;
            next[n + 1] = z;
        }
        if (opts.relaxation != 1.0) {
            for (int n = 0; n <= N; ++n)
                next[n] = v[n] + opts.relaxation * (next[n] - v[n]);
        }
        const double d = zdist(next, v);
        if (!res.iterate_distances.empty())
            growing = d >= res.iterate_distances.back() ? growing + 1 : 0;
        res.iterate_distances.push_back(d);
        v = std::move(next);
        res.iterations = it;
        if (d < tol) {
            converged = true;
            break;
        }
        if (growing >= 3)
            throw ConvergenceError(
                "solve_nonlinear_control: fixed point diverging (small-data violation)");
    }
    if (!converged)
        throw ConvergenceError("solve_nonlinear_control: no fixed point within " +
                               std::to_string(opts.max_iterations) + " iterations");

    res.signal.values.reserve(N + 1);
    for (const auto& kn : kvec) res.signal.values.push_back(unpack_real(kn, grid));

    // independent nonlinear resimulation under G D^{3/2} k
    res.controlled = evolve_nonlinear(model, u0, res.signal.values, T, dt);
    res.endpoint_error = sobolev_norm(res.controlled[N] - uT, s);

    // physical control h = -D^3 G u + D^{3/2} k along the controlled path
    res.physical_control.reserve(N + 1);
    const Multiplier d3 = Multiplier::Dr(3.0), d32 = Multiplier::Dr(1.5);
    for (int n = 0; n <= N; ++n) {
        SpectralField h = apply_multiplier(res.signal.values[n], d32) -
                          apply_multiplier(apply_g_op(res.controlled[n], model.linear.profile), d3);
        res.physical_control.push_back(std::move(h));
    }
    return res;
}

ObservabilityReport observability_report(const LinearModel& model, double T, double dt,
                                         const PeriodicGrid& grid, int threads) {
    const Gramian gram = assemble_gramian(model, T, dt, grid, 0.0, threads);
    Eigen::SelfAdjointEigenSolver<Mat> es(gram.op.m);
    ObservabilityReport rep;
    const auto& ev = es.eigenvalues();
    rep.lambda_min = ev[0];
    rep.lambda_max = ev[ev.size() - 1];
    rep.condition = rep.lambda_min > 0.0 ? rep.lambda_max / rep.lambda_min
                                         : std::numeric_limits<double>::infinity();
    rep.c_hat = rep.lambda_min > 0.0 ? 1.0 / rep.lambda_min
                                     : std::numeric_limits<double>::infinity();
    rep.symmetry_defect = gram.op.hermitian_defect();
    rep.spectrum.assign(ev.data(), ev.data() + ev.size());
    const Vec worst = es.eigenvectors().col(0);
    int arg = 0;
    for (int i = 1; i < worst.size(); ++i)
        if (std::abs(worst[i]) > std::abs(worst[arg])) arg = i;
    rep.worst_mode = std::abs(index_to_mode(arg, grid.n_modes()));
    return rep;
}

}  // namespace kdv5
