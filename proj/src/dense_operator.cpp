#include "kdv5/dense_operator.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <thread>

#include "kdv5/control_ops.hpp"

namespace kdv5 {

namespace {

void parallel_columns(int n, int threads, const std::function<void(int)>& work) {
    if (threads <= 1) {
        for (int j = 0; j < n; ++j) work(j);
        return;
    }
    std::vector<std::thread> pool;
    const int used = std::min(threads, n);
    for (int t = 0; t < used; ++t) {
        pool.emplace_back([&, t] {
            for (int j = t; j < n; j += used) work(j);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

double DenseOperator::hermitian_defect() const {
    const double scale = m.norm();
    if (scale == 0.0) return 0.0;
    return (m - m.adjoint()).norm() / scale;
}

Vec pack(const SpectralField& f) {
    const int K = f.n_modes();
    Vec v(2 * K);
    for (int k = -K; k <= K; ++k) {
        if (k == 0) continue;
        v[mode_to_index(k, K)] = f.at(k);
    }
    return v;
}

SpectralField unpack(const Vec& v, const PeriodicGrid& grid) {
    const int K = grid.n_modes();
    if (v.size() != 2 * K) throw DimensionError("unpack: vector length != 2K");
    SpectralField f(grid);
    for (int i = 0; i < 2 * K; ++i) f.at(index_to_mode(i, K)) = v[i];
    return f;
}

double sobolev_norm(const Vec& v, const PeriodicGrid& grid, double s) {
    const int K = grid.n_modes();
    double sum = 0.0;
    for (int i = 0; i < 2 * K; ++i) {
        const double k = index_to_mode(i, K);
        sum += std::pow(1.0 + k * k, s) * std::norm(v[i]);
    }
    return std::sqrt(kTwoPi * sum);
}

Vec symbol_diagonal(const PeriodicGrid& grid, const std::function<cdouble(int)>& sym) {
    const int K = grid.n_modes();
    Vec d(2 * K);
    for (int i = 0; i < 2 * K; ++i) d[i] = sym(index_to_mode(i, K));
    return d;
}

DenseOperator assemble_matrix(const std::function<SpectralField(const SpectralField&)>& op,
                              const PeriodicGrid& grid, int threads) {
    const int K = grid.n_modes();
    Mat m(2 * K, 2 * K);
    parallel_columns(2 * K, threads, [&](int j) {
        const int k = index_to_mode(j, K);
        // e^{ikx} = cos(kx) + i sin(kx); op acts on real fields. For any k,
        // sin(kx) has coefficients -i/2 at k and +i/2 at -k.
        SpectralField cosk(grid), sink(grid);
        cosk.at(k) = cdouble(0.5, 0.0);
        cosk.at(-k) = cdouble(0.5, 0.0);
        sink.at(k) = cdouble(0.0, -0.5);
        sink.at(-k) = cdouble(0.0, 0.5);
        const Vec re = pack(op(cosk));
        const Vec im = pack(op(sink));
        m.col(j) = re + cdouble(0.0, 1.0) * im;
    });
    return DenseOperator(grid, std::move(m));
}

DenseOperator propagator(const DenseOperator& L, double t) {
    if (t < 0.0) throw DomainError("propagator: t must be nonnegative");
    if (t == 0.0) return DenseOperator(L.grid, Mat::Identity(L.dim(), L.dim()));
    // strictly diagonal generators (feedback off) exponentiate entrywise;
    // avoids the eps*|t lambda| phase error of scaling-and-squaring
    bool diagonal = true;
    for (int i = 0; i < L.dim() && diagonal; ++i)
        for (int j = 0; j < L.dim(); ++j)
            if (i != j && L.m(i, j) != cdouble(0.0, 0.0)) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        Mat S = Mat::Zero(L.dim(), L.dim());
        for (int i = 0; i < L.dim(); ++i) S(i, i) = std::exp(-t * L.m(i, i));
        return DenseOperator(L.grid, std::move(S));
    }
    Mat a = (-t) * L.m;
    return DenseOperator(L.grid, a.exp());
}

Eigen::VectorXcd eigenvalues(const DenseOperator& L) {
    Eigen::ComplexEigenSolver<Mat> es(L.m, /*computeEigenvectors=*/false);
    return es.eigenvalues();
}

double spectral_abscissa(const DenseOperator& L) {
    const auto ev = eigenvalues(L);
    double a = ev[0].real();
    for (int i = 1; i < ev.size(); ++i) a = std::min(a, ev[i].real());
    return a;
}

SpectralField slowest_mode(const DenseOperator& L) {
    Eigen::ComplexEigenSolver<Mat> es(L.m, /*computeEigenvectors=*/true);
    int best = 0;
    for (int i = 1; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i].real() < es.eigenvalues()[best].real()) best = i;
    SpectralField f = unpack(es.eigenvectors().col(best), L.grid);
    // real part of the eigenfield, symmetrized and normalized in L^2
    SpectralField g(L.grid);
    const int K = L.grid.n_modes();
    for (int k = -K; k <= K; ++k) g.at(k) = 0.5 * (f.at(k) + std::conj(f.at(-k)));
    const double n = sobolev_norm(g, 0.0);
    if (n > 0.0) g *= 1.0 / n;
    return g;
}

DenseOperator remainder_operator(double s, const ControlProfile& p, const PeriodicGrid& grid,
                                 double gamma) {
    const Mat G = assemble_matrix([&](const SpectralField& f) { return apply_g_op(f, p); }, grid).m;
    const auto dr = [&](double r) {
        return symbol_diagonal(grid, [r](int k) { return Multiplier::Dr(r).symbol(k); });
    };
    const Vec Ds = dr(s), Dms = dr(-s), Dg = dr(gamma);
    // [D^s; G] = D^s G - G D^s
    const Mat C = Ds.asDiagonal() * G - G * Ds.asDiagonal();
    Mat E = G * Dg.asDiagonal() * C * Dms.asDiagonal() +
            C * Dg.asDiagonal() * G * Dms.asDiagonal();
    return DenseOperator(grid, std::move(E));
}

}  // namespace kdv5
