// Independent reference computations the unit and acceptance tests check
// against. Everything here deliberately avoids the library's fast paths:
// direct O(N^2) DFT summation, adaptive quadrature, O(K^2) convolution sums,
// power iteration. Test-only code.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "kdv5/dense_operator.hpp"
#include "kdv5/field.hpp"

namespace oracle {

using kdv5::cdouble;

// uhat(k) = (1/N) sum_j u_j e^{-ik x_j} by direct summation
inline std::vector<cdouble> dft_direct(const std::vector<double>& samples, int kmax) {
    const int n = static_cast<int>(samples.size());
    std::vector<cdouble> out(2 * kmax + 1);
    for (int k = -kmax; k <= kmax; ++k) {
        cdouble acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) {
            const double ang = -k * (kdv5::kTwoPi * j / n);
            acc += samples[j] * cdouble(std::cos(ang), std::sin(ang));
        }
        out[k + kmax] = acc / static_cast<double>(n);
    }
    return out;
}

// trapezoid quadrature of the squared samples over one period
inline double quad_square(const std::vector<double>& samples) {
    double s = 0.0;
    for (double x : samples) s += x * x;
    return kdv5::kTwoPi * s / static_cast<double>(samples.size());
}

// adaptive Simpson on [a,b]
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 24) {
    const double c = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fc = f(c);
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double a_, double b_, double fa_, double fb_, double fc_, double whole, double tol_,
            int d) -> double {
        const double c_ = 0.5 * (a_ + b_);
        const double lc = 0.5 * (a_ + c_), rc = 0.5 * (c_ + b_);
        const double flc = f(lc), frc = f(rc);
        const double left = (c_ - a_) / 6.0 * (fa_ + 4.0 * flc + fc_);
        const double right = (b_ - c_) / 6.0 * (fc_ + 4.0 * frc + fb_);
        if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol_)
            return left + right + (left + right - whole) / 15.0;
        return rec(a_, c_, fa_, fc_, flc, left, 0.5 * tol_, d - 1) +
               rec(c_, b_, fc_, fb_, frc, right, 0.5 * tol_, d - 1);
    };
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    return rec(a, b, fa, fb, fc, whole, tol, depth);
}

// c0 u u' + c1 u^2 u' + c2 u' u'' + c3 u u''' by direct convolution sums over
// the retained modes; exact for bandlimited u.
inline kdv5::SpectralField convolution_nonlinearity(const kdv5::SpectralField& u, double c0,
                                                    double c1, double c2, double c3) {
    const int K = u.n_modes();
    const kdv5::PeriodicGrid& grid = u.grid();
    auto band = [&](int k) { return std::abs(k) <= K; };
    auto der = [&](int k, int j) {
        cdouble ik(0.0, k);
        cdouble p(1.0, 0.0);
        for (int i = 0; i < j; ++i) p *= ik;
        return p;
    };
    kdv5::SpectralField out(grid);
    // quadratic terms: sum over k = p + q
    for (int k = -K; k <= K; ++k) {
        cdouble acc(0.0, 0.0);
        for (int p = -K; p <= K; ++p) {
            const int q = k - p;
            if (!band(q)) continue;
            const cdouble up = u.at(p), uq = u.at(q);
            acc += c0 * up * (der(q, 1) * uq);
            acc += c2 * (der(p, 1) * up) * (der(q, 2) * uq);
            acc += c3 * up * (der(q, 3) * uq);
        }
        out.at(k) = acc;
    }
    // cubic term c1 u^2 u': k = p + q + r
    if (c1 != 0.0) {
        for (int k = -K; k <= K; ++k) {
            cdouble acc(0.0, 0.0);
            for (int p = -K; p <= K; ++p)
                for (int q = -K; q <= K; ++q) {
                    const int r = k - p - q;
                    if (!band(r)) continue;
                    acc += c1 * u.at(p) * u.at(q) * (der(r, 1) * u.at(r));
                }
            out.at(k) += acc;
        }
    }
    return out;
}

// largest singular value of a complex matrix by power iteration on A^H A
inline double power_sigma_max(const kdv5::Mat& A, int iters = 300) {
    kdv5::Vec v = kdv5::Vec::Ones(A.cols());
    v.normalize();
    double s = 0.0;
    for (int i = 0; i < iters; ++i) {
        kdv5::Vec w = A.adjoint() * (A * v);
        s = std::sqrt(w.norm());
        if (w.norm() == 0.0) return 0.0;
        v = w.normalized();
    }
    return s;
}

}  // namespace oracle
