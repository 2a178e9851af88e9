#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kdv5/multiplier.hpp"
#include "kdv5/random_field.hpp"
#include "kdv5/trajectory.hpp"
#include "oracles.hpp"

using namespace kdv5;

namespace {

SpectralField cos_mode(const PeriodicGrid& g, int k, double amp = 1.0) {
    SpectralField f(g);
    f.at(k) = cdouble(0.5 * amp, 0.0);
    f.at(-k) = cdouble(0.5 * amp, 0.0);
    return f;
}

SpectralField sin_mode(const PeriodicGrid& g, int k, double amp = 1.0) {
    SpectralField f(g);
    f.at(k) = cdouble(0.0, -0.5 * amp);
    f.at(-k) = cdouble(0.0, 0.5 * amp);
    return f;
}

double field_diff(const SpectralField& a, const SpectralField& b) {
    return sobolev_norm(a - b, 0.0);
}

}  // namespace

TEST_CASE("grid invariants") {
    PeriodicGrid g(16);
    CHECK(g.n_points() == 128);  // 2*(2*16+1)=66 -> 128
    CHECK(g.n_points() >= 2 * g.n_modes() + 1);
    CHECK(g.point(0) == 0.0);
    CHECK(g.point(1) == doctest::Approx(kTwoPi / g.n_points()));
    CHECK_THROWS_AS(PeriodicGrid(0), DomainError);
    CHECK_THROWS_AS(PeriodicGrid(8, 10), DomainError);
}

TEST_CASE("to_spectral: single mode and zero") {
    PeriodicGrid g(8);
    std::vector<double> samples(g.n_points());
    for (int j = 0; j < g.n_points(); ++j) samples[j] = std::cos(3.0 * g.point(j));
    SpectralField f = to_spectral(samples, g);
    CHECK(std::abs(f.at(3) - cdouble(0.5, 0.0)) < 1e-13);
    CHECK(std::abs(f.at(-3) - cdouble(0.5, 0.0)) < 1e-13);
    for (int k = -8; k <= 8; ++k)
        if (std::abs(k) != 3) CHECK(std::abs(f.at(k)) < 1e-13);

    std::vector<double> zeros(g.n_points(), 0.0);
    CHECK(sobolev_norm(to_spectral(zeros, g), 0.0) == 0.0);

    std::vector<double> bad(3, 0.0);
    CHECK_THROWS_AS(to_spectral(bad, g), DimensionError);
}

TEST_CASE("round trip against direct DFT oracle") {
    PeriodicGrid g(10, 64);
    std::mt19937_64 rng(7);
    SpectralField u = random_field(g, rng, 1.0);
    const auto samples = to_physical(u);
    // oracle: direct DFT of the samples reproduces the coefficients
    const auto oc = oracle::dft_direct(samples, g.n_modes());
    for (int k = -10; k <= 10; ++k)
        CHECK(std::abs(oc[k + 10] - u.at(k)) < 1e-12);
    // and the physical->spectral->physical loop reproduces the samples
    const auto back = to_physical(to_spectral(samples, g));
    double worst = 0.0;
    for (int j = 0; j < g.n_points(); ++j) worst = std::max(worst, std::abs(back[j] - samples[j]));
    CHECK(worst < 1e-12);
}

TEST_CASE("multiplier examples") {
    PeriodicGrid g(8);
    // Dr(3/2) on e^{i2x}+e^{-i2x}
    SpectralField f = cos_mode(g, 2, 2.0);
    SpectralField r = apply_multiplier(f, Multiplier::Dr(1.5));
    CHECK(std::abs(r.at(2) - std::pow(2.0, 1.5) * f.at(2)) < 1e-13);
    CHECK(std::abs(r.at(-2) - std::pow(2.0, 1.5) * f.at(-2)) < 1e-13);

    // Dr on a constant is the identity (k = 0 branch)
    SpectralField c(g);
    c.at(0) = cdouble(2.5, 0.0);
    CHECK(field_diff(apply_multiplier(c, Multiplier::Dr(0.7)), c) < 1e-14);

    // Hilbert turns cos(3x) into sin(3x)
    CHECK(field_diff(apply_multiplier(cos_mode(g, 3), Multiplier::Hilbert()), sin_mode(g, 3)) <
          1e-13);

    // realness preserved
    std::mt19937_64 rng(3);
    SpectralField u = random_field(g, rng);
    for (auto m : {Multiplier::Dr(0.5), Multiplier::Derivative(2), Multiplier::Hilbert(),
                   Multiplier::Mollifier(1e-3)})
        CHECK(apply_multiplier(u, m).conjugate_symmetry_defect() < 1e-13);

    CHECK_THROWS_AS(apply_multiplier(u, Multiplier::Custom({cdouble(1.0, 0.0)})), DimensionError);
}

TEST_CASE("sobolev norm closed forms") {
    PeriodicGrid g(8);
    for (double s : {-1.0, 0.0, 1.5, 2.5}) {
        // complex single mode e^{i3x}
        SpectralField e3(g);
        e3.at(3) = cdouble(1.0, 0.0);
        CHECK(sobolev_norm(e3, s) ==
              doctest::Approx(std::sqrt(kTwoPi) * std::pow(10.0, s / 2.0)).epsilon(1e-12));
        // real field cos(3x)
        CHECK(sobolev_norm(cos_mode(g, 3), s) ==
              doctest::Approx(std::sqrt(M_PI) * std::pow(10.0, s / 2.0)).epsilon(1e-12));
        // constant
        SpectralField c(g);
        c.at(0) = cdouble(-4.0, 0.0);
        CHECK(sobolev_norm(c, s) == doctest::Approx(std::sqrt(kTwoPi) * 4.0).epsilon(1e-12));
    }
}

TEST_CASE("Parseval against physical quadrature") {
    PeriodicGrid g(16);
    std::mt19937_64 rng(11);
    SpectralField u = random_field(g, rng, 1.3);
    const double n2 = std::pow(sobolev_norm(u, 0.0), 2);
    const double q = oracle::quad_square(to_physical(u));
    CHECK(std::abs(n2 - q) / n2 < 1e-10);
}

TEST_CASE("mean and projection") {
    PeriodicGrid g(8);
    SpectralField c(g);
    c.at(0) = cdouble(5.0, 0.0);
    CHECK(mean(c) == 5.0);
    CHECK(sobolev_norm(project_mean_zero(c), 0.0) == 0.0);

    SpectralField s1 = sin_mode(g, 1);
    CHECK(mean(s1) == 0.0);
    CHECK(field_diff(project_mean_zero(s1), s1) == 0.0);
}

TEST_CASE("zst norms") {
    PeriodicGrid g(8);
    const double dt = 0.25, T = 1.0;
    SpectralField u = cos_mode(g, 2);

    // constant-in-time field: ||u||_s + sqrt(T) ||u||_{s+3/2}
    Trajectory traj(g, dt);
    for (int n = 0; n <= 4; ++n) traj.push_back(u);
    const double s = 1.0;
    CHECK(zst_norm(traj, s) ==
          doctest::Approx(sobolev_norm(u, s) + std::sqrt(T) * sobolev_norm(u, s + 1.5))
              .epsilon(1e-12));

    Trajectory z(g, dt);
    for (int n = 0; n <= 4; ++n) z.push_back(SpectralField(g));
    CHECK(zst_norm(z, s) == 0.0);

    // two-step trajectory of distinct single modes, hand-computed
    Trajectory two(g, 0.5);
    two.push_back(cos_mode(g, 1));
    two.push_back(sin_mode(g, 2));
    const double n1 = std::sqrt(M_PI * std::pow(2.0, s));
    const double n2 = std::sqrt(M_PI * std::pow(5.0, s));
    const double h1 = std::sqrt(M_PI * std::pow(2.0, s + 1.5));
    const double h2 = std::sqrt(M_PI * std::pow(5.0, s + 1.5));
    const double expect = std::max(n1, n2) + std::sqrt(0.5 * 0.5 * (h1 * h1 + h2 * h2));
    CHECK(zst_norm(two, s) == doctest::Approx(expect).epsilon(1e-12));

    // order-l variant changes the smoothing exponent
    CHECK(zst_norm(traj, s, 2.5) ==
          doctest::Approx(sobolev_norm(u, s) + std::sqrt(T) * sobolev_norm(u, s + 2.5))
              .epsilon(1e-12));
}

TEST_CASE("multiplier composition property") {
    PeriodicGrid g(16);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 10; ++t) {
        SpectralField u = project_mean_zero(random_field(g, rng));
        const double a = -1.0 + 0.2 * t, b = 0.75;
        SpectralField lhs =
            apply_multiplier(apply_multiplier(u, Multiplier::Dr(b)), Multiplier::Dr(a));
        SpectralField rhs = apply_multiplier(u, Multiplier::Dr(a + b));
        CHECK(field_diff(lhs, rhs) / sobolev_norm(rhs, 0.0) < 1e-12);
    }
}

TEST_CASE("Hilbert transform properties on mean-zero fields") {
    PeriodicGrid g(16);
    std::mt19937_64 rng(29);
    for (int t = 0; t < 10; ++t) {
        SpectralField u = project_mean_zero(random_field(g, rng));
        SpectralField hu = apply_multiplier(u, Multiplier::Hilbert());
        CHECK(field_diff(apply_multiplier(hu, Multiplier::Hilbert()), -1.0 * u) <
              1e-12 * sobolev_norm(u, 0.0));
        CHECK(sobolev_norm(hu, 0.0) == doctest::Approx(sobolev_norm(u, 0.0)).epsilon(1e-13));
        // D = H d/dx
        CHECK(field_diff(apply_multiplier(apply_multiplier(u, Multiplier::Derivative(1)),
                                          Multiplier::Hilbert()),
                         apply_multiplier(u, Multiplier::Dr(1.0))) <
              1e-12 * sobolev_norm(u, 1.0));
    }
}

TEST_CASE("mollifier estimate constants bounded under eps refinement") {
    PeriodicGrid g(32);
    std::mt19937_64 rng(31);
    SpectralField u = random_field(g, rng, 1.5);
    const double s = 1.0;
    for (double gamma : {1.0, 3.5}) {
        double prev = 1e300;
        for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            const double ratio =
                std::pow(eps, gamma / 10.0) *
                sobolev_norm(apply_multiplier(u, Multiplier::Mollifier(eps)), s + gamma) /
                sobolev_norm(u, s);
            CHECK(ratio < 1.0);          // bounded
            CHECK(ratio < prev * 1.01);  // no growth under refinement
            prev = ratio;
        }
    }
}

TEST_CASE("non-power-of-two grids use the direct transform path") {
    PeriodicGrid g(10, 37);  // odd point count, no radix-2 path
    std::mt19937_64 rng(83);
    SpectralField u = random_field(g, rng, 1.0);
    const auto samples = to_physical(u);
    const auto back = to_spectral(samples, g);
    for (int k = -10; k <= 10; ++k) CHECK(std::abs(back.at(k) - u.at(k)) < 1e-12);
    CHECK(std::abs(std::pow(sobolev_norm(u, 0.0), 2) - oracle::quad_square(samples)) <
          1e-10 * std::pow(sobolev_norm(u, 0.0), 2));
}
