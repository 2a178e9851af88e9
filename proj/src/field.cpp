#include "kdv5/field.hpp"

#include <algorithm>
#include <cmath>

namespace kdv5 {

namespace {

void check_same_grid(const PeriodicGrid& a, const PeriodicGrid& b, const char* what) {
    if (a != b) throw DimensionError(std::string(what) + ": grid mismatch");
}

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    check_same_grid(grid_, o.grid_, "SpectralField::operator+=");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    check_same_grid(grid_, o.grid_, "SpectralField::operator-=");
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    for (auto& z : c_) z *= a;
    return *this;
}

double SpectralField::conjugate_symmetry_defect() const {
    double defect = 0.0, scale = 0.0;
    const int K = grid_.n_modes();
    for (int k = 0; k <= K; ++k) {
        defect = std::max(defect, std::abs(at(-k) - std::conj(at(k))));
        scale = std::max(scale, std::abs(at(k)));
    }
    return scale > 0.0 ? defect / scale : 0.0;
}

void SpectralField::symmetrize() {
    const int K = grid_.n_modes();
    at(0) = cdouble(at(0).real(), 0.0);
    for (int k = 1; k <= K; ++k) {
        const cdouble avg = 0.5 * (at(k) + std::conj(at(-k)));
        at(k) = avg;
        at(-k) = std::conj(avg);
    }
}

SpectralField to_spectral(std::span<const double> samples, const PeriodicGrid& grid) {
    const int N = grid.n_points();
    if (static_cast<int>(samples.size()) != N)
        throw DimensionError("to_spectral: sample count != n_points");
    std::vector<cdouble> buf(samples.begin(), samples.end());
    detail::dft(buf, -1);
    SpectralField f(grid);
    const int K = grid.n_modes();
    for (int k = -K; k <= K; ++k) f.at(k) = buf[(k % N + N) % N] / static_cast<double>(N);
    return f;
}

std::vector<double> to_physical(const SpectralField& field) {
    const int N = field.grid().n_points();
    const int K = field.n_modes();
    std::vector<cdouble> buf(N, cdouble(0.0, 0.0));
    for (int k = -K; k <= K; ++k) buf[(k % N + N) % N] += field.at(k);
    detail::dft(buf, +1);
    std::vector<double> out(N);
    for (int j = 0; j < N; ++j) out[j] = buf[j].real();
    return out;
}

double mean(const SpectralField& field) { return field.at(0).real(); }

SpectralField project_mean_zero(const SpectralField& field) {
    SpectralField f = field;
    f.at(0) = cdouble(0.0, 0.0);
    return f;
}

double sobolev_norm(const SpectralField& field, double s) {
    double sum = 0.0;
    const int K = field.n_modes();
    for (int k = -K; k <= K; ++k) {
        const double w = std::pow(1.0 + static_cast<double>(k) * k, s);
        sum += w * std::norm(field.at(k));
    }
    return std::sqrt(kTwoPi * sum);
}

cdouble inner_l2(const SpectralField& u, const SpectralField& v) {
    check_same_grid(u.grid(), v.grid(), "inner_l2");
    cdouble sum(0.0, 0.0);
    const int K = u.n_modes();
    for (int k = -K; k <= K; ++k) sum += u.at(k) * std::conj(v.at(k));
    return kTwoPi * sum;
}

double GridFunction::quad() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return kTwoPi * s / static_cast<double>(grid_.n_points());
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    check_same_grid(grid_, o.grid_, "GridFunction::operator+=");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
    check_same_grid(grid_, o.grid_, "GridFunction::operator-=");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double a) {
    for (auto& x : v_) x *= a;
    return *this;
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    check_same_grid(a.grid_, b.grid_, "GridFunction::operator*");
    GridFunction out(a.grid_);
    for (size_t i = 0; i < a.v_.size(); ++i) out.v_[i] = a.v_[i] * b.v_[i];
    return out;
}

GridFunction to_grid(const SpectralField& field) {
    return GridFunction(field.grid(), to_physical(field));
}

SpectralField truncate(const GridFunction& f) { return to_spectral(f.values(), f.grid()); }

double grid_l2_norm(const GridFunction& f) {
    double s = 0.0;
    for (double x : f.values()) s += x * x;
    return std::sqrt(kTwoPi * s / static_cast<double>(f.grid().n_points()));
}

}  // namespace kdv5
