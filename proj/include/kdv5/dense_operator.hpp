#pragma once

#include <Eigen/Dense>
#include <functional>

#include "kdv5/field.hpp"
#include "kdv5/profile.hpp"

namespace kdv5 {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// A matrix over the mean-zero truncated basis {e^{ikx}, k != 0, |k| <= K},
// ordered k = -K..-1, 1..K. Real-kernel operators satisfy
// M(-k,-m) = conj(M(k,m)); self-adjointness on L^2 is Hermitian symmetry
// (the basis is orthogonal with equal weight 2pi).
struct DenseOperator {
    PeriodicGrid grid;
    Mat m;

    DenseOperator(const PeriodicGrid& g, Mat mat) : grid(g), m(std::move(mat)) {
        if (m.rows() != 2 * g.n_modes() || m.cols() != 2 * g.n_modes())
            throw DimensionError("DenseOperator: matrix must be 2K x 2K");
    }
    static DenseOperator zero(const PeriodicGrid& g) {
        return DenseOperator(g, Mat::Zero(2 * g.n_modes(), 2 * g.n_modes()));
    }

    int dim() const { return static_cast<int>(m.rows()); }
    double hermitian_defect() const;
    Vec apply(const Vec& v) const { return m * v; }
};

// index <-> mode maps for the mean-zero packing
inline int mode_to_index(int k, int K) { return k < 0 ? k + K : K + k - 1; }
inline int index_to_mode(int i, int K) { return i < K ? i - K : i - K + 1; }

Vec pack(const SpectralField& f);
SpectralField unpack(const Vec& v, const PeriodicGrid& grid);

double sobolev_norm(const Vec& v, const PeriodicGrid& grid, double s);

// Diagonal of a multiplier symbol over the packed basis.
Vec symbol_diagonal(const PeriodicGrid& grid, const std::function<cdouble(int)>& sym);

// Columns are the images of the basis modes; `op` acts on real fields and is
// extended C-linearly through the cos/sin parts of e^{ikx}. Column work is
// independent and is chunked over `threads`.
DenseOperator assemble_matrix(const std::function<SpectralField(const SpectralField&)>& op,
                              const PeriodicGrid& grid, int threads = 1);

// exp(-t L) by scaling-and-squaring with a Pade kernel. S(0) = I.
DenseOperator propagator(const DenseOperator& L, double t);

Eigen::VectorXcd eigenvalues(const DenseOperator& L);
// min real part over the spectrum
double spectral_abscissa(const DenseOperator& L);
// eigenvector of the eigenvalue with minimal real part, as a real field
SpectralField slowest_mode(const DenseOperator& L);

// E = G D^3 [D^s; G] D^{-s} + [D^s; G] D^3 G D^{-s}, assembled by composing
// dense factors; equals D^s (G D^{2l-1} G) D^{-s} - G D^{2l-1} G with the
// order-3 multiplier for l = 2.
DenseOperator remainder_operator(double s, const ControlProfile& p, const PeriodicGrid& grid,
                                 double gamma = 3.0);

}  // namespace kdv5
