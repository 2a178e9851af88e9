#include "kdv5/random_field.hpp"

#include <cmath>

namespace kdv5 {

SpectralField random_field(const PeriodicGrid& grid, std::mt19937_64& rng, double decay, int kmax,
                           double amplitude) {
    const int K = grid.n_modes();
    if (kmax <= 0 || kmax > K) kmax = K;
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(grid);
    for (int k = 1; k <= kmax; ++k) {
        const double w = std::pow(1.0 + static_cast<double>(k) * k, -0.5 * decay);
        const cdouble z(w * gauss(rng), w * gauss(rng));
        f.at(k) = z;
        f.at(-k) = std::conj(z);
    }
    const double n = sobolev_norm(f, 0.0);
    if (n > 0.0) f *= amplitude / n;
    return f;
}

}  // namespace kdv5
