#include "kdv5/multiplier.hpp"

#include <cmath>

namespace kdv5 {

cdouble Multiplier::symbol(int k) const {
    switch (kind_) {
        case Kind::dr:
            return k == 0 ? cdouble(1.0, 0.0)
                          : cdouble(std::pow(std::abs(static_cast<double>(k)), r_), 0.0);
        case Kind::derivative: {
            if (j_ == 0) return cdouble(1.0, 0.0);
            cdouble ik(0.0, static_cast<double>(k));
            cdouble p(1.0, 0.0);
            for (int i = 0; i < j_; ++i) p *= ik;
            return p;
        }
        case Kind::hilbert:
            return k == 0 ? cdouble(0.0, 0.0) : cdouble(0.0, k > 0 ? -1.0 : 1.0);
        case Kind::mollifier:
            return cdouble(std::exp(-std::pow(eps_, 0.1) * static_cast<double>(k) * k), 0.0);
        case Kind::custom:
            return table_[static_cast<size_t>(k + (static_cast<int>(table_.size()) - 1) / 2)];
    }
    return cdouble(0.0, 0.0);
}

SpectralField apply_multiplier(const SpectralField& field, const Multiplier& m) {
    const int K = field.n_modes();
    if (m.kind() == Multiplier::Kind::custom && m.custom_size() != 2 * K + 1)
        throw DimensionError("apply_multiplier: custom table length != 2K+1");
    SpectralField out(field.grid());
    for (int k = -K; k <= K; ++k) out.at(k) = m.symbol(k) * field.at(k);
    return out;
}

GridFunction apply_multiplier(const GridFunction& f, const Multiplier& m) {
    if (m.kind() == Multiplier::Kind::custom)
        throw DomainError("apply_multiplier(grid): custom tables are retained-band only");
    const int N = f.grid().n_points();
    std::vector<cdouble> buf(N);
    for (int j = 0; j < N; ++j) buf[j] = cdouble(f[j], 0.0);
    detail::dft(buf, -1);
    std::vector<cdouble> out(N, cdouble(0.0, 0.0));
    for (int j = 0; j < N; ++j) {
        const int k = j <= N / 2 ? j : j - N;
        if (2 * std::abs(k) == N) continue;  // Nyquist zeroed
        out[j] = m.symbol(k) * buf[j] / static_cast<double>(N);
    }
    detail::dft(out, +1);
    GridFunction g(f.grid());
    for (int j = 0; j < N; ++j) g[j] = out[j].real();
    return g;
}

}  // namespace kdv5
