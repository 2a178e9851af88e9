#include "kdv5/grid.hpp"

#include <cmath>

namespace kdv5::detail {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::vector<cdouble>& a, int sign) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * kTwoPi / len;
        const cdouble wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cdouble w(1.0, 0.0);
            for (int j = 0; j < len / 2; ++j) {
                cdouble u = a[i + j];
                cdouble v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void dft_direct(std::vector<cdouble>& a, int sign) {
    const int n = static_cast<int>(a.size());
    std::vector<cdouble> out(n, cdouble(0.0, 0.0));
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double ang = sign * kTwoPi * (static_cast<long long>(j) * k % n) / n;
            out[k] += a[j] * cdouble(std::cos(ang), std::sin(ang));
        }
    }
    a = std::move(out);
}

}  // namespace

void dft(std::vector<cdouble>& a, int sign) {
    if (is_pow2(static_cast<int>(a.size())))
        fft_radix2(a, sign);
    else
        dft_direct(a, sign);
}

}  // namespace kdv5::detail
