#pragma once

#include <random>
#include <vector>

#include "ebq/params.hpp"

namespace ebq {

// Deterministic sampling: all randomness in the library flows from one seed.
struct Sampler {
    std::mt19937_64 eng;

    explicit Sampler(uint64_t seed) : eng(seed) {}

    double uni(double a, double b) {
        std::uniform_real_distribution<double> d(a, b);
        return d(eng);
    }

    // spectral point in the window [0.1, 0.9] plus small imaginary jitter
    cd u_point() { return cd(uni(0.1, 0.9), uni(-0.05, 0.05)); }

    // spectral difference with |Re| shrunk by attempt so |z1/z2| approaches 1
    cd u_delta(int attempt) {
        const double scale = std::pow(0.5, attempt);
        const double re = uni(0.03, 0.25) * scale * (uni(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
        return cd(re, uni(-0.3, 0.3));
    }

    // generic heights: pairwise separations >= 0.05 in the real part
    std::vector<cd> heights(int N) {
        for (int tries = 0; tries < 256; ++tries) {
            std::vector<cd> s(N);
            for (int k = 0; k < N; ++k) s[k] = cd(uni(0.3, 2.7), uni(-0.04, 0.04));
            bool ok = true;
            for (int i = 0; i < N && ok; ++i)
                for (int j = i + 1; j < N && ok; ++j) {
                    const double d1 = std::abs(s[i].real() - s[j].real());
                    const double d2 = std::abs(s[i].real() + s[j].real());
                    if (d1 < 0.05 || d2 < 0.05) ok = false;
                }
            if (ok) return s;
        }
        throw std::runtime_error("Sampler: could not draw generic heights");
    }
};

}  // namespace ebq
