#include "ebq/mode_algebra.hpp"

#include <cmath>

namespace ebq {

RootData::RootData(int N_) : N(N_), b(static_cast<size_t>(N_) * N_, 0.0) {
    if (N < 1) throw DomainError("RootData: N must be >= 1");
    for (int j = 0; j < N; ++j) {
        b[static_cast<size_t>(j) * N + j] = (j == N - 1) ? 1.0 : 2.0;
        if (j + 1 < N) {
            b[static_cast<size_t>(j) * N + j + 1] = -1.0;
            b[static_cast<size_t>(j + 1) * N + j] = -1.0;
        }
    }
}

std::vector<cd> gram(int m, const AlgebraParams& params) {
    if (m == 0) throw DomainError("gram: m must be nonzero");
    const RootData roots(params.N);
    const cd pm = std::pow(params.p, m);
    const cd psm = std::pow(params.pstar, m);
    if (std::abs(1.0 - psm) < 1e-14)
        throw DomainError("gram: 1 - p*^m vanishes at this m");
    const cd common = params.qnum(params.c * cd(m)) / cd(m) * (1.0 - pm) / (1.0 - psm) *
                      params.qpow(-params.c * cd(m));
    std::vector<cd> g(static_cast<size_t>(params.N) * params.N);
    for (int i = 0; i < params.N; ++i)
        for (int j = 0; j < params.N; ++j) {
            const double bij = roots.at(i, j);
            g[static_cast<size_t>(i) * params.N + j] =
                (bij == 0.0) ? cd(0.0) : params.qnum(bij * m) * common;
        }
    return g;
}

ModeVector eps_vector(EpsLabel label, int m, const AlgebraParams& params) {
    if (m == 0) throw DomainError("eps_vector: m must be nonzero");
    const int N = params.N;
    const double eta = params.eta;
    if (label.sign == EpsSign::Zero) {
        ModeVector plus = eps_vector(EpsLabel::plus(N), m, params);
        ModeVector minus = eps_vector(EpsLabel::minus(N), m, params);
        const cd scale = params.qnum(cd(m) / 2.0) / params.qnum(m);
        std::vector<cd> coeffs(N);
        for (int k = 0; k < N; ++k) coeffs[k] = scale * (plus.coeffs[k] + minus.coeffs[k]);
        return ModeVector(m, std::move(coeffs));
    }
    const int j = label.j;
    if (j < 1 || j > N) throw DomainError("eps_vector: j out of range");
    const double sgn = (label.sign == EpsSign::Plus) ? 1.0 : -1.0;
    const cd two_eta_m = params.qnum(2.0 * eta * m);
    if (std::abs(two_eta_m) < 1e-14) throw DomainError("eps_vector: [2 eta m]_q = 0");
    const cd Cm = params.qnum(eta * m) / (params.qnum(m) * params.qnum(m) * two_eta_m);
    const cd front = params.qpow(sgn * j * m) * Cm;
    std::vector<cd> coeffs(N, cd(0.0));
    for (int k = 1; k < j; ++k)
        coeffs[k - 1] = front * params.qpow(sgn * eta * m) * params.qnum(cd(k) * cd(m));
    for (int k = j; k <= N; ++k)
        coeffs[k - 1] = front * sgn * params.qnum_plus((eta + k) * m);
    return ModeVector(m, std::move(coeffs));
}

cd commutator(const ModeVector& X, const ModeVector& Y, const AlgebraParams& params) {
    if (X.m + Y.m != 0) return 0.0;
    const auto g = gram(X.m, params);
    const int N = params.N;
    cd out = 0.0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            out += X.coeffs[i] * g[static_cast<size_t>(i) * N + j] * Y.coeffs[j];
    return out;
}

cd fermion_contraction(FermionSector sector, cd x, const AlgebraParams& params,
                       const TruncationPolicy& policy) {
    if (std::abs(x) >= std::abs(params.q) * policy.ratio_guard)
        throw NonConvergent("fermion_contraction: |x| too close to |q|");
    const cd Nf = 1.0 / (params.qpow(0.5) + params.qpow(-0.5));
    if (sector == FermionSector::R) {
        cd sum = Nf;
        cd xm = 1.0;
        for (int m = 1; m < policy.max_terms; ++m) {
            xm *= x;
            const cd term = Nf * (params.qpow(m) + params.qpow(-m)) * xm;
            sum += term;
            if (std::abs(term) < policy.tol) return sum;
        }
        throw NonConvergent("fermion_contraction: R sum did not converge");
    }
    // NS: factor out the principal x^{1/2}; remaining sum over k >= 0 with
    // m = k + 1/2.
    cd sum = 0.0;
    cd xk = 1.0;
    for (int k = 0; k < policy.max_terms; ++k) {
        const cd m = cd(k) + 0.5;
        const cd term = Nf * (params.qpow(m) + params.qpow(-m)) * xk;
        sum += term;
        if (std::abs(term) < policy.tol && k > 0) return std::sqrt(x) * sum;
        xk *= x;
    }
    throw NonConvergent("fermion_contraction: NS sum did not converge");
}

cd fermion_contraction_closed(FermionSector sector, cd x, const AlgebraParams& params) {
    const cd q = params.q;
    const cd denom = (1.0 - q * x) * (1.0 - x / q);
    if (sector == FermionSector::NS) return std::sqrt(x) * (1.0 - x) / denom;
    const cd Nf = 1.0 / (params.qpow(0.5) + params.qpow(-0.5));
    return Nf * (1.0 - x) * (1.0 + x) / denom;
}

}  // namespace ebq
