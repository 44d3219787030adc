#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ebq {

using cd = std::complex<double>;

// Thrown when an infinite product/series fails the truncation policy.
struct NonConvergent : std::runtime_error {
    explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument region (z = 0 in a theta function, |p| >= 1, ...).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A bracket in a denominator vanished at the sampled point.
struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

// Two orderings of an operator product do not share normal-ordered content.
struct ChargeMismatch : std::runtime_error {
    explicit ChargeMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidIndexPattern : std::invalid_argument {
    explicit InvalidIndexPattern(const std::string& what) : std::invalid_argument(what) {}
};

// Truncation control for infinite products and mode sums.  Truncation is
// magnitude-based with a ratio guard: a sum stops only once |term| < tol AND
// the running term ratio stays below ratio_guard, otherwise NonConvergent.
struct TruncationPolicy {
    double tol = 1e-16;
    int max_terms = 4096;
    double ratio_guard = 0.95;

    TruncationPolicy() = default;
    TruncationPolicy(double tol_, int max_terms_, double guard_)
        : tol(tol_), max_terms(max_terms_), ratio_guard(guard_) {
        validate();
    }
    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("TruncationPolicy: tol must be > 0");
        if (max_terms < 8) throw std::invalid_argument("TruncationPolicy: max_terms must be >= 8");
        if (!(ratio_guard > 0.0 && ratio_guard < 1.0))
            throw std::invalid_argument("TruncationPolicy: ratio_guard must be in (0,1)");
    }
};

// Global algebra constants for rank N, deformation q, elliptic modulus
// exponent r and level c, plus every derived quantity.  One fixed principal
// branch of log q is used for all fractional powers anywhere downstream:
// every power q^a is exp(a*log_q), so repeated evaluation is bit-identical
// and no z-plane cut is ever crossed.
struct AlgebraParams {
    int N = 1;
    cd q;
    cd r;
    cd c;

    cd log_q;   // principal log of q, fixed once
    cd p;       // q^{2r}
    cd rstar;   // r - c
    cd pstar;   // q^{2 rstar} = p q^{-2c}
    double eta = 0.0;  // -(2N-1)/2
    cd xi;      // q^{-2 eta} = q^{2N-1}

    AlgebraParams(int N_, cd q_, cd r_, cd c_) : N(N_), q(q_), r(r_), c(c_) {
        if (N < 1) throw DomainError("AlgebraParams: N must be >= 1");
        if (std::abs(q) <= 0.0 || std::abs(q) >= 1.0)
            throw DomainError("AlgebraParams: need 0 < |q| < 1");
        log_q = std::log(q);  // principal branch, fixed for the lifetime
        p = qpow(2.0 * r);
        rstar = r - c;
        pstar = p * qpow(-2.0 * c);  // p* = p q^{-2c} exactly by construction
        eta = -(2.0 * N - 1.0) / 2.0;
        xi = qpow(2.0 * N - 1.0);
        if (std::abs(p) >= 1.0) throw DomainError("AlgebraParams: |q^{2r}| must be < 1");
        if (std::abs(pstar) >= 1.0) throw DomainError("AlgebraParams: |q^{2r*}| must be < 1");
    }

    // q^a through the fixed branch.
    cd qpow(cd a) const { return std::exp(a * log_q); }

    // [x]_q = (q^x - q^{-x}) / (q - q^{-1})
    cd qnum(cd x) const { return (qpow(x) - qpow(-x)) / (qpow(1) - qpow(-1)); }

    // [x]_+ = (q^x + q^{-x}) / (q - q^{-1})
    cd qnum_plus(cd x) const { return (qpow(x) + qpow(-x)) / (qpow(1) - qpow(-1)); }

    // A copy with the level forced to c = 0 (evaluation representations);
    // there p* = p and starred brackets collapse to unstarred ones.
    AlgebraParams at_level_zero() const { return AlgebraParams(N, q, r, cd(0.0)); }

    // A copy with a different level (e.g. c = 1 for the vertex operators).
    AlgebraParams at_level(cd level) const { return AlgebraParams(N, q, r, level); }
};

}  // namespace ebq
