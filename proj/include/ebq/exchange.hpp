#pragma once

// Normal-ordered exponential operators with zero-mode bookkeeping.
//
// An operator descriptor is either a normal-ordered exponential of boson
// modes (osc law set) or a primary current such as e_j(z)/f_j(z) (adjoint
// law set), together with its zero-mode monomial: a lattice charge e^beta,
// a Heisenberg charge e^{Q_kappa}, and powers (q^tau z)^{linear form in h, P}.
//
// Exchange scalars A(z1) B(z2) = f * B(z2) A(z1) are computed from mode-sum
// contractions plus the zero-mode reordering factor.  Zero-mode exponents are
// carried in exact rational form over the field generated by 1/r and 1/r*,
// and only turned into complex numbers at evaluation, so statements like
// "the fractional powers of z cancel" are exact integer arithmetic, not
// float comparisons.  Constant powers of the argument (no h or P content)
// commute with everything and are omitted from descriptors.

#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "ebq/mode_algebra.hpp"
#include "ebq/params.hpp"

namespace ebq {

// Small exact rational.
struct Frac {
    long long num = 0;
    long long den = 1;

    Frac() = default;
    Frac(long long n) : num(n), den(1) {}
    Frac(long long n, long long d) : num(n), den(d) { normalize(); }
    void normalize() {
        if (den == 0) throw std::invalid_argument("Frac: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    bool is_zero() const { return num == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend Frac operator+(Frac a, Frac b) { return Frac(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Frac operator-(Frac a, Frac b) { return Frac(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Frac operator*(Frac a, Frac b) { return Frac(a.num * b.num, a.den * b.den); }
    friend Frac operator-(Frac a) { return Frac(-a.num, a.den); }
    friend bool operator==(Frac a, Frac b) { return a.num == b.num && a.den == b.den; }
};

// a + b/r + c/r*, all exact.
struct ExactExponent {
    Frac cst, r_inv, rstar_inv;

    bool is_zero() const { return cst.is_zero() && r_inv.is_zero() && rstar_inv.is_zero(); }
    bool is_integral() const { return r_inv.is_zero() && rstar_inv.is_zero() && cst.den == 1; }
    cd value(const AlgebraParams& P) const {
        return cd(cst.value()) + cd(r_inv.value()) / P.r + cd(rstar_inv.value()) / P.rstar;
    }
    friend ExactExponent operator+(const ExactExponent& a, const ExactExponent& b) {
        return {a.cst + b.cst, a.r_inv + b.r_inv, a.rstar_inv + b.rstar_inv};
    }
    friend ExactExponent operator-(const ExactExponent& a, const ExactExponent& b) {
        return {a.cst - b.cst, a.r_inv - b.r_inv, a.rstar_inv - b.rstar_inv};
    }
    friend ExactExponent operator*(const ExactExponent& a, Frac s) {
        return {a.cst * s, a.r_inv * s, a.rstar_inv * s};
    }
    static ExactExponent unit() { return {Frac(1), Frac(0), Frac(0)}; }
    static ExactExponent one_over_r() { return {Frac(0), Frac(1), Frac(0)}; }
    static ExactExponent one_over_rstar() { return {Frac(0), Frac(0), Frac(1)}; }
};

// Vector over the epsilon basis with exact rational entries.
using EpsVec = std::vector<Frac>;

EpsVec eps_unit(int N, int j);            // epsilon_j (1-based)
EpsVec simple_root(int N, int j);         // alpha_j
Frac eps_dot(const EpsVec& a, const EpsVec& b);

// Linear form sum_k h_coeff[k] * h_{eps_k} + sum_k p_coeff[k] * P_{eps_k}.
struct LinForm {
    std::vector<ExactExponent> h_coeff;
    std::vector<ExactExponent> p_coeff;

    explicit LinForm(int N) : h_coeff(N), p_coeff(N) {}
    // pairing against a lattice charge beta (h part) and Q charge kappa (P part)
    ExactExponent pair(const EpsVec& beta, const EpsVec& kappa) const;
};

// (q^tau z)^{form}, z the operator argument.
struct ZeroModePower {
    cd tau;
    LinForm form;
};

struct OperatorDescriptor {
    std::string name;
    int N = 0;
    // normal-ordered exponential: coefficient vector of z^{-m} over alpha_{k,m}
    std::function<ModeVector(int)> osc;
    // primary current: adjoint weights w_k(m) in [alpha_{k,m}, X(z)] = w_k(m) z^m X(z)
    std::function<std::vector<cd>(int)> adj;
    EpsVec charge;   // beta in e^beta
    EpsVec qcharge;  // kappa in e^{Q_kappa}
    std::vector<ZeroModePower> powers;

    bool is_exponential() const { return static_cast<bool>(osc); }
};

struct ExchangeOutcome {
    cd scalar = 0.0;
    bool residual_charge_ok = true;
    double p_independence_residual = 0.0;
    // net exponents of z1 and z2 contributed by zero-mode bookkeeping
    ExactExponent z1_exponent, z2_exponent;
};

// exp( sum_{m>=1} [A_m, B_{-m}] x^m ) for two exponentials; the building
// block of the directed contraction.  Throws NonConvergent outside the
// adaptive annulus.
cd contraction(const OperatorDescriptor& A, const OperatorDescriptor& B, cd x,
               const AlgebraParams& params, const TruncationPolicy& policy = {});

// Scalar f with A(z1) B(z2) = f B(z2) A(z1), z_i = q^{2 u_i}.
ExchangeOutcome exchange_ratio(const OperatorDescriptor& A, cd u1,
                               const OperatorDescriptor& B, cd u2,
                               const AlgebraParams& params,
                               const TruncationPolicy& policy = {});

// ----- descriptor factories ------------------------------------------------
// All argument multipliers are folded in as q-power shifts: descriptor(tau)
// stands for the current evaluated at q^{tau} z.

// k_{+-j}(q^tau z): pure oscillator.
OperatorDescriptor k_current(EpsSign sign, int j, cd tau, const AlgebraParams& params);
// psi_j(q^tau z): pure oscillator.
OperatorDescriptor psi_current(int j, cd tau, const AlgebraParams& params);
// k_0(q^tau z) = :k_{+N}(q^{tau+1/2} z) psi_N(q^{tau+1/2} z)^{-1}:
OperatorDescriptor k0_current(cd tau, const AlgebraParams& params);

// Modified currents K^+_{+j}, K^+_{-j}, K^+_0 (zero modes included).
OperatorDescriptor K_plus(int j, const AlgebraParams& params);
OperatorDescriptor K_minus(int j, const AlgebraParams& params);
OperatorDescriptor K_zero(const AlgebraParams& params);

// Modified elliptic currents E_j(u), F_j(u) at generic level: primary
// adjoint laws plus the fractional zero-mode powers.
OperatorDescriptor E_modified(int j, const AlgebraParams& params);
OperatorDescriptor F_modified(int j, const AlgebraParams& params);

// Level-1 free-field realizations (params must carry c = 1).
OperatorDescriptor E_level1(int j, const AlgebraParams& params);
OperatorDescriptor F_level1(int j, const AlgebraParams& params);
OperatorDescriptor phi_top(const AlgebraParams& params);      // Phi_{-1}(u)
OperatorDescriptor psistar_top(const AlgebraParams& params);  // Psi*_{-1}(u)

}  // namespace ebq
