#pragma once

// The boson mode algebra of type B_N: root data, the Gram form of the simple
// root modes alpha_{j,m}, the orthonormal-basis modes eps^{+-j}_m / eps^0_m,
// scalar commutator evaluation and the NS/R fermion contraction functions.
//
// Mode operators are coefficient vectors over alpha_{1..N,m}, never Fock
// matrices: every commutator in the algebra is a scalar, so the algebra
// closes on finite vectors.

#include <vector>

#include "ebq/params.hpp"

namespace ebq {

// Symmetrized Cartan pairing b_{ij} = (alpha_i, alpha_j) from the
// epsilon-realization alpha_j = eps_j - eps_{j+1} (j<N), alpha_N = eps_N.
struct RootData {
    int N;
    std::vector<double> b;  // N x N, row-major

    explicit RootData(int N_);
    double at(int i, int j) const { return b[static_cast<size_t>(i) * N + j]; }
};

// A degree-m oscillator: coefficients over alpha_{1..N,m}.
struct ModeVector {
    int m = 0;
    std::vector<cd> coeffs;

    ModeVector(int m_, std::vector<cd> coeffs_) : m(m_), coeffs(std::move(coeffs_)) {
        if (m == 0) throw DomainError("ModeVector: m must be nonzero");
    }
};

enum class EpsSign { Plus, Minus, Zero };

struct EpsLabel {
    EpsSign sign;
    int j = 0;  // 1..N; ignored for Zero

    static EpsLabel plus(int j) { return {EpsSign::Plus, j}; }
    static EpsLabel minus(int j) { return {EpsSign::Minus, j}; }
    static EpsLabel zero() { return {EpsSign::Zero, 0}; }
};

// Gram matrix of [alpha_{i,m}, alpha_{j,-m}]:
//   G_m(i,j) = [b_{ij} m]_q [c m]_q / m * (1-p^m)/(1-p*^m) * q^{-cm}.
std::vector<cd> gram(int m, const AlgebraParams& params);

// Orthonormal-basis modes.  For sign s = +-, coefficient over alpha_{k,m}:
//   q^{s j m} C_m ( q^{s eta m} [k m]_q   for k < j,
//                   s [(eta+k) m]_+       for k >= j ),
// with C_m = [eta m]_q / ([m]_q^2 [2 eta m]_q); and
//   eps^0_m = ([m/2]_q/[m]_q) (eps^{+N}_m + eps^{-N}_m).
ModeVector eps_vector(EpsLabel label, int m, const AlgebraParams& params);

// [X, Y] for X at degree m_X, Y at degree m_Y: zero unless m_X + m_Y = 0,
// else x^T G_{m_X} y.
cd commutator(const ModeVector& X, const ModeVector& Y, const AlgebraParams& params);

enum class FermionSector { NS, R };

// Two-point fermion contraction <Psi(z)Psi(w)> as a mode sum in x = w/z:
//   NS: sum_{m in Z+1/2, m>0} Nf (q^m+q^{-m}) x^m
//   R : Nf + sum_{m>=1} Nf (q^m+q^{-m}) x^m,      Nf = 1/(q^{1/2}+q^{-1/2}).
// The NS value carries the principal branch of x^{1/2}.
cd fermion_contraction(FermionSector sector, cd x, const AlgebraParams& params,
                       const TruncationPolicy& policy = {});

// Closed forms of the same contractions,
//   NS: x^{1/2} (1-x) / ((1-qx)(1-q^{-1}x))
//   R : Nf (1-x)(1+x) / ((1-qx)(1-q^{-1}x)),
// kept separate so the mode sums have an independent target.
cd fermion_contraction_closed(FermionSector sector, cd x, const AlgebraParams& params);

}  // namespace ebq
