#pragma once

// The ordered index set, the dynamical parameter, all R-matrix coefficient
// functions, matrix assembly, prefactors, and the gauge map to face weights.
//
// Index order: 1 < 2 < ... < N < 0 < -N < ... < -2 < -1 (written a < b for
// "a precedes b").  weight(j) = eps_j for j > 0, -eps_{|j|} for j < 0, 0 for
// j = 0.

#include <string>
#include <vector>

#include "ebq/special.hpp"

namespace ebq {

// Braid index bookkeeping for rank N.
struct BraidIndex {
    int N;
    explicit BraidIndex(int N_) : N(N_) {}

    int dim() const { return 2 * N + 1; }
    // position of j in the order; a bijection onto 0..2N
    int pos(int j) const {
        if (j > 0) return j - 1;
        if (j == 0) return N;
        return 2 * N + j;  // j < 0: pos(-1) = 2N
    }
    int at(int position) const {
        if (position < N) return position + 1;
        if (position == N) return 0;
        return position - 2 * N;  // negative index
    }
    bool prec(int a, int b) const { return pos(a) < pos(b); }
};

// The dynamical vector s = (s_{eps_1}, ..., s_{eps_N}); lookup extends to
// the full index set by s_{-j} = -s_{eps_j} and s_0 = -1/2.
struct DynamicalParam {
    int N;
    std::vector<cd> s;

    DynamicalParam(int N_, std::vector<cd> s_, bool validate = true,
                   const AlgebraParams* params = nullptr)
        : N(N_), s(std::move(s_)) {
        if (static_cast<int>(s.size()) != N)
            throw InvalidIndexPattern("DynamicalParam: wrong length");
        if (validate && params) check_generic(*params);
    }

    cd lookup(int j) const {
        if (j == 0) return cd(-0.5);
        return (j > 0) ? s[j - 1] : -s[-j - 1];
    }
    cd diff(int i, int j) const { return lookup(i) - lookup(j); }

    // reject s with a vanishing [s_j], [2s_j+1], [s_j - s_k] or [s_j + s_k]
    void check_generic(const AlgebraParams& params, double floor = 1e-6) const;

    DynamicalParam shifted(int j) const {  // s + hat(j)
        DynamicalParam out(*this);
        if (j > 0) out.s[j - 1] += 1.0;
        if (j < 0) out.s[-j - 1] -= 1.0;
        return out;
    }
};

enum class CoefKind { b, bbar, c, cbar, d, dbar, e, e0 };
enum class PrefactorKind { rho0, rho_tilde, rho_tilde_star, Cfun, rho_hat, mu, mu_star, chi, phi };
enum class PrefactorMode { none, rho0 };

// Scalar coefficient functions of Eq. (R-matrix).  For kinds b/bbar/c/cbar,
// (j1, j2) index the pair (coefficient argument s_{j1 j2}); for d/dbar they
// select the printed branch by the positions of (j1, j2); for e, j1 is the
// index j (j2 ignored); for e0 both are ignored.
cd coef(CoefKind kind, cd u, int j1, int j2, const DynamicalParam& s,
        const AlgebraParams& params);

// G_{s_j} and H_s.
cd G_s(int j, const DynamicalParam& s, const AlgebraParams& params);
cd H_s(const DynamicalParam& s, const AlgebraParams& params);

// Scalar prefactors; u-space throughout.
cd prefactor(PrefactorKind kind, cd u, const AlgebraParams& params,
             const TruncationPolicy& policy = {});

struct RMatrixValue {
    int N = 0;
    cd u;
    std::vector<cd> s;
    PrefactorMode mode = PrefactorMode::none;
    std::vector<cd> m;  // dense dim^2 x dim^2, row-major

    int dim() const { return 2 * N + 1; }
    cd& at(int rowpair, int colpair) { return m[static_cast<size_t>(rowpair) * dim() * dim() + colpair]; }
    cd at(int rowpair, int colpair) const { return m[static_cast<size_t>(rowpair) * dim() * dim() + colpair]; }
    // entry R^{(a,c)}_{(b,d)} by braid indices
    cd entry(int a, int c, int b, int d) const {
        const BraidIndex ix(N);
        return at(ix.pos(a) * dim() + ix.pos(c), ix.pos(b) * dim() + ix.pos(d));
    }
};

// Assemble bar R^+(u, s), optionally multiplied by rho_0^+(u).
RMatrixValue assemble(cd u, const DynamicalParam& s, PrefactorMode mode,
                      const AlgebraParams& params, const TruncationPolicy& policy = {});

// Gauge data.  F(s, s + hat j) = (G_{s_j} / G_{s_j}(j))^{1/2}; the squared
// form is rational in brackets and carries no branch choice.
cd gauge_F2(const DynamicalParam& s, int jhat, const AlgebraParams& params);
cd gauge_F(const DynamicalParam& s, int jhat, const AlgebraParams& params);
// G_a of the crossing/inversion relations, with the sign factor eps(a) == 1.
cd gauge_Ga(const DynamicalParam& a, const AlgebraParams& params);

// Face weight W(a, b; d, c | u): the R entry in height coordinates.  Heights
// must form an admissible square (all four edges single steps), otherwise
// InvalidIndexPattern.  prefactor: none -> bar R, rho0 -> rho_0^+ bar R.
cd face_weight(const DynamicalParam& a, const DynamicalParam& b, const DynamicalParam& d,
               const DynamicalParam& c, cd u, PrefactorMode mode,
               const AlgebraParams& params, const TruncationPolicy& policy = {});

// Inverts the gauge relation: W_JMO = R entry / [rho_hat (η,1-bracket factor)
// F-ratio].  Principal square roots; BranchWarning is surfaced through the
// CheckReport notes of the reflection/crossing checks instead of here.
cd to_jmo(const DynamicalParam& a, int i, int j, int k, int l, cd u,
          const AlgebraParams& params, const TruncationPolicy& policy = {});

// step index of (to - from), throws if not a single step
int step_index(const DynamicalParam& from, const DynamicalParam& to);

}  // namespace ebq
