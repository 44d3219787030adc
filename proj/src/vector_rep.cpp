#include "ebq/vector_rep.hpp"

#include <cmath>

namespace ebq {

namespace {

std::vector<int> zero_shift(int N) { return std::vector<int>(N, 0); }

std::vector<int> eps_shift(int j, int N) {
    std::vector<int> v(N, 0);
    if (j > 0 && j <= N) v[j - 1] = 1;
    if (j < 0 && -j <= N) v[-j - 1] = -1;
    return v;  // index 0 (and N+1) carries no shift
}

std::vector<int> add_shift(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out(a);
    for (size_t k = 0; k < a.size(); ++k) out[k] += b[k];
    return out;
}

PVec apply_shift(const PVec& P, const std::vector<int>& beta) {
    PVec out(P);
    for (size_t k = 0; k < P.size(); ++k) out[k] -= static_cast<double>(beta[k]);
    return out;
}

}  // namespace

ShiftedMatrix ShiftedMatrix::identity(int dim_, int N_) {
    ShiftedMatrix m(dim_, N_);
    for (int k = 0; k < dim_; ++k)
        m.set(k, k, [](const PVec&) { return cd(1.0); }, zero_shift(N_));
    return m;
}

void ShiftedMatrix::set(int r, int c, std::function<cd(const PVec&)> f, std::vector<int> shift) {
    auto& en = at(r, c);
    en.f = std::move(f);
    en.shift = std::move(shift);
    en.zero = false;
}

void ShiftedMatrix::add(int r, int c, std::function<cd(const PVec&)> f,
                        const std::vector<int>& shift) {
    auto& en = at(r, c);
    if (en.zero) {
        set(r, c, std::move(f), shift);
        return;
    }
    if (en.shift != shift)
        throw ChargeMismatch("ShiftedMatrix::add: incompatible lattice shifts");
    auto old = en.f;
    auto g = std::move(f);
    en.f = [old, g](const PVec& P) { return old(P) + g(P); };
}

ShiftedMatrix ShiftedMatrix::operator*(const ShiftedMatrix& rhs) const {
    ShiftedMatrix out(dim, N);
    for (int r = 0; r < dim; ++r)
        for (int m = 0; m < dim; ++m) {
            const auto& a = at(r, m);
            if (a.zero) continue;
            for (int c = 0; c < dim; ++c) {
                const auto& b = rhs.at(m, c);
                if (b.zero) continue;
                auto fa = a.f;
                auto fb = b.f;
                auto beta = a.shift;
                out.add(r, c,
                        [fa, fb, beta](const PVec& P) {
                            return fa(P) * fb(apply_shift(P, beta));
                        },
                        add_shift(a.shift, b.shift));
            }
        }
    return out;
}

ShiftedMatrix ShiftedMatrix::operator+(const ShiftedMatrix& rhs) const {
    ShiftedMatrix out(*this);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            const auto& b = rhs.at(r, c);
            if (!b.zero) out.add(r, c, b.f, b.shift);
        }
    return out;
}

ShiftedMatrix ShiftedMatrix::scaled(cd s) const {
    ShiftedMatrix out(*this);
    for (auto& en : out.e)
        if (!en.zero) {
            auto f = en.f;
            en.f = [f, s](const PVec& P) { return s * f(P); };
        }
    return out;
}

ShiftedMatrix ShiftedMatrix::times_scalar_right(const std::function<cd(const PVec&)>& g) const {
    ShiftedMatrix out(*this);
    for (auto& en : out.e)
        if (!en.zero) {
            auto f = en.f;
            auto beta = en.shift;
            en.f = [f, g, beta](const PVec& P) { return f(P) * g(apply_shift(P, beta)); };
        }
    return out;
}

ShiftedMatrix ShiftedMatrix::times_scalar_left(const std::function<cd(const PVec&)>& g) const {
    ShiftedMatrix out(*this);
    for (auto& en : out.e)
        if (!en.zero) {
            auto f = en.f;
            en.f = [f, g](const PVec& P) { return g(P) * f(P); };
        }
    return out;
}

ShiftedMatrix ShiftedMatrix::inverse_diagonal() const {
    ShiftedMatrix out(dim, N);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c)
            if (r != c && !at(r, c).zero)
                throw InvalidIndexPattern("inverse_diagonal: matrix is not diagonal");
        const auto& en = at(r, r);
        if (en.zero) throw PoleError("inverse_diagonal: zero diagonal entry");
        auto f = en.f;
        auto beta = en.shift;
        std::vector<int> nbeta(beta);
        for (auto& x : nbeta) x = -x;
        out.set(r, r,
                [f, nbeta](const PVec& P) { return 1.0 / f(apply_shift(P, nbeta)); },
                nbeta);
    }
    return out;
}

cd ShiftedMatrix::value(int r, int c, const PVec& P) const {
    const auto& en = at(r, c);
    return en.zero ? cd(0.0) : en.f(P);
}

namespace {

// P-lookup with the 0-slot convention P_0 = -1/2 (index 0 == N+1 == -(N+1))
cd pidx(const PVec& P, int j, int N) {
    if (j == 0 || std::abs(j) == N + 1) return cd(-0.5);
    return (j > 0) ? P[j - 1] : -P[-j - 1];
}

}  // namespace

ShiftedMatrix pi_K(int label, cd v, cd u, const AlgebraParams& params,
                   const TruncationPolicy& policy) {
    const BraidIndex ix(params.N);
    const int dim = ix.dim();
    const cd x = v - u;
    const cd rho = prefactor(PrefactorKind::rho0, x, params, policy);
    auto br = [&](cd a) { return bracket(a, params); };
    ShiftedMatrix out(dim, params.N);
    const double eta = params.eta;
    auto cst = [rho](cd w) {
        return std::function<cd(const PVec&)>([rho, w](const PVec&) { return rho * w; });
    };
    if (label > 0) {
        const int j = label;
        const cd bb = br(x) / br(x + 1.0);
        const cd cc = br(x - 1.0) / br(x);
        const cd special = br(x - 1.0) * br(x + cd(j) + eta - 1.0) /
                           (br(x) * br(x + cd(j) + eta));
        const auto shift = eps_shift(-j, params.N);
        for (int p = 0; p < dim; ++p) {
            const int k = ix.at(p);
            cd wv;
            if (k == j) wv = 1.0;
            else if (k == -j) wv = special;
            else if (ix.pos(k) < ix.pos(j)) wv = bb;
            else wv = cc;
            out.set(p, p, cst(wv), shift);
        }
        return out;
    }
    if (label < 0) {
        const int j = -label;
        const cd bb = br(x) / br(x + 1.0);
        const cd cc = br(x - 1.0) / br(x);
        const cd special = br(x) * br(x - cd(j) - eta) /
                           (br(x + 1.0) * br(x - cd(j) - eta + 1.0));
        const auto shift = eps_shift(j, params.N);
        for (int p = 0; p < dim; ++p) {
            const int k = ix.at(p);
            cd wv;
            if (k == -j) wv = 1.0;
            else if (k == j) wv = special;
            else if (ix.pos(k) < ix.pos(-j)) wv = bb;
            else wv = cc;
            out.set(p, p, cst(wv), shift);
        }
        return out;
    }
    // K^+_0
    const cd bb = br(x) / br(x + 1.0);
    const cd cc = br(x - 1.0) / br(x);
    const cd mid = br(x + 0.5) * br(x - 1.0) / (br(x - 0.5) * br(x + 1.0));
    for (int p = 0; p < dim; ++p) {
        const int k = ix.at(p);
        const cd wv = (k == 0) ? mid : (k > 0 ? bb : cc);
        out.set(p, p, cst(wv), zero_shift(params.N));
    }
    return out;
}

ShiftedMatrix pi_half(HalfKind kind, int row, int col, cd v, cd u,
                      const AlgebraParams& params) {
    const BraidIndex ix(params.N);
    const int N = params.N;
    const int dim = ix.dim();
    if (ix.pos(row) == ix.pos(col)) throw InvalidIndexPattern("pi_half: row == col");
    const bool lower = ix.pos(row) > ix.pos(col);
    if ((kind == HalfKind::E) != lower)
        throw InvalidIndexPattern("pi_half: E must be lower triangular, F upper");
    const AlgebraParams Pp = params;
    const cd x = v - u;
    const double eta = params.eta;
    ShiftedMatrix out(dim, N);
    auto B = [Pp](cd a) { return bracket(a, Pp); };

    // helper: install f between charges e^{Q_left} ... e^{Q_right}
    auto put = [&](int r, int c, std::function<cd(const PVec&)> f, const std::vector<int>& left,
                   const std::vector<int>& right) {
        auto g = [f, left](const PVec& P) { return f(apply_shift(P, left)); };
        out.set(ix.pos(r), ix.pos(c), g, add_shift(left, right));
    };

    const int er = (kind == HalfKind::E) ? row : col;  // "l-side" index of E_{l,j}
    const int ej = (kind == HalfKind::E) ? col : row;

    const bool r_negside = (er < 0);
    const bool j_negside = (ej < 0);

    if (!r_negside && !j_negside) {
        // positive block: E^+_{l,j} / F^+_{j,l}, l in {2..N, 0 == N+1}, j < l
        const int l = er, j = ej;
        const int lv = (l == 0) ? N + 1 : l;
        if (j < 1 || j > N || (l != 0 && (l <= j || l > N)))
            throw InvalidIndexPattern("pi_half: bad positive-block pattern");
        auto Pjl = [j, l, N](const PVec& P) { return pidx(P, j, N) - pidx(P, l, N); };
        if (kind == HalfKind::E) {
            auto f1 = [B, x, Pjl](const PVec& P) {
                return -B(x - Pjl(P)) * B(1.0) / (B(x) * B(Pjl(P)));
            };
            auto f2 = [B, x, Pjl, j, lv, N, eta, Pp](const PVec& P) {
                cd outv = B(x + cd(lv - 1) + eta - Pjl(P)) * B(1.0) /
                          (B(x + cd(lv - 1) + eta) * B(Pjl(P)));
                for (int m = j + 1; m <= lv - 1; ++m) {
                    const cd pjm = pidx(P, j, N) - pidx(P, m, N);
                    outv *= B(pjm + 1.0) / B(pjm);
                }
                return outv;
            };
            put(j, l, f1, eps_shift(l, N), eps_shift(-j, N));
            put(-l, -j, f2, eps_shift(l, N), eps_shift(-j, N));
        } else {
            auto f1 = [B, x, Pjl](const PVec& P) {
                return B(x + Pjl(P)) * B(1.0) / (B(x) * B(Pjl(P)));
            };
            auto f2 = [B, x, Pjl, j, lv, N, eta](const PVec& P) {
                cd outv = -B(x + cd(lv - 1) + eta + Pjl(P)) * B(1.0) /
                          (B(x + cd(lv - 1) + eta) * B(Pjl(P)));
                for (int m = j + 1; m <= lv - 1; ++m) {
                    const cd pjm = pidx(P, j, N) - pidx(P, m, N);
                    outv *= B(pjm - 1.0) / B(pjm);
                }
                return outv;
            };
            put(l, j, f1, zero_shift(N), zero_shift(N));
            put(-j, -l, f2, zero_shift(N), zero_shift(N));
        }
        return out;
    }

    if (r_negside && j_negside) {
        // negative block: E^+_{-j,-l} / F^+_{-l,-j}, 1 <= j < l <= N
        const int j = -((kind == HalfKind::E) ? er : ej);
        const int l = -((kind == HalfKind::E) ? ej : er);
        if (j < 1 || l <= j || l > N)
            throw InvalidIndexPattern("pi_half: bad negative-block pattern");
        auto Plj = [j, l, N](const PVec& P) { return pidx(P, -l, N) - pidx(P, -j, N); };
        if (kind == HalfKind::E) {
            auto f1 = [B, x, Plj](const PVec& P) {
                return -B(x - Plj(P)) * B(1.0) / (B(x) * B(Plj(P)));
            };
            auto f2 = [B, x, Plj, j, l, N, eta](const PVec& P) {
                cd outv = B(x - cd(j) - eta - Plj(P)) * B(1.0) /
                          (B(x - cd(j) - eta) * B(Plj(P)));
                for (int m = j + 1; m <= l - 1; ++m) {
                    const cd plm = pidx(P, -l, N) - pidx(P, -m, N);
                    outv *= B(plm + 1.0) / B(plm);
                }
                return outv;
            };
            put(-l, -j, f1, eps_shift(-j, N), eps_shift(l, N));
            put(j, l, f2, eps_shift(-j, N), eps_shift(l, N));
        } else {
            auto f1 = [B, x, Plj](const PVec& P) {
                return B(x + Plj(P)) * B(1.0) / (B(x) * B(Plj(P)));
            };
            auto f2 = [B, x, Plj, j, l, N, eta](const PVec& P) {
                cd outv = -B(x - cd(j) - eta + Plj(P)) * B(1.0) /
                          (B(x - cd(j) - eta) * B(Plj(P)));
                for (int m = j + 1; m <= l - 1; ++m) {
                    const cd plm = pidx(P, -l, N) - pidx(P, -m, N);
                    outv *= B(plm - 1.0) / B(plm);
                }
                return outv;
            };
            put(-j, -l, f1, zero_shift(N), zero_shift(N));
            put(l, j, f2, zero_shift(N), zero_shift(N));
        }
        return out;
    }

    // mixed block: E^+_{-k,j} / F^+_{j,-k}, k in 1..N, j in {1..N} or 0 == N+1
    const int k = -((kind == HalfKind::E) ? er : ej);
    const int j = (kind == HalfKind::E) ? ej : er;
    if (k < 1 || k > N || j < 0 || j > N)
        throw InvalidIndexPattern("pi_half: bad mixed pattern");
    const int jv = (j == 0) ? N + 1 : j;
    if (j == k) {
        // j = k case: single matrix unit with the G_P-dressed second term
        auto Gx = [B, N](const PVec& P, cd arg, int skip) {
            cd outv = B(arg + 1.0) / B(arg);
            for (int m = 1; m <= N; ++m) {
                if (m == skip) continue;
                outv *= B(arg - P[m - 1] + 1.0) / B(arg - P[m - 1]);
                outv *= B(arg + P[m - 1] + 1.0) / B(arg + P[m - 1]);
            }
            return outv;
        };
        if (kind == HalfKind::E) {
            auto f = [B, x, j, N, eta, Gx](const PVec& P) {
                const cd Pj = P[j - 1];
                cd outv = -B(x - 2.0 * Pj - 1.0) * B(1.0) * B(x - cd(j) - eta + 1.0) /
                          (B(x) * B(2.0 * Pj + 1.0) * B(x - cd(j) - eta));
                cd second = Gx(P, Pj, j) * B(x - 2.0 * Pj - cd(j) - eta) * B(1.0) /
                            (B(x - cd(j) - eta) * B(2.0 * Pj + 1.0));
                for (int m = 1; m <= j - 1; ++m) {
                    second *= B(Pj + P[m - 1]) / B(Pj + P[m - 1] + 1.0);
                    second *= B(Pj - P[m - 1]) / B(Pj - P[m - 1] + 1.0);
                }
                return outv + second;
            };
            put(j, -j, f, eps_shift(-j, N), eps_shift(-j, N));
        } else {
            auto f = [B, x, j, N, eta, Gx](const PVec& P) {
                const cd Pj = P[j - 1];
                cd outv = B(x + 2.0 * Pj - 1.0) * B(1.0) * B(x - cd(j) - eta + 1.0) /
                          (B(x) * B(2.0 * Pj - 1.0) * B(x - cd(j) - eta));
                cd second = -Gx(P, -Pj, j) * B(x + 2.0 * Pj - cd(j) - eta) * B(1.0) /
                            (B(x - cd(j) - eta) * B(2.0 * Pj - 1.0));
                for (int m = 1; m <= j - 1; ++m) {
                    second *= B(Pj + P[m - 1]) / B(Pj + P[m - 1] - 1.0);
                    second *= B(Pj - P[m - 1]) / B(Pj - P[m - 1] - 1.0);
                }
                return outv + second;
            };
            put(-j, j, f, zero_shift(N), zero_shift(N));
        }
        return out;
    }
    // j != k (cases i and iii; the first m-product skips m = j)
    auto Pjmk = [j, k, N](const PVec& P) { return pidx(P, j, N) + P[k - 1]; };
    if (kind == HalfKind::E) {
        auto f1 = [B, x, Pjmk](const PVec& P) {
            return -B(x - Pjmk(P)) * B(1.0) / (B(x) * B(Pjmk(P)));
        };
        auto f2 = [B, x, Pjmk, j, jv, k, N, eta](const PVec& P) {
            const cd Pj = pidx(P, j, N);
            cd outv = B(x - cd(k) - eta - Pjmk(P)) * B(1.0) /
                      (B(x - cd(k) - eta) * B(Pjmk(P)));
            outv *= B(Pj + 1.0) / B(Pj);
            for (int m = k + 1; m <= N; ++m) {
                if (m == jv) continue;
                outv *= B(Pj + P[m - 1] + 1.0) / B(Pj + P[m - 1]);
            }
            for (int m = jv + 1; m <= N; ++m)
                outv *= B(Pj - P[m - 1] + 1.0) / B(Pj - P[m - 1]);
            return outv;
        };
        put(j, -k, f1, eps_shift(-k, N), eps_shift(-j, N));
        put(k, -j, f2, eps_shift(-k, N), eps_shift(-j, N));
    } else {
        auto f1 = [B, x, Pjmk](const PVec& P) {
            return B(x + Pjmk(P)) * B(1.0) / (B(x) * B(Pjmk(P)));
        };
        auto f2 = [B, x, Pjmk, j, jv, k, N, eta](const PVec& P) {
            const cd Pj = pidx(P, j, N);
            cd outv = -B(x - cd(k) - eta + Pjmk(P)) * B(1.0) /
                      (B(x - cd(k) - eta) * B(Pjmk(P)));
            outv *= B(Pj - 1.0) / B(Pj);
            for (int m = k + 1; m <= N; ++m) {
                if (m == jv) continue;
                outv *= B(Pj + P[m - 1] - 1.0) / B(Pj + P[m - 1]);
            }
            for (int m = jv + 1; m <= N; ++m)
                outv *= B(Pj - P[m - 1] - 1.0) / B(Pj - P[m - 1]);
            return outv;
        };
        put(-k, j, f1, zero_shift(N), zero_shift(N));
        put(-j, k, f2, zero_shift(N), zero_shift(N));
    }
    return out;
}

ShiftedMatrix pi_H(int sign, int j, cd v, cd u, const AlgebraParams& params) {
    const BraidIndex ix(params.N);
    const int dim = ix.dim();
    const int N = params.N;
    ShiftedMatrix out(dim, N);
    auto B = [&](cd a) { return bracket(a, params); };
    const double eta = params.eta;
    // H^-(v) equals H^+(v) on the evaluation module (bracket ratios are
    // r-periodic), so both signs share the same table; the (j,j) and (0,0)
    // entries follow the K-current ratios and the H^- display.
    (void)sign;
    const cd x = v - u - cd(j) / 2.0;
    std::vector<int> shift(N, 0);
    shift[j - 1] = -1;
    if (j < N) shift[j] = 1;  // e^{-Q_{alpha_j}}
    auto cst = [](cd w) {
        return std::function<cd(const PVec&)>([w](const PVec&) { return w; });
    };
    if (j < 1 || j > N) throw InvalidIndexPattern("pi_H: j out of range");
    if (j < N) {
        const cd y = v - u + eta + cd(j) / 2.0;
        for (int p = 0; p < dim; ++p) {
            const int kk = ix.at(p);
            cd w = 1.0;
            if (kk == j) w = B(x + 1.0) / B(x);
            else if (kk == j + 1) w = B(x - 1.0) / B(x);
            else if (kk == -(j + 1)) w = B(y + 1.0) / B(y);
            else if (kk == -j) w = B(y - 1.0) / B(y);
            out.set(p, p, cst(w), shift);
        }
        return out;
    }
    for (int p = 0; p < dim; ++p) {
        const int kk = ix.at(p);
        cd w = 1.0;
        if (kk == N) w = B(x + 1.0) / B(x);
        else if (kk == 0) w = B(x + 1.0) * B(x - 0.5) / (B(x) * B(x + 0.5));
        else if (kk == -N) w = B(x - 0.5) / B(x + 0.5);
        out.set(p, p, cst(w), shift);
    }
    return out;
}

LOperator assemble_L(cd v, cd u, const AlgebraParams& params, const TruncationPolicy& policy) {
    const BraidIndex ix(params.N);
    const int dim = ix.dim();
    LOperator L;
    L.dim = dim;
    std::vector<ShiftedMatrix> K;
    K.reserve(dim);
    for (int p = 0; p < dim; ++p) K.push_back(pi_K(ix.at(p), v, u, params, policy));
    const ShiftedMatrix id = ShiftedMatrix::identity(dim, params.N);
    for (int pi_ = 0; pi_ < dim; ++pi_)
        for (int pj = 0; pj < dim; ++pj) {
            ShiftedMatrix acc(dim, params.N);
            bool any = false;
            for (int pa = std::max(pi_, pj); pa < dim; ++pa) {
                const int i = ix.at(pi_), j = ix.at(pj), a = ix.at(pa);
                const ShiftedMatrix F =
                    (pa == pi_) ? id : pi_half(HalfKind::F, i, a, v, u, params);
                const ShiftedMatrix E =
                    (pa == pj) ? id : pi_half(HalfKind::E, a, j, v, u, params);
                const ShiftedMatrix term = F * K[pa] * E;
                acc = any ? (acc + term) : term;
                any = true;
            }
            L.entries.push_back(acc);
        }
    return L;
}

double dbar_sum_identity_residual(cd u, const PVec& P, const AlgebraParams& params) {
    auto B = [&](cd a) { return bracket(a, params); };
    const double eta = params.eta;
    DynamicalParam s(params.N, P, false);
    double resid = 0.0;
    for (int j = 1; j <= params.N; ++j) {
        const cd lhs = coef(CoefKind::dbar, u, j, -j, s, params);
        cd sum = 0.0;
        for (int k = 1; k <= j - 1; ++k) {
            const cd pjk = P[k - 1] - P[j - 1];  // P_{-j,-k}
            cd term = B(u - cd(k) - eta + pjk) * B(u - cd(k) - eta - pjk) * B(1.0) * B(1.0) /
                      (B(u - cd(k) - eta) * B(u - cd(k) + 1.0 - eta) * B(pjk) * B(pjk));
            for (int m = k + 1; m <= j - 1; ++m) {
                const cd pjm = P[m - 1] - P[j - 1];
                term *= B(pjm - 1.0) * B(pjm + 1.0) / (B(pjm) * B(pjm));
            }
            sum += term;
        }
        const cd rhs = B(u) / B(u + 1.0) *
                       (B(u - cd(j) - eta) / B(u - cd(j) + 1.0 - eta) - sum);
        resid = std::max(resid, std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs)));
    }
    return resid;
}

double e0_sum_identity_residual(cd u, const PVec& P, const AlgebraParams& params) {
    auto B = [&](cd a) { return bracket(a, params); };
    const double eta = params.eta;
    DynamicalParam s(params.N, P, false);
    const cd lhs = coef(CoefKind::e0, u, 0, 0, s, params);
    cd sum = 0.0;
    for (int k = 1; k <= params.N; ++k) {
        const cd Pk = P[k - 1];
        sum += B(u - cd(k) - eta + 0.5 + Pk) * B(u - cd(k) - eta + 0.5 - Pk) * B(1.0) * B(1.0) /
               (B(u - cd(k) - eta) * B(u - cd(k) + 1.0 - eta) * B(Pk + 0.5) * B(Pk - 0.5));
    }
    const cd rhs = B(u - 1.0) * B(u + 0.5) / (B(u + 1.0) * B(u - 0.5)) -
                   B(u) / B(u + 1.0) * sum;
    return std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs));
}

CheckReport check_repLR(cd v, cd u, const PVec& P, const AlgebraParams& params,
                        const TruncationPolicy& policy) {
    CheckReport rep;
    rep.check_id = "repLR";
    const AlgebraParams L0 = params.at_level_zero();
    const BraidIndex ix(L0.N);
    const int dim = ix.dim();
    const LOperator L = assemble_L(v, u, L0, policy);
    const DynamicalParam s(L0.N, P, false);
    const RMatrixValue R = assemble(v - u, s, PrefactorMode::rho0, L0, policy);
    double resid = 0.0;
    std::vector<cd> lvals(static_cast<size_t>(dim) * dim * dim * dim, cd(0.0));
    std::vector<cd> rvals(lvals.size());
    size_t n = 0;
    for (int pi_ = 0; pi_ < dim; ++pi_)
        for (int pj = 0; pj < dim; ++pj)
            for (int pk = 0; pk < dim; ++pk)
                for (int pl = 0; pl < dim; ++pl, ++n) {
                    lvals[n] = L.at(pi_, pj).value(pk, pl, P);
                    rvals[n] = R.entry(ix.at(pj), ix.at(pl), ix.at(pi_), ix.at(pk));
                }
    double scale = 0.0;
    for (const cd& rv : rvals) scale = std::max(scale, std::abs(rv));
    for (size_t t = 0; t < lvals.size(); ++t)
        resid = std::max(resid, std::abs(lvals[t] - rvals[t]) / scale);
    rep.samples = static_cast<int>(n);
    rep.max_rel_residual = resid;
    if (resid > 1e-10) {
        // retry up to one overall constant, normalized in the (1,1) sector
        const cd l11 = L.at(ix.pos(1), ix.pos(1)).value(ix.pos(1), ix.pos(1), P);
        const cd r11 = R.entry(1, 1, 1, 1);
        const cd cc = l11 / r11;
        double resid2 = 0.0;
        for (size_t t = 0; t < lvals.size(); ++t)
            resid2 = std::max(resid2, std::abs(lvals[t] / cc - rvals[t]) / scale);
        if (resid2 < resid) {
            rep.notes = "matched only up to a constant gauge factor";
            rep.max_rel_residual = resid2;
        }
    } else {
        rep.notes = "exact match (no constant normalization needed)";
    }
    rep.max_abs_residual = rep.max_rel_residual * scale;
    return rep;
}

CheckReport check_H_decomposition(cd v, cd u, const AlgebraParams& params,
                                  const TruncationPolicy& policy) {
    CheckReport rep;
    rep.check_id = "h_decomposition";
    const AlgebraParams L0 = params.at_level_zero();
    const BraidIndex ix(L0.N);
    const int dim = ix.dim();
    const PVec P(static_cast<size_t>(L0.N), cd(0.83, 0.02));  // entries are P-free
    double resid = 0.0;
    cd worst_const = 1.0;
    for (int j = 1; j <= L0.N; ++j) {
        const cd vp = v - cd(j) / 2.0;  // u + c/4 - j/2 at level 0
        const int next = (j < L0.N) ? (j + 1) : 0;
        const ShiftedMatrix D =
            pi_K(j, vp, u, L0, policy) * pi_K(next, vp, u, L0, policy).inverse_diagonal();
        const ShiftedMatrix H = pi_H(+1, j, v, u, L0);
        cd fit = 0.0;
        for (int p = 0; p < dim; ++p) {
            const cd hv = H.value(p, p, P);
            const cd dv = D.value(p, p, P);
            if (p == 0) fit = dv / hv;
            resid = std::max(resid, std::abs(dv / hv / fit - 1.0));
            if (D.at(p, p).shift != H.at(p, p).shift)
                resid = std::max(resid, 1.0);
        }
        if (std::abs(fit - 1.0) > std::abs(worst_const - 1.0)) worst_const = fit;
        ++rep.samples;
    }
    rep.max_rel_residual = resid;
    if (std::abs(worst_const - 1.0) > 1e-10) rep.notes = "constant normalization applied";
    else rep.notes = "decomposition constant is 1";
    return rep;
}

CheckReport check_relbasicHC(cd u1, cd u2, const PVec& P, const AlgebraParams& params,
                             const TruncationPolicy& policy) {
    CheckReport rep;
    rep.check_id = "relbasicHC";
    const AlgebraParams L0 = params.at_level_zero();
    const BraidIndex ix(L0.N);
    const int dim = ix.dim();
    const cd x = u1 - u2;
    auto B = [&](cd a) { return bracket(a, L0); };
    const cd bbar = B(x) / B(x + 1.0);
    double resid = 0.0;
    for (int pj = 0; pj + 1 < dim; ++pj) {
        const int j = ix.at(pj);
        const int jn = ix.at(pj + 1);
        const ShiftedMatrix K1 = pi_K(jn, u1, 0.0, L0, policy);
        // E relation: K^{-1}(u1) E(u2) K(u1) = E(u2)/bbar* - E(u1) c*(x,P_{j,jn})/bbar*
        {
            const ShiftedMatrix E2 = pi_half(HalfKind::E, jn, j, u2, 0.0, L0);
            const ShiftedMatrix E1 = pi_half(HalfKind::E, jn, j, u1, 0.0, L0);
            const ShiftedMatrix lhs = K1.inverse_diagonal() * E2 * K1;
            const int N = L0.N;
            auto cstar = [B, x, bbar, j, jn, N](const PVec& Pv) {
                const cd pjj = pidx(Pv, j, N) - pidx(Pv, jn, N);
                return B(1.0) * B(pjj + x) / (B(pjj) * B(x + 1.0)) / bbar;
            };
            const ShiftedMatrix rhs =
                E2.scaled(1.0 / bbar) + E1.times_scalar_right(cstar).scaled(-1.0);
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) {
                    const cd a = lhs.value(r, c, P), b = rhs.value(r, c, P);
                    const double sc = std::max({std::abs(a), std::abs(b), 1e-12});
                    if (std::abs(a) + std::abs(b) > 0.0)
                        resid = std::max(resid, std::abs(a - b) / sc);
                }
        }
        // F relation: K(u1) F(u2) K(u1)^{-1} = F(u2)/bbar - cbar(x,(P+h)_{j,jn})/bbar F(u1)
        {
            const ShiftedMatrix F2 = pi_half(HalfKind::F, j, jn, u2, 0.0, L0);
            const ShiftedMatrix F1 = pi_half(HalfKind::F, j, jn, u1, 0.0, L0);
            const ShiftedMatrix lhs = K1 * F2 * K1.inverse_diagonal();
            // (P+h) on the evaluation module reads P shifted by the state's
            // weight: a left diagonal multiplier
            const int N = L0.N;
            ShiftedMatrix cbar_diag(dim, N);
            for (int p = 0; p < dim; ++p) {
                const int w = ix.at(p);
                auto f = [B, x, bbar, j, jn, N, w](const PVec& Pv) {
                    PVec Q(Pv);
                    if (w > 0) Q[w - 1] += 1.0;
                    if (w < 0) Q[-w - 1] -= 1.0;
                    const cd pjj = pidx(Q, j, N) - pidx(Q, jn, N);
                    return -B(1.0) * B(pjj - x) / (B(pjj) * B(x + 1.0)) / bbar;
                };
                cbar_diag.set(p, p, f, zero_shift(N));
            }
            const ShiftedMatrix rhs = F2.scaled(1.0 / bbar) + cbar_diag * F1;
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c) {
                    const cd a = lhs.value(r, c, P), b = rhs.value(r, c, P);
                    const double sc = std::max({std::abs(a), std::abs(b), 1e-12});
                    if (std::abs(a) + std::abs(b) > 0.0)
                        resid = std::max(resid, std::abs(a - b) / sc);
                }
        }
        ++rep.samples;
    }
    rep.max_rel_residual = resid;
    return rep;
}

CheckReport check_shift_bookkeeping(cd v, cd u, const AlgebraParams& params,
                                    const TruncationPolicy& policy) {
    CheckReport rep;
    rep.check_id = "shift_bookkeeping";
    const AlgebraParams L0 = params.at_level_zero();
    const BraidIndex ix(L0.N);
    const int dim = ix.dim();
    const LOperator L = assemble_L(v, u, L0, policy);
    double bad = 0.0;
    for (int pi_ = 0; pi_ < dim; ++pi_)
        for (int pj = 0; pj < dim; ++pj) {
            const auto want = eps_shift(-ix.at(pj), L0.N);  // e^{-Q_{hat j}}
            for (const auto& en : L.at(pi_, pj).e) {
                if (en.zero) continue;
                if (en.shift != want) bad += 1.0;
            }
            ++rep.samples;
        }
    rep.max_abs_residual = bad;
    rep.max_rel_residual = bad;
    return rep;
}

}  // namespace ebq
