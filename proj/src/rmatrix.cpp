#include "ebq/rmatrix.hpp"

#include <cmath>

namespace ebq {

namespace {

cd safe_div(cd num, cd den, const char* what) {
    if (std::abs(den) < 1e-12) throw PoleError(std::string("pole in ") + what);
    return num / den;
}

}  // namespace

void DynamicalParam::check_generic(const AlgebraParams& params, double floor) const {
    auto br = [&](cd u) { return std::abs(bracket(u, params)); };
    for (int j = 0; j < N; ++j) {
        if (br(s[j]) < floor) throw DomainError("DynamicalParam: [s_j] ~ 0");
        if (br(2.0 * s[j] + 1.0) < floor) throw DomainError("DynamicalParam: [2s_j+1] ~ 0");
        for (int k = 0; k < N; ++k) {
            if (k == j) continue;
            if (br(s[j] - s[k]) < floor) throw DomainError("DynamicalParam: [s_j - s_k] ~ 0");
            if (br(s[j] + s[k]) < floor) throw DomainError("DynamicalParam: [s_j + s_k] ~ 0");
        }
    }
}

cd G_s(int j, const DynamicalParam& s, const AlgebraParams& params) {
    if (j == 0 || std::abs(j) > params.N) throw InvalidIndexPattern("G_s: bad index");
    auto br = [&](cd u) { return bracket(u, params); };
    const cd sj = s.lookup(j);
    cd out = safe_div(br(sj + 1.0), br(sj), "G_s");
    for (int m = 1; m <= params.N; ++m) {
        if (m == std::abs(j)) continue;
        const cd sm = s.lookup(m);
        out *= safe_div(br(sj - sm + 1.0), br(sj - sm), "G_s");
        out *= safe_div(br(sj + sm + 1.0), br(sj + sm), "G_s");
    }
    return out;
}

cd H_s(const DynamicalParam& s, const AlgebraParams& params) {
    auto br = [&](cd u) { return bracket(u, params); };
    cd out = 0.0;
    for (int a = 1; a <= params.N; ++a)
        for (int k : {a, -a}) {
            const cd sk = s.lookup(k);
            out += safe_div(br(sk + 0.5 + 2.0 * params.eta), br(sk + 0.5), "H_s") *
                   G_s(k, s, params);
        }
    return out;
}

namespace {

// product bound: an index value of 0 is read as N+1 (the order identifies
// N+1 with 0), so prod_{m=1}^{k-1} runs to N there.
int bound_of(int idx, int N) { return idx == 0 ? N + 1 : idx; }

// the three printed branches of d / dbar for the ordered pair (j1 < j2)
cd d_coef(bool barred, cd u, int j1, int j2, const DynamicalParam& s,
          const AlgebraParams& params) {
    const BraidIndex ix(params.N);
    auto br = [&](cd x) { return bracket(x, params); };
    const cd s1 = s.lookup(j1), s2 = s.lookup(j2);
    const cd core = safe_div(br(u) * br(1.0) * br(s1 + s2 + 1.0 + params.eta - u),
                             br(params.eta - u) * br(u + 1.0) * br(s1 + s2 + 1.0), "d");
    const bool j2_le_zero = (j2 == 0) || (j2 > 0);
    const bool j1_ge_zero = (j1 == 0) || (j1 < 0);
    cd out = core;
    if (j2_le_zero) {
        // branch (j < k <= 0): j = j1, k = j2, positive side
        const int jb = bound_of(j1, params.N), kb = bound_of(j2, params.N);
        if (!barred) {
            out *= G_s(j1, s, params);
            for (int m = 1; m <= jb - 1; ++m)
                out *= safe_div(br(s1 - s.lookup(m)), br(s1 - s.lookup(m) + 1.0), "d");
            for (int m = 1; m <= kb - 1; ++m)
                out *= safe_div(br(s2 - s.lookup(m) + 1.0), br(s2 - s.lookup(m)), "d");
        } else {
            out *= G_s(j2, s, params);
            for (int m = 1; m <= jb - 1; ++m)
                out *= safe_div(br(s1 - s.lookup(m) + 1.0), br(s1 - s.lookup(m)), "dbar");
            for (int m = 1; m <= kb - 1; ++m)
                out *= safe_div(br(s2 - s.lookup(m)), br(s2 - s.lookup(m) + 1.0), "dbar");
        }
        return out;
    }
    if (j1_ge_zero) {
        // branch (0 <= -k < -j): j1 = -k, j2 = -j with k > j as positives
        const int k = bound_of(j1 == 0 ? 0 : -j1, params.N);
        const int j = bound_of(j2 == 0 ? 0 : -j2, params.N);
        if (!barred) {
            out *= G_s(j2, s, params);
            for (int m = 1; m <= j - 1; ++m)
                out *= safe_div(br(s2 + s.lookup(m)), br(s2 + s.lookup(m) + 1.0), "d");
            for (int m = 1; m <= k - 1; ++m)
                out *= safe_div(br(s1 + s.lookup(m) + 1.0), br(s1 + s.lookup(m)), "d");
        } else {
            out *= G_s(j1, s, params);
            for (int m = 1; m <= j - 1; ++m)
                out *= safe_div(br(s2 + s.lookup(m) + 1.0), br(s2 + s.lookup(m)), "dbar");
            for (int m = 1; m <= k - 1; ++m)
                out *= safe_div(br(s1 + s.lookup(m)), br(s1 + s.lookup(m) + 1.0), "dbar");
        }
        return out;
    }
    // branch (j < 0 < -k): j1 positive, j2 negative
    {
        const int jb = j1;
        const int kb = -j2;
        if (!barred) {
            out *= G_s(j1, s, params) * G_s(j2, s, params);
            for (int m = 1; m <= jb - 1; ++m)
                out *= safe_div(br(s1 - s.lookup(m)), br(s1 - s.lookup(m) + 1.0), "d");
            for (int m = 1; m <= kb - 1; ++m)
                out *= safe_div(br(s2 + s.lookup(m)), br(s2 + s.lookup(m) + 1.0), "d");
        } else {
            for (int m = 1; m <= jb - 1; ++m)
                out *= safe_div(br(s1 - s.lookup(m) + 1.0), br(s1 - s.lookup(m)), "dbar");
            for (int m = 1; m <= kb - 1; ++m)
                out *= safe_div(br(s2 + s.lookup(m) + 1.0), br(s2 + s.lookup(m)), "dbar");
        }
        return out;
    }
}

}  // namespace

cd coef(CoefKind kind, cd u, int j1, int j2, const DynamicalParam& s,
        const AlgebraParams& params) {
    auto br = [&](cd x) { return bracket(x, params); };
    switch (kind) {
        case CoefKind::b: {
            const cd sv = s.diff(j1, j2);
            return safe_div(br(sv + 1.0) * br(sv - 1.0) * br(u),
                            br(sv) * br(sv) * br(u + 1.0), "b");
        }
        case CoefKind::bbar:
            return safe_div(br(u), br(u + 1.0), "bbar");
        case CoefKind::c: {
            const cd sv = s.diff(j1, j2);
            return safe_div(br(1.0) * br(sv + u), br(sv) * br(u + 1.0), "c");
        }
        case CoefKind::cbar: {
            const cd sv = s.diff(j1, j2);
            return safe_div(br(1.0) * br(sv - u), br(sv) * br(u + 1.0), "cbar");
        }
        case CoefKind::d:
            return d_coef(false, u, j1, j2, s, params);
        case CoefKind::dbar:
            return d_coef(true, u, j1, j2, s, params);
        case CoefKind::e: {
            const cd sj = s.lookup(j1);
            cd out = safe_div(br(1.0) * br(2.0 * sj + 1.0 - u),
                              br(u + 1.0) * br(2.0 * sj + 1.0), "e");
            out += safe_div(br(u) * br(1.0) * br(2.0 * sj + 1.0 + params.eta - u),
                            br(params.eta - u) * br(u + 1.0) * br(2.0 * sj + 1.0), "e") *
                   G_s(j1, s, params);
            return out;
        }
        case CoefKind::e0: {
            const double eta = params.eta;
            cd out = safe_div(br(eta + u) * br(1.0) * br(2.0 * eta - u),
                              br(eta - u) * br(u + 1.0) * br(2.0 * eta), "e0");
            out -= safe_div(br(u) * br(1.0), br(u + 1.0) * br(2.0 * eta), "e0") *
                   H_s(s, params);
            return out;
        }
    }
    throw InvalidIndexPattern("coef: unknown kind");
}

cd prefactor(PrefactorKind kind, cd u, const AlgebraParams& params,
             const TruncationPolicy& policy) {
    const cd z = params.qpow(2.0 * u);
    const cd q2 = params.qpow(2), qm2 = params.qpow(-2);
    const cd xi = params.xi, xi2 = params.xi * params.xi;
    auto brc = [&](cd x, bool st) { return brace(x, params, st, policy); };
    auto rho_tilde = [&](bool st) {
        const cd pp = st ? params.pstar : params.p;
        return brc(xi * z, st) * brc(xi * z, st) * brc(xi2 * qm2 * z, st) * brc(q2 * z, st) /
               (brc(xi2 * z, st) * brc(z, st) * brc(xi * q2 * z, st) * brc(xi * qm2 * z, st)) *
               (brc(pp * xi2 / z, st) * brc(pp / z, st) * brc(pp * xi * q2 / z, st) *
                brc(pp * xi * qm2 / z, st)) /
               (brc(pp * xi / z, st) * brc(pp * xi / z, st) * brc(pp * xi2 * qm2 / z, st) *
                brc(pp * q2 / z, st));
    };
    switch (kind) {
        case PrefactorKind::rho_tilde:
            return rho_tilde(false);
        case PrefactorKind::rho_tilde_star:
            return rho_tilde(true);
        case PrefactorKind::rho0:
            return params.qpow(-1) * cpow(u, 1.0 / params.r, params) * rho_tilde(false);
        case PrefactorKind::Cfun: {
            auto T = [&](cd x) { return theta_p(x, xi2, policy); };
            return T(z) * T(z) * T(xi * q2 * z) * T(xi * qm2 * z) /
                   (T(xi * z) * T(xi * z) * T(q2 * z) * T(qm2 * z));
        }
        case PrefactorKind::rho_hat:
            return params.qpow(-(2.0 * params.N - 1.0) / params.r) *
                   std::sqrt(prefactor(PrefactorKind::Cfun, u, params, policy)) *
                   prefactor(PrefactorKind::rho0, u, params, policy);
        case PrefactorKind::phi: {
            const cd pp = params.p;
            return params.qpow(-1) * cpow(u, 1.0 / params.r, params) *
                   bracket(u - 1.0, params, false, policy) *
                   (brc(xi2 * z, false) * brc(z, false) * brc(xi * q2 * z, false) *
                    brc(xi * qm2 * z, false)) /
                   (brc(xi * z, false) * brc(xi * z, false) * brc(xi2 * q2 * z, false) *
                    brc(qm2 * z, false)) *
                   (brc(pp * xi / z, false) * brc(pp * xi / z, false) *
                    brc(pp * xi2 * q2 / z, false) * brc(pp * qm2 / z, false)) /
                   (brc(pp * xi2 / z, false) * brc(pp / z, false) *
                    brc(pp * xi * q2 / z, false) * brc(pp * xi * qm2 / z, false));
        }
        case PrefactorKind::mu:
        case PrefactorKind::mu_star: {
            const bool st = (kind == PrefactorKind::mu_star);
            const cd pp = st ? params.pstar : params.p;
            const cd rr = st ? params.rstar : params.r;
            return cpow(u, -1.0 + 1.0 / rr, params) *
                   (brc(pp * xi2 * qm2 * z, st) * brc(pp * xi * z, st) * brc(xi * z, st) *
                    brc(q2 * z, st)) /
                   (brc(pp * xi * qm2 * z, st) * brc(pp * z, st) * brc(xi2 * z, st) *
                    brc(xi * q2 * z, st)) *
                   (brc(pp * xi * qm2 / z, st) * brc(pp / z, st) * brc(xi2 / z, st) *
                    brc(xi * q2 / z, st)) /
                   (brc(pp * xi2 * qm2 / z, st) * brc(pp * xi / z, st) * brc(xi / z, st) *
                    brc(q2 / z, st));
        }
        case PrefactorKind::chi: {
            auto T = [&](cd x) { return theta_p(x, xi2, policy); };
            return T(z) * T(qm2 * xi * z) / (T(xi * z) * T(qm2 * xi2 * z));
        }
    }
    throw InvalidIndexPattern("prefactor: unknown kind");
}

RMatrixValue assemble(cd u, const DynamicalParam& s, PrefactorMode mode,
                      const AlgebraParams& params, const TruncationPolicy& policy) {
    const BraidIndex ix(params.N);
    const int dim = ix.dim();
    RMatrixValue R;
    R.N = params.N;
    R.u = u;
    R.s = s.s;
    R.mode = mode;
    R.m.assign(static_cast<size_t>(dim) * dim * dim * dim, cd(0.0));
    auto put = [&](int a, int c, int b, int d, cd v) {
        // coefficient of E_{a,b} (x) E_{c,d}: entry R^{(a,c)}_{(b,d)}
        R.m[(static_cast<size_t>(ix.pos(a)) * dim + ix.pos(c)) * dim * dim +
            static_cast<size_t>(ix.pos(b)) * dim + ix.pos(d)] += v;
    };

    for (int pa = 0; pa < dim; ++pa) {
        const int j = ix.at(pa);
        if (j != 0) put(j, j, j, j, 1.0);
    }
    for (int p1 = 0; p1 < dim; ++p1)
        for (int p2 = p1 + 1; p2 < dim; ++p2) {
            const int j1 = ix.at(p1), j2 = ix.at(p2);
            if (j2 != -j1) {
                put(j1, j2, j1, j2, coef(CoefKind::b, u, j1, j2, s, params));
                put(j2, j1, j2, j1, coef(CoefKind::bbar, u, j1, j2, s, params));
                put(j1, j2, j2, j1, coef(CoefKind::c, u, j1, j2, s, params));
                put(j2, j1, j1, j2, coef(CoefKind::cbar, u, j1, j2, s, params));
            }
            put(-j2, j2, j1, -j1, coef(CoefKind::d, u, j1, j2, s, params));
            put(-j1, j1, j2, -j2, coef(CoefKind::dbar, u, j1, j2, s, params));
        }
    for (int pa = 0; pa < dim; ++pa) {
        const int j = ix.at(pa);
        const cd ev = (j == 0) ? coef(CoefKind::e0, u, 0, 0, s, params)
                               : coef(CoefKind::e, u, j, 0, s, params);
        put(-j, j, j, -j, ev);
    }
    if (mode == PrefactorMode::rho0) {
        const cd scale = prefactor(PrefactorKind::rho0, u, params, policy);
        for (auto& v : R.m) v *= scale;
    }
    return R;
}

cd gauge_F2(const DynamicalParam& s, int jhat, const AlgebraParams& params) {
    if (jhat == 0) return 1.0;  // F(s, s+hat0) := 1 by convention
    auto br = [&](cd x) { return bracket(x, params); };
    const cd sj = s.lookup(jhat);
    cd gj;  // the two-branch G_{s_j}(j)
    if (jhat > 0) {
        gj = 1.0;
        for (int m = 1; m <= jhat - 1; ++m)
            gj *= safe_div(br(sj - s.lookup(m) + 1.0), br(sj - s.lookup(m)), "gauge_F2");
    } else {
        const int aj = -jhat;
        gj = safe_div(br(sj + 1.0), br(sj), "gauge_F2");
        for (int m = 1; m <= params.N; ++m) {
            if (m == aj) continue;
            gj *= safe_div(br(sj - s.lookup(m) + 1.0), br(sj - s.lookup(m)), "gauge_F2");
        }
        for (int m = aj + 1; m <= params.N; ++m)
            gj *= safe_div(br(sj + s.lookup(m) + 1.0), br(sj + s.lookup(m)), "gauge_F2");
    }
    return G_s(jhat, s, params) / gj;
}

cd gauge_F(const DynamicalParam& s, int jhat, const AlgebraParams& params) {
    return std::sqrt(gauge_F2(s, jhat, params));
}

cd gauge_Ga(const DynamicalParam& a, const AlgebraParams& params) {
    auto br = [&](cd x) { return bracket(x, params); };
    cd out = 1.0;
    for (int j = 1; j <= params.N; ++j) out *= br(a.s[j - 1]);
    for (int i = 1; i <= params.N; ++i)
        for (int j = i + 1; j <= params.N; ++j)
            out *= br(a.s[i - 1] - a.s[j - 1]) * br(a.s[i - 1] + a.s[j - 1]);
    return out;
}

int step_index(const DynamicalParam& from, const DynamicalParam& to) {
    int idx = 0;
    bool found = false;
    for (int k = 0; k < from.N; ++k) {
        const cd dv = to.s[k] - from.s[k];
        if (std::abs(dv) < 1e-9) continue;
        if (std::abs(dv - 1.0) < 1e-9 && !found) { idx = k + 1; found = true; continue; }
        if (std::abs(dv + 1.0) < 1e-9 && !found) { idx = -(k + 1); found = true; continue; }
        throw InvalidIndexPattern("step_index: not a single step");
    }
    return idx;  // 0 when equal
}

cd face_weight(const DynamicalParam& a, const DynamicalParam& b, const DynamicalParam& d,
               const DynamicalParam& c, cd u, PrefactorMode mode,
               const AlgebraParams& params, const TruncationPolicy& policy) {
    const int i = step_index(a, b);
    const int j = step_index(b, c);
    const int l = step_index(a, d);
    const int k = step_index(d, c);
    const RMatrixValue R = assemble(u, a, mode, params, policy);
    return R.entry(i, j, k, l);
}

cd to_jmo(const DynamicalParam& a, int i, int j, int k, int l, cd u,
          const AlgebraParams& params, const TruncationPolicy& policy) {
    // W_JMO = R^+ entry / [rho_hat * ([eta][1]/([eta-u][u+1])) * F-ratio];
    // the rho_hat in R^+ = rho_hat barR cancels against the divisor, so the
    // square root of C never enters here.  The F's use principal roots.
    const RMatrixValue R = assemble(u, a, PrefactorMode::none, params, policy);
    const cd core = bracket(params.eta, params) * bracket(1.0, params) /
                    (bracket(params.eta - u, params) * bracket(u + 1.0, params));
    const cd fr = gauge_F(a, i, params) * gauge_F(a.shifted(i), j, params) /
                  (gauge_F(a, l, params) * gauge_F(a.shifted(l), k, params));
    return safe_div(R.entry(i, j, k, l), core * fr, "to_jmo");
}

}  // namespace ebq
