#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ebq/mode_algebra.hpp"

using namespace ebq;

namespace {

double rel_err(cd a, cd b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

// Closed forms of the five orthonormal-mode commutators, written out
// independently of the gram-matrix route the implementation takes.
struct CECEForms {
    const AlgebraParams& P;
    cd common(int m) const {
        const cd pm = std::pow(P.p, m), psm = std::pow(P.pstar, m);
        return (1.0 - pm) / (1.0 - psm) * P.qpow(-P.c * cd(m));
    }
    // [E^{sj}_m, E^{sj}_{-m}]
    cd diag(int m) const {
        const double eta = P.eta;
        return P.qnum(P.c * cd(m)) * P.qnum(eta * m) * P.qnum(2.0 * (eta + 1.0) * m) /
               (cd(m) * std::pow(P.qpow(1) - P.qpow(-1), 2) * std::pow(P.qnum(m), 3) *
                P.qnum(2.0 * eta * m) * P.qnum((eta + 1.0) * m)) *
               common(m);
    }
    // [E^{sj}_m, E^{-sj}_{-m}], s = +-1.  One power of (q - q^{-1}) here,
    // not two: the direct evaluation from the defining commutator fixes the
    // printed power (see decisions ledger).
    cd opp_same_j(double s, int j, int m) const {
        const double eta = P.eta;
        return -s * P.qpow(s * j * m) * P.qnum(P.c * cd(m)) * P.qnum(eta * m) /
               (cd(m) * std::pow(P.qnum(m), 3) * (P.qpow(1) - P.qpow(-1)) *
                P.qnum(2.0 * eta * m)) *
               common(m) *
               (P.qpow(s * (eta + j) * m) * P.qnum(m) +
                s * P.qpow(-s * (j - 1.0) * m) * P.qnum_plus(eta * m));
    }
    // [E^{sj}_m, E^{sk}_{-m}], j != k
    cd same_sign(double s, int j, int k, int m) const {
        const double eta = P.eta;
        const double sg = (k > j) ? 1.0 : -1.0;
        return -s * sg * P.qpow(-s * (sg * eta + k - j) * m) * P.qnum(P.c * cd(m)) *
               P.qnum(eta * m) /
               (cd(m) * (P.qpow(1) - P.qpow(-1)) * std::pow(P.qnum(m), 2) *
                P.qnum(2.0 * eta * m)) *
               common(m);
    }
    // [E^{sj}_m, E^{-sk}_{-m}], j != k
    cd opp_sign(double s, int j, int k, int m) const {
        const double eta = P.eta;
        return -s * P.qpow(s * (eta + j + k) * m) * P.qnum(P.c * cd(m)) * P.qnum(eta * m) /
               (cd(m) * (P.qpow(1) - P.qpow(-1)) * std::pow(P.qnum(m), 2) *
                P.qnum(2.0 * eta * m)) *
               common(m);
    }
};

}  // namespace

TEST_CASE("root data pairing matrix") {
    RootData r3(3);
    CHECK(r3.at(0, 0) == 2.0);
    CHECK(r3.at(1, 1) == 2.0);
    CHECK(r3.at(2, 2) == 1.0);
    CHECK(r3.at(0, 1) == -1.0);
    CHECK(r3.at(1, 2) == -1.0);
    CHECK(r3.at(0, 2) == 0.0);
    RootData r1(1);
    CHECK(r1.at(0, 0) == 1.0);
}

TEST_CASE("gram matrix: trivial zeros, N=1 hand value, symmetry") {
    const AlgebraParams P3(3, cd(0.4, 0.1), cd(5.0), cd(1.7));
    auto g = gram(2, P3);
    CHECK(g[0 * 3 + 2] == cd(0.0));  // b_{13} = 0
    CHECK(g[2 * 3 + 0] == cd(0.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(g[i * 3 + j] - g[j * 3 + i]) == 0.0);

    // N=1, m=1: single entry [1]_q [c]_q (1-p)/(1-p*) q^{-c}, with [1]_q = 1
    const AlgebraParams P1(1, cd(0.45), cd(4.3), cd(1.2));
    auto g1 = gram(1, P1);
    const cd expect = P1.qnum(P1.c) * (1.0 - P1.p) / (1.0 - P1.pstar) * P1.qpow(-P1.c);
    CHECK(rel_err(g1[0], expect) < 1e-14);
}

TEST_CASE("commutator: degree mismatch and antisymmetry") {
    const AlgebraParams P2(2, cd(0.45, 0.05), cd(4.3), cd(1.2));
    ModeVector X(2, {cd(1.0, 0.3), cd(0.2, -0.1)});
    ModeVector Ybad(3, {cd(0.5), cd(1.0)});
    CHECK(commutator(X, Ybad, P2) == cd(0.0));
    ModeVector Y(-2, {cd(-0.4, 0.2), cd(0.9, 0.1)});
    CHECK(rel_err(commutator(X, Y, P2), -commutator(Y, X, P2)) < 1e-13);
}

TEST_CASE("all five orthonormal-mode commutator formulas") {
    const std::vector<AlgebraParams> pool = {
        AlgebraParams(1, cd(0.45, 0.05), cd(4.3), cd(1.2)),
        AlgebraParams(2, cd(0.45, 0.05), cd(4.3), cd(1.2)),
        AlgebraParams(3, cd(0.6, -0.1), cd(3.4), cd(1.7)),
    };
    for (const auto& P : pool) {
        CECEForms forms{P};
        for (int m = 1; m <= 6; ++m) {
            for (double s : {1.0, -1.0}) {
                auto lab = [&](double sg, int j) {
                    return sg > 0 ? EpsLabel::plus(j) : EpsLabel::minus(j);
                };
                for (int j = 1; j <= P.N; ++j) {
                    // diagonal (same sign, same j)
                    {
                        const cd lhs = commutator(eps_vector(lab(s, j), m, P),
                                                  eps_vector(lab(s, j), -m, P), P);
                        CHECK(rel_err(lhs, forms.diag(m)) < 1e-10);
                    }
                    // opposite sign, same j
                    {
                        const cd lhs = commutator(eps_vector(lab(s, j), m, P),
                                                  eps_vector(lab(-s, j), -m, P), P);
                        CHECK(rel_err(lhs, forms.opp_same_j(s, j, m)) < 1e-10);
                    }
                    for (int k = 1; k <= P.N; ++k) {
                        if (k == j) continue;
                        // same sign, j != k, both orderings of (j,k) exercise sgn(k-j)
                        {
                            const cd lhs = commutator(eps_vector(lab(s, j), m, P),
                                                      eps_vector(lab(s, k), -m, P), P);
                            CHECK(rel_err(lhs, forms.same_sign(s, j, k, m)) < 1e-10);
                        }
                        // opposite sign, j != k
                        {
                            const cd lhs = commutator(eps_vector(lab(s, j), m, P),
                                                      eps_vector(lab(-s, k), -m, P), P);
                            CHECK(rel_err(lhs, forms.opp_sign(s, j, k, m)) < 1e-10);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("simple-root reconstruction from orthonormal modes") {
    const std::vector<AlgebraParams> pool = {
        AlgebraParams(1, cd(0.45, 0.05), cd(4.3), cd(1.2)),
        AlgebraParams(2, cd(0.45, 0.05), cd(4.3), cd(1.2)),
        AlgebraParams(3, cd(0.6, -0.1), cd(3.4), cd(1.7)),
    };
    for (const auto& P : pool) {
        for (int m : {1, 2, 3, -1, -2, 5}) {
            const cd qq = P.qpow(1) - P.qpow(-1);
            // alpha_{j,m} = +-[m]^2 (q-q^{-1}) (E^{+-j}_m - q^{-+m} E^{+-(j+1)}_m), j < N
            for (int j = 1; j < P.N; ++j) {
                for (double s : {1.0, -1.0}) {
                    auto lab = [&](int jj) {
                        return s > 0 ? EpsLabel::plus(jj) : EpsLabel::minus(jj);
                    };
                    const auto a = eps_vector(lab(j), m, P);
                    const auto b = eps_vector(lab(j + 1), m, P);
                    const cd scale = s * P.qnum(m) * P.qnum(m) * qq;
                    double resid = 0.0;
                    for (int k = 0; k < P.N; ++k) {
                        const cd got = scale * (a.coeffs[k] - P.qpow(-s * m) * b.coeffs[k]);
                        const cd want = (k == j - 1) ? cd(1.0) : cd(0.0);
                        resid = std::max(resid, std::abs(got - want));
                    }
                    CHECK(resid < 1e-12);
                }
            }
            // alpha_{N,m} = [m](q^{m/2}-q^{-m/2})(q^{-m/2} E^{+N}_m - q^{m/2} E^{-N}_m)
            {
                const auto a = eps_vector(EpsLabel::plus(P.N), m, P);
                const auto b = eps_vector(EpsLabel::minus(P.N), m, P);
                const cd scale = P.qnum(m) * (P.qpow(cd(m) / 2.0) - P.qpow(-cd(m) / 2.0));
                double resid = 0.0;
                for (int k = 0; k < P.N; ++k) {
                    const cd got = scale * (P.qpow(-cd(m) / 2.0) * a.coeffs[k] -
                                            P.qpow(cd(m) / 2.0) * b.coeffs[k]);
                    const cd want = (k == P.N - 1) ? cd(1.0) : cd(0.0);
                    resid = std::max(resid, std::abs(got - want));
                }
                CHECK(resid < 1e-12);
            }
        }
    }
}

TEST_CASE("mixed commutators [alpha_{i,m}, E^{+-j}_{-m}]") {
    const std::vector<AlgebraParams> pool = {
        AlgebraParams(1, cd(0.45, 0.05), cd(4.3), cd(1.2)),
        AlgebraParams(2, cd(0.45, 0.05), cd(4.3), cd(1.2)),
        AlgebraParams(3, cd(0.6, -0.1), cd(3.4), cd(1.7)),
    };
    for (const auto& P : pool) {
        for (int m = 1; m <= 6; ++m) {
            const cd pm = std::pow(P.p, m), psm = std::pow(P.pstar, m);
            const cd common = P.qnum(P.c * cd(m)) / (cd(m) * (P.qpow(m) - P.qpow(-m))) *
                              (1.0 - pm) / (1.0 - psm) * P.qpow(-P.c * cd(m));
            for (int i = 1; i <= P.N; ++i)
                for (int j = 1; j <= P.N; ++j)
                    for (double s : {1.0, -1.0}) {
                        std::vector<cd> unit(P.N, cd(0.0));
                        unit[i - 1] = 1.0;
                        ModeVector alpha(m, unit);
                        const auto eps = eps_vector(
                            s > 0 ? EpsLabel::plus(j) : EpsLabel::minus(j), -m, P);
                        const cd lhs = commutator(alpha, eps, P);
                        const cd want = s * common *
                                        (P.qpow(-s * m) * cd(i == j ? 1.0 : 0.0) -
                                         cd(i == j - 1 ? 1.0 : 0.0));
                        CHECK(std::abs(lhs - want) /
                                  std::max(1e-300, std::abs(common)) < 1e-10);
                    }
        }
    }
}

TEST_CASE("eps^0 mixing symmetry") {
    const AlgebraParams P(2, cd(0.45, 0.05), cd(4.3), cd(1.2));
    const auto e0 = eps_vector(EpsLabel::zero(), 3, P);
    const auto ep = eps_vector(EpsLabel::plus(P.N), 3, P);
    const auto em = eps_vector(EpsLabel::minus(P.N), 3, P);
    const cd scale = P.qnum(cd(3) / 2.0) / P.qnum(3);
    for (int k = 0; k < P.N; ++k)
        CHECK(std::abs(e0.coeffs[k] - scale * (ep.coeffs[k] + em.coeffs[k])) == 0.0);
}

TEST_CASE("fermion contractions: mode sums vs closed forms") {
    const AlgebraParams P(2, cd(0.45, 0.05), cd(4.3), cd(1.0));
    TruncationPolicy pol;
    // R sector zero mode
    CHECK(rel_err(fermion_contraction(FermionSector::R, 0.0, P, pol),
                  1.0 / (P.qpow(0.5) + P.qpow(-0.5))) < 1e-15);
    // NS leading coefficient of x^{1/2} is Nf (q^{1/2}+q^{-1/2}) = 1
    {
        const cd x(1e-8, 0.0);
        const cd lead = fermion_contraction(FermionSector::NS, x, P, pol) / std::sqrt(x);
        CHECK(std::abs(lead - 1.0) < 1e-6);
    }
    const std::vector<cd> xs = {cd(0.1, 0.05), cd(-0.15, 0.1), cd(0.2, -0.12), cd(0.05, 0.3)};
    for (cd x : xs) {
        for (auto sector : {FermionSector::NS, FermionSector::R}) {
            const cd sum = fermion_contraction(sector, x, P, pol);
            const cd closed = fermion_contraction_closed(sector, x, P);
            CHECK(rel_err(sum, closed) < 1e-10);
        }
    }
    CHECK_THROWS_AS(fermion_contraction(FermionSector::R, cd(0.45, 0.0), P, pol),
                    NonConvergent);
}
