#include "ebq/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "ebq/relations.hpp"
#include "ebq/rng.hpp"
#include "ebq/vector_rep.hpp"

namespace ebq {

namespace {

CheckReport make_report(const std::string& id, double abs_resid, double rel_resid, double tol,
                        int samples, const std::string& notes = "") {
    CheckReport r;
    r.check_id = id;
    r.samples = samples;
    r.max_abs_residual = abs_resid;
    r.max_rel_residual = rel_resid;
    r.tolerance = tol;
    r.pass = rel_resid < tol;
    r.notes = notes;
    return r;
}

DynamicalParam sample_heights(Sampler& rng, const AlgebraParams& P) {
    for (int t = 0; t < 64; ++t) {
        try {
            return DynamicalParam(P.N, rng.heights(P.N), true, &P);
        } catch (const DomainError&) {
            continue;
        }
    }
    throw DomainError("sample_heights: no generic height vector found");
}

PVec sample_pvec(Sampler& rng, const AlgebraParams& P) { return sample_heights(rng, P).s; }

// ------------------------------ special ------------------------------------

std::vector<CheckReport> suite_special(const RunConfig& cfg) {
    const auto pol = cfg.policy();
    const auto P = cfg.params();
    Sampler rng(cfg.seed);
    std::vector<CheckReport> out;
    {
        double resid = 0.0;
        int n = 0;
        for (int s = 0; s < cfg.samples; ++s) {
            const cd p(rng.uni(0.05, 0.5), rng.uni(-0.2, 0.2));
            const cd z(rng.uni(0.5, 2.0), rng.uni(-0.5, 0.5));
            const cd prod = theta_p(z, p, pol);
            const cd ser = theta_sum(z, p, pol);
            resid = std::max(resid,
                             std::abs(prod - ser) / std::max(std::abs(ser), 1e-10));
            ++n;
        }
        out.push_back(make_report("special.triple_product", resid, resid, 1e-12, n));
    }
    {
        double resid = 0.0;
        for (int s = 0; s < cfg.samples; ++s) {
            const cd p(rng.uni(0.05, 0.5), rng.uni(-0.2, 0.2));
            const cd z(rng.uni(0.5, 2.0), rng.uni(-0.5, 0.5));
            const cd a = theta_p(z, p, pol), b = theta_p(p / z, p, pol);
            resid = std::max(resid, std::abs(a - b) / std::abs(b));
            const cd c1 = theta_p(p * z, p, pol), c2 = -theta_p(z, p, pol) / z;
            resid = std::max(resid, std::abs(c1 - c2) / std::abs(c2));
        }
        out.push_back(make_report("special.theta_symmetry", resid, resid, 1e-12, cfg.samples));
    }
    {
        double resid = 0.0;
        for (int s = 0; s < cfg.samples; ++s) {
            const cd u(rng.uni(-1.5, 1.5), rng.uni(-0.4, 0.4));
            for (bool st : {false, true}) {
                const cd rr = st ? P.rstar : P.r;
                const double scale = std::max(std::abs(bracket(u, P, st, pol)), 1e-30);
                resid = std::max(resid, std::abs(bracket(u + rr, P, st, pol) +
                                                 bracket(u, P, st, pol)) / scale);
                resid = std::max(resid, std::abs(bracket(-u, P, st, pol) +
                                                 bracket(u, P, st, pol)) / scale);
            }
        }
        out.push_back(make_report("special.bracket_identities", resid, resid, 1e-12,
                                  cfg.samples));
    }
    {
        const cd a = theta_p(cd(0.8, 0.6), cd(0.2, 0.3), pol);
        const cd b = theta_p(cd(0.8, 0.6), cd(0.2, 0.3), pol);
        const double resid = (std::memcmp(&a, &b, sizeof(cd)) == 0) ? 0.0 : 1.0;
        out.push_back(make_report("special.determinism", resid, resid, 0.5, 1));
    }
    return out;
}

// ------------------------------- modes -------------------------------------

std::vector<CheckReport> suite_modes(const RunConfig& cfg) {
    std::vector<CheckReport> out;
    const auto pol = cfg.policy();
    Sampler rng(cfg.seed + 1);
    double cece = 0.0, alpha = 0.0, mixed = 0.0, gramsym = 0.0;
    for (int N = 1; N <= 3; ++N) {
        const AlgebraParams P(N, cd(cfg.q_re, cfg.q_im), cd(cfg.r), cd(cfg.c));
        const cd qq = P.qpow(1) - P.qpow(-1);
        for (int m = 1; m <= 6; ++m) {
            // closed forms of the orthonormal-mode commutators
            const cd pm = std::pow(P.p, m), psm = std::pow(P.pstar, m);
            const cd common = (1.0 - pm) / (1.0 - psm) * P.qpow(-P.c * cd(m));
            const double eta = P.eta;
            const cd diag_form = P.qnum(P.c * cd(m)) * P.qnum(eta * m) *
                                 P.qnum(2.0 * (eta + 1.0) * m) /
                                 (cd(m) * qq * qq * std::pow(P.qnum(m), 3) *
                                  P.qnum(2.0 * eta * m) * P.qnum((eta + 1.0) * m)) *
                                 common;
            for (double sgn : {1.0, -1.0}) {
                auto lab = [&](double sg, int j) {
                    return sg > 0 ? EpsLabel::plus(j) : EpsLabel::minus(j);
                };
                for (int j = 1; j <= N; ++j) {
                    const cd got = commutator(eps_vector(lab(sgn, j), m, P),
                                              eps_vector(lab(sgn, j), -m, P), P);
                    cece = std::max(cece, std::abs(got - diag_form) / std::abs(diag_form));
                    const cd opp = commutator(eps_vector(lab(sgn, j), m, P),
                                              eps_vector(lab(-sgn, j), -m, P), P);
                    const cd opp_form =
                        -sgn * P.qpow(sgn * j * m) * P.qnum(P.c * cd(m)) * P.qnum(eta * m) /
                        (cd(m) * std::pow(P.qnum(m), 3) * qq * P.qnum(2.0 * eta * m)) *
                        common *
                        (P.qpow(sgn * (eta + j) * m) * P.qnum(m) +
                         sgn * P.qpow(-sgn * (j - 1.0) * m) * P.qnum_plus(eta * m));
                    cece = std::max(cece, std::abs(opp - opp_form) / std::abs(opp_form));
                    for (int k = 1; k <= N; ++k) {
                        if (k == j) continue;
                        const double sg = (k > j) ? 1.0 : -1.0;
                        const cd same = commutator(eps_vector(lab(sgn, j), m, P),
                                                   eps_vector(lab(sgn, k), -m, P), P);
                        const cd same_form = -sgn * sg *
                                             P.qpow(-sgn * (sg * eta + k - j) * m) *
                                             P.qnum(P.c * cd(m)) * P.qnum(eta * m) /
                                             (cd(m) * qq * std::pow(P.qnum(m), 2) *
                                              P.qnum(2.0 * eta * m)) *
                                             common;
                        cece = std::max(cece, std::abs(same - same_form) / std::abs(same_form));
                        const cd oppk = commutator(eps_vector(lab(sgn, j), m, P),
                                                   eps_vector(lab(-sgn, k), -m, P), P);
                        const cd oppk_form = -sgn * P.qpow(sgn * (eta + j + k) * m) *
                                             P.qnum(P.c * cd(m)) * P.qnum(eta * m) /
                                             (cd(m) * qq * std::pow(P.qnum(m), 2) *
                                              P.qnum(2.0 * eta * m)) *
                                             common;
                        cece = std::max(cece, std::abs(oppk - oppk_form) / std::abs(oppk_form));
                    }
                    // mixed [alpha_{i,m}, E^{sgn j}_{-m}]
                    for (int i = 1; i <= N; ++i) {
                        std::vector<cd> unit(N, cd(0.0));
                        unit[i - 1] = 1.0;
                        const cd got2 = commutator(ModeVector(m, unit),
                                                   eps_vector(lab(sgn, j), -m, P), P);
                        const cd want = sgn * P.qnum(P.c * cd(m)) /
                                        (cd(m) * (P.qpow(m) - P.qpow(-m))) * common *
                                        (P.qpow(-sgn * m) * cd(i == j ? 1 : 0) -
                                         cd(i == j - 1 ? 1 : 0));
                        const double sc = std::max(
                            std::abs(P.qnum(P.c * cd(m)) /
                                     (cd(m) * (P.qpow(m) - P.qpow(-m))) * common),
                            1e-30);
                        mixed = std::max(mixed, std::abs(got2 - want) / sc);
                    }
                }
                // alphaAA reconstructions
                for (int j = 1; j < N; ++j) {
                    const auto a = eps_vector(lab(sgn, j), m, P);
                    const auto b = eps_vector(lab(sgn, j + 1), m, P);
                    const cd scale = sgn * P.qnum(m) * P.qnum(m) * qq;
                    for (int k = 0; k < N; ++k) {
                        const cd got = scale * (a.coeffs[k] - P.qpow(-sgn * m) * b.coeffs[k]);
                        alpha = std::max(alpha,
                                         std::abs(got - (k == j - 1 ? cd(1.0) : cd(0.0))));
                    }
                }
            }
            {
                const auto a = eps_vector(EpsLabel::plus(N), m, P);
                const auto b = eps_vector(EpsLabel::minus(N), m, P);
                const cd scale = P.qnum(m) * (P.qpow(cd(m) / 2.0) - P.qpow(-cd(m) / 2.0));
                for (int k = 0; k < N; ++k) {
                    const cd got = scale * (P.qpow(-cd(m) / 2.0) * a.coeffs[k] -
                                            P.qpow(cd(m) / 2.0) * b.coeffs[k]);
                    alpha = std::max(alpha,
                                     std::abs(got - (k == N - 1 ? cd(1.0) : cd(0.0))));
                }
            }
            // gram symmetry + commutator antisymmetry on random vectors
            {
                const auto g = gram(m, P);
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j)
                        gramsym = std::max(gramsym, std::abs(g[i * N + j] - g[j * N + i]));
                std::vector<cd> xv(N), yv(N);
                for (int k = 0; k < N; ++k) {
                    xv[k] = cd(rng.uni(-1, 1), rng.uni(-1, 1));
                    yv[k] = cd(rng.uni(-1, 1), rng.uni(-1, 1));
                }
                const ModeVector X(m, xv), Y(-m, yv);
                gramsym = std::max(gramsym,
                                   std::abs(commutator(X, Y, P) + commutator(Y, X, P)));
            }
        }
    }
    out.push_back(make_report("modes.cEcE", cece, cece, 1e-10, 3 * 6));
    out.push_back(make_report("modes.alphaAA", alpha, alpha, 1e-12, 3 * 6));
    out.push_back(make_report("modes.mixed_comm", mixed, mixed, 1e-10, 3 * 6));
    out.push_back(make_report("modes.gram_symmetry", gramsym, gramsym, 1e-13, 3 * 6));
    {
        const auto P = cfg.params().at_level(1.0);
        double resid = 0.0;
        int n = 0;
        for (int s = 0; s < cfg.samples; ++s) {
            const double rad = rng.uni(0.02, 0.4) * std::abs(P.q);
            const double ang = rng.uni(0.0, 6.28318);
            const cd x = rad * cd(std::cos(ang), std::sin(ang));
            for (auto sector : {FermionSector::NS, FermionSector::R}) {
                const cd sum = fermion_contraction(sector, x, P, cfg.policy());
                const cd closed = fermion_contraction_closed(sector, x, P);
                resid = std::max(resid, std::abs(sum - closed) / std::abs(closed));
                ++n;
            }
        }
        out.push_back(make_report("modes.fermion", resid, resid, 1e-10, n));
    }
    return out;
}

// ------------------------------ exchange -----------------------------------

std::vector<CheckReport> relation_reports(const std::vector<RelationSpec>& rels,
                                          const std::string& prefix, const RunConfig& cfg,
                                          const AlgebraParams& P, double tol) {
    std::vector<CheckReport> out;
    double worst = 0.0, worst_inv = 0.0, worst_pind = 0.0;
    int pts = 0;
    std::string notes;
    for (const auto& rel : rels) {
        const auto rep = verify_closed_form(rel, cfg.samples, cfg.seed ^ 0x9e3779b9, P,
                                            cfg.policy(), tol);
        worst = std::max(worst, rep.max_rel_residual);
        worst_inv = std::max(worst_inv, rep.ratio_inverse_residual);
        worst_pind = std::max(worst_pind, rep.p_independence_residual);
        pts += rep.points;
        if (!rep.pass && notes.empty()) notes = "first failure: " + rep.id + " " + rep.note;
    }
    out.push_back(make_report(prefix, worst, worst, tol, pts, notes));
    out.push_back(make_report(prefix + ".ratio_inverse", worst_inv, worst_inv, 1e-10, pts));
    out.push_back(
        make_report(prefix + ".p_independence", worst_pind, worst_pind, 1e-10, pts));
    return out;
}

std::vector<CheckReport> suite_exchange(const RunConfig& cfg) {
    std::vector<CheckReport> out;
    const auto P = cfg.params();
    for (auto& r : relation_reports(kk_relations(P), "exchange.kk", cfg, P, 1e-8))
        out.push_back(r);
    for (auto& r : relation_reports(kef_relations(P), "exchange.kef", cfg, P, 1e-8))
        out.push_back(r);
    for (auto& r : relation_reports(relKK_relations(P), "exchange.relKK", cfg, P, 1e-8))
        out.push_back(r);
    for (auto& r : relation_reports(relEK_relations(P), "exchange.relEK", cfg, P, 1e-8))
        out.push_back(r);
    {
        const double resid = psikk_vector_residual(P);
        out.push_back(make_report("exchange.psikk", resid, resid, 1e-12, 12));
    }
    return out;
}

std::vector<CheckReport> suite_vertex(const RunConfig& cfg) {
    std::vector<CheckReport> out;
    const auto P1 = cfg.params().at_level(1.0);
    for (auto& r : relation_reports(vertex_relations(P1), "vertex.exchange", cfg, P1, 1e-8))
        out.push_back(r);
    {
        std::string detail;
        const bool ok = vertex_exponent_check(P1, &detail);
        out.push_back(make_report("vertex.fractional_exponents", ok ? 0.0 : 1.0,
                                  ok ? 0.0 : 1.0, 0.5, 2, detail));
    }
    return out;
}

// -------------------------------- face -------------------------------------

std::vector<CheckReport> suite_face(const RunConfig& cfg) {
    std::vector<CheckReport> out;
    Sampler rng(cfg.seed + 2);
    double wc = 0.0, init = 0.0, bbar = 0.0, ginv = 0.0;
    double uni_off = 0.0, uni_diag = 0.0, cross = 0.0, refl = 0.0, inv2 = 0.0, rho = 0.0;
    std::string uni_notes, cross_notes, rho_notes;
    int nsamp = 0;
    for (int N = 1; N <= 3; ++N) {
        const AlgebraParams P(N, cd(cfg.q_re, cfg.q_im), cd(cfg.r), cd(cfg.c));
        for (int s = 0; s < std::max(1, cfg.samples / 2); ++s) {
            const auto a = sample_heights(rng, P);
            const cd u = rng.u_point();
            wc = std::max(wc, check_weight_conservation(u, a, P).max_abs_residual);
            init = std::max(init, check_initial_condition(a, P).max_abs_residual);
            bbar = std::max(bbar, check_bbar_spread(u, a, P).max_abs_residual);
            ginv = std::max(ginv, check_g_inversion(a, P).max_abs_residual);
            {
                const auto rep = check_unitarity(u, a, P, cfg.policy());
                uni_off = std::max(uni_off, rep.max_abs_residual);
                uni_diag = std::max(uni_diag, rep.max_rel_residual);
                if (!rep.notes.empty()) uni_notes = rep.notes;
            }
            {
                const auto rep = check_crossing(u, a, P, cfg.policy());
                cross = std::max(cross, rep.max_rel_residual);
                if (!rep.notes.empty()) cross_notes = rep.notes;
            }
            refl = std::max(refl, check_reflection(u, a, P, cfg.policy()).max_rel_residual);
            inv2 = std::max(inv2, check_inversion2(u, a, P, cfg.policy()).max_rel_residual);
            {
                const auto rep = check_rho_inversion(u, P, cfg.policy());
                rho = std::max(rho, rep.max_rel_residual);
                if (!rep.notes.empty()) rho_notes = rep.notes;
            }
            ++nsamp;
        }
    }
    out.push_back(make_report("face.weight_conservation", wc, wc, 1e-300, nsamp,
                              "structural zeros, exact"));
    out.back().pass = (wc == 0.0);
    out.push_back(make_report("face.initial_condition", init, init, 1e-12, nsamp));
    out.push_back(make_report("face.bbar_spread", bbar, bbar, 1e-14, nsamp));
    out.push_back(make_report("face.g_inversion", ginv, ginv, 1e-10, nsamp));
    {
        auto rep = make_report("face.unitarity", uni_off, std::max(uni_off * 10.0, uni_diag),
                               1e-9, nsamp, uni_notes);
        rep.pass = uni_off < 1e-10 && uni_diag < 1e-9;
        rep.max_abs_residual = uni_off;
        rep.max_rel_residual = uni_diag;
        out.push_back(rep);
    }
    out.push_back(make_report("face.crossing_squared", cross, cross, 1e-9, nsamp, cross_notes));
    out.push_back(make_report("face.reflection", refl, refl, 1e-10, nsamp));
    out.push_back(make_report("face.inversion2", inv2, inv2, 1e-9, nsamp));
    out.push_back(make_report("face.rho_inversion", rho, rho, 1e-10, nsamp, rho_notes));
    return out;
}

std::vector<CheckReport> suite_dybe(const RunConfig& cfg) {
    std::vector<CheckReport> out;
    Sampler rng(cfg.seed + 3);
    for (int N = 1; N <= 2; ++N) {
        const AlgebraParams P(N, cd(cfg.q_re, cfg.q_im), cd(cfg.r), cd(cfg.c));
        double resid = 0.0;
        int n = 0;
        for (int s = 0; s < std::max(5, cfg.samples); ++s) {
            const auto sv = sample_heights(rng, P);
            const cd u1 = rng.u_point(), u2 = rng.u_point(), u3 = rng.u_point();
            resid = std::max(resid,
                             check_dybe(u1, u2, u3, sv, P, cfg.policy()).max_rel_residual);
            ++n;
        }
        // degenerate consistency point u1 = u2
        {
            const auto sv = sample_heights(rng, P);
            const cd w = rng.u_point(), u3 = rng.u_point();
            resid = std::max(resid,
                             check_dybe(w, w, u3, sv, P, cfg.policy()).max_rel_residual);
            ++n;
        }
        out.push_back(make_report("dybe.N" + std::to_string(N), resid, resid, 1e-9, n));
    }
    return out;
}

std::vector<CheckReport> suite_repLR(const RunConfig& cfg) {
    std::vector<CheckReport> out;
    Sampler rng(cfg.seed + 4);
    double match = 0.0, dbar = 0.0, e0 = 0.0, hdec = 0.0, basic = 0.0, shift = 0.0;
    std::string match_notes, h_notes;
    int n = 0;
    for (int N = 1; N <= 3; ++N) {
        const AlgebraParams P(N, cd(cfg.q_re, cfg.q_im), cd(cfg.r), cd(cfg.c));
        for (int s = 0; s < std::max(1, cfg.samples - 2); ++s) {
            const auto Pv = sample_pvec(rng, P);
            const cd v = rng.u_point() + cd(0.0, 0.1), u = rng.u_point();
            {
                const auto rep = check_repLR(v, u, Pv, P, cfg.policy());
                match = std::max(match, rep.max_rel_residual);
                if (!rep.notes.empty()) match_notes = rep.notes;
            }
            dbar = std::max(dbar, dbar_sum_identity_residual(v - u, Pv, P));
            e0 = std::max(e0, e0_sum_identity_residual(v - u, Pv, P));
            {
                const auto rep = check_H_decomposition(v, u, P, cfg.policy());
                hdec = std::max(hdec, rep.max_rel_residual);
                if (!rep.notes.empty()) h_notes = rep.notes;
            }
            basic = std::max(
                basic, check_relbasicHC(v, u, Pv, P, cfg.policy()).max_rel_residual);
            shift = std::max(
                shift, check_shift_bookkeeping(v, u, P, cfg.policy()).max_abs_residual);
            ++n;
        }
    }
    out.push_back(make_report("replr.match", match, match, 1e-10, n, match_notes));
    out.push_back(make_report("replr.proof_dbar_sum", dbar, dbar, 1e-12, n));
    out.push_back(make_report("replr.proof_e0_sum", e0, e0, 1e-12, n));
    out.push_back(make_report("replr.h_decomposition", hdec, hdec, 1e-10, n, h_notes));
    out.push_back(make_report("replr.relbasicHC", basic, basic, 1e-10, n));
    {
        auto rep = make_report("replr.shift_bookkeeping", shift, shift, 0.5, n,
                               "exact lattice bookkeeping");
        rep.pass = (shift == 0.0);
        out.push_back(rep);
    }
    return out;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"special", "modes", "exchange", "face", "dybe", "repLR", "vertex"};
}

bool is_suite(const std::string& name) {
    if (name == "all") return true;
    const auto names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<CheckReport> run_suite(const std::string& name, const RunConfig& cfg) {
    if (name == "special") return suite_special(cfg);
    if (name == "modes") return suite_modes(cfg);
    if (name == "exchange") return suite_exchange(cfg);
    if (name == "face") return suite_face(cfg);
    if (name == "dybe") return suite_dybe(cfg);
    if (name == "repLR") return suite_repLR(cfg);
    if (name == "vertex") {
        RunConfig c1 = cfg;
        c1.c = 1.0;  // vertex operators live at level 1
        return suite_vertex(c1);
    }
    if (name == "all") {
        std::vector<CheckReport> out;
        for (const auto& s : suite_names())
            for (auto& r : run_suite(s, cfg)) out.push_back(std::move(r));
        return out;
    }
    throw std::invalid_argument("run_suite: unknown suite " + name);
}

std::vector<std::string> all_check_ids() {
    return {"special.triple_product", "special.theta_symmetry", "special.bracket_identities",
            "special.determinism", "modes.cEcE", "modes.alphaAA", "modes.mixed_comm",
            "modes.gram_symmetry", "modes.fermion", "exchange.kk",
            "exchange.kk.ratio_inverse", "exchange.kk.p_independence", "exchange.kef",
            "exchange.kef.ratio_inverse", "exchange.kef.p_independence", "exchange.relKK",
            "exchange.relKK.ratio_inverse", "exchange.relKK.p_independence", "exchange.relEK",
            "exchange.relEK.ratio_inverse", "exchange.relEK.p_independence", "exchange.psikk",
            "face.weight_conservation", "face.initial_condition", "face.bbar_spread",
            "face.g_inversion", "face.unitarity", "face.crossing_squared", "face.reflection",
            "face.inversion2", "face.rho_inversion", "dybe.N1", "dybe.N2", "replr.match",
            "replr.proof_dbar_sum", "replr.proof_e0_sum", "replr.h_decomposition",
            "replr.relbasicHC", "replr.shift_bookkeeping", "vertex.exchange",
            "vertex.exchange.ratio_inverse", "vertex.exchange.p_independence",
            "vertex.fractional_exponents"};
}

}  // namespace ebq
