// ebq: evaluate the elliptic dynamical R-matrix and run the verification
// suites from the command line.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input,
// 3 numerical non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "ebq/suites.hpp"

using json = nlohmann::ordered_json;
using namespace ebq;

namespace {

json config_json(const RunConfig& cfg) {
    return json{{"N", cfg.N},          {"q_re", cfg.q_re},   {"q_im", cfg.q_im},
                {"r", cfg.r},          {"c", cfg.c},         {"seed", cfg.seed},
                {"samples", cfg.samples}, {"max_terms", cfg.max_terms}};
}

json report_json(const CheckReport& r) {
    return json{{"check_id", r.check_id},
                {"samples", r.samples},
                {"max_abs_residual", r.max_abs_residual},
                {"max_rel_residual", r.max_rel_residual},
                {"tolerance", r.tolerance},
                {"pass", r.pass},
                {"notes", r.notes}};
}

void apply_env_overrides(RunConfig& cfg) {
    if (const char* mt = std::getenv("EBQ_MAX_TERMS")) {
        const int v = std::atoi(mt);
        if (v >= 8) cfg.max_terms = v;
    }
}

int cmd_eval_rmatrix(const RunConfig& cfg, double u_re, double u_im,
                     const std::vector<double>& s_in, const std::string& prefactor,
                     const std::string& out_path) {
    const AlgebraParams P = cfg.params();
    std::vector<cd> s(P.N);
    if (!s_in.empty() && static_cast<int>(s_in.size()) != P.N) {
        std::cerr << "ebq: --s needs exactly N values\n";
        return 2;
    }
    for (int k = 0; k < P.N; ++k) s[k] = s_in.empty() ? cd(0.9 + 0.6 * k) : cd(s_in[k]);
    const DynamicalParam dyn(P.N, s, true, &P);
    const PrefactorMode mode =
        (prefactor == "rho0") ? PrefactorMode::rho0 : PrefactorMode::none;
    const RMatrixValue R = assemble(cd(u_re, u_im), dyn, mode, P, cfg.policy());
    const BraidIndex ix(P.N);
    const int dim = ix.dim();
    json entries = json::array();
    auto weight = [&](int j, int k) {
        if (j == 0) return 0;
        return (std::abs(j) == k) ? (j > 0 ? 1 : -1) : 0;
    };
    for (int pi = 0; pi < dim; ++pi)
        for (int pj = 0; pj < dim; ++pj)
            for (int pk = 0; pk < dim; ++pk)
                for (int pl = 0; pl < dim; ++pl) {
                    const int i = ix.at(pi), j = ix.at(pj), k = ix.at(pk), l = ix.at(pl);
                    bool allowed = true;
                    for (int m = 1; m <= P.N && allowed; ++m)
                        if (weight(i, m) + weight(j, m) != weight(k, m) + weight(l, m))
                            allowed = false;
                    if (!allowed) continue;
                    const cd v = R.at(pi * dim + pj, pk * dim + pl);
                    entries.push_back(json{{"row", {i, j}},
                                           {"col", {k, l}},
                                           {"re", v.real()},
                                           {"im", v.imag()}});
                }
    json doc{{"N", P.N},
             {"u", {{"re", u_re}, {"im", u_im}}},
             {"s", json::array()},
             {"prefactor_mode", prefactor},
             {"entries", entries}};
    for (const cd& sv : s) doc["s"].push_back(json{{"re", sv.real()}, {"im", sv.imag()}});
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "ebq: cannot open " << out_path << "\n";
        return 2;
    }
    f << doc.dump(2) << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, const std::string& out_path) {
    auto reports = run_suite(suite, cfg);
    // canonical order: sorted by check id, failures first
    std::stable_sort(reports.begin(), reports.end(),
                     [](const CheckReport& a, const CheckReport& b) {
                         return a.check_id < b.check_id;
                     });
    std::stable_partition(reports.begin(), reports.end(),
                          [](const CheckReport& r) { return !r.pass; });
    json arr = json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        arr.push_back(report_json(r));
        all_pass = all_pass && r.pass;
    }
    json doc{{"schema", "ebq-report/1"}, {"config", config_json(cfg)}, {"suite", suite},
             {"reports", arr}};
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "ebq: cannot open " << out_path << "\n";
            return 2;
        }
        f << doc.dump(2) << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    for (const auto& r : reports)
        std::cerr << (r.pass ? "[pass] " : "[FAIL] ") << r.check_id
                  << "  max_rel=" << r.max_rel_residual << " tol=" << r.tolerance
                  << (r.notes.empty() ? "" : ("  (" + r.notes + ")")) << "\n";
    return all_pass ? 0 : 1;
}

int cmd_schema() {
    json doc{{"schema", "ebq-report/1"},
             {"report_fields",
              {"check_id", "samples", "max_abs_residual", "max_rel_residual", "tolerance",
               "pass", "notes"}},
             {"check_ids", all_check_ids()},
             {"exit_codes",
              {{"0", "all checks pass"},
               {"1", "at least one check failed"},
               {"2", "invalid input"},
               {"3", "numerical non-convergence"}}}};
    std::cout << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"elliptic B-type quantum group: R-matrix evaluation and identity checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    double u_re = 0.3, u_im = 0.0;
    std::vector<double> s_in;
    std::string prefactor = "none", out_path, suite = "all";

    auto add_params = [&](CLI::App* c) {
        c->add_option("--N", cfg.N, "rank (1..3 exercised)");
        c->add_option("--q-re", cfg.q_re, "Re q");
        c->add_option("--q-im", cfg.q_im, "Im q");
        c->add_option("--r", cfg.r, "elliptic exponent r (p = q^{2r})");
        c->add_option("--c", cfg.c, "level");
        c->add_option("--seed", cfg.seed, "RNG seed");
        c->add_option("--samples", cfg.samples, "sample points per check");
    };

    auto* ev = app.add_subcommand("eval-rmatrix", "write the R-matrix as JSON");
    add_params(ev);
    ev->add_option("--u", u_re, "Re u (spectral parameter)");
    ev->add_option("--u-im", u_im, "Im u");
    ev->add_option("--s", s_in, "dynamical parameter components (N values)");
    ev->add_option("--prefactor", prefactor, "none|rho0")
        ->check(CLI::IsMember({"none", "rho0"}));
    ev->add_option("--out", out_path, "output file")->required();

    auto* vf = app.add_subcommand("verify", "run a verification suite");
    add_params(vf);
    vf->add_option("--suite", suite, "special|modes|exchange|face|dybe|repLR|vertex|all");
    vf->add_option("--out", out_path, "report file (stdout when omitted)");

    app.add_subcommand("schema", "print the report schema");

    CLI11_PARSE(app, argc, argv);
    apply_env_overrides(cfg);

    try {
        if (ev->parsed()) return cmd_eval_rmatrix(cfg, u_re, u_im, s_in, prefactor, out_path);
        if (vf->parsed()) {
            if (!is_suite(suite)) {
                std::cerr << "ebq: unknown suite '" << suite << "'\n";
                return 2;
            }
            return cmd_verify(cfg, suite, out_path);
        }
        return cmd_schema();
    } catch (const NonConvergent& e) {
        std::cerr << "ebq: non-convergent: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "ebq: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "ebq: invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ebq: error: " << e.what() << "\n";
        return 2;
    }
}
