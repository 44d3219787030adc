#pragma once

// Global identity verification in face coordinates: the dynamical
// Yang-Baxter equation, unitarity, crossing, reflection, the 2nd inversion
// relation, the initial condition and the prefactor inversion identities.
//
// Square roots: every identity containing an odd number of square-root
// factors is asserted in squared form (the contract); the signed evaluation
// with principal roots is run as well and reported as a note when it needs
// a global sign ("BranchWarning").

#include <cstdint>
#include <string>
#include <vector>

#include "ebq/rmatrix.hpp"

namespace ebq {

struct CheckReport {
    std::string check_id;
    int samples = 0;
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;
};

// Dynamical Yang-Baxter on V^{x3} with bar R^+ (scalar prefactors cancel):
//   R12(u1-u2, s + w3) R13(u1-u3, s) R23(u2-u3, s + w1)
//     = R23(u2-u3, s) R13(u1-u3, s + w2) R12(u1-u2, s),
// where dynamical shifts read the weight of the spectator slot.
CheckReport check_dybe(cd u1, cd u2, cd u3, const DynamicalParam& s,
                       const AlgebraParams& params, const TruncationPolicy& policy = {});

// sum_g W(a,g;d,c|u) W(a,b;g,c|-u) = delta_{bd}, with rho-hat included
// through the sign-resolved scalar rho^(u) rho^(-u).
CheckReport check_unitarity(cd u, const DynamicalParam& a, const AlgebraParams& params,
                            const TruncationPolicy& policy = {});

// Crossing symmetry, checked per entry in squared form (advisory signed run
// noted), reflection symmetry (even powers of F only, exact form), and the
// 2nd inversion relation (vanishing sums for a != c; squared closed form at
// a = c).
CheckReport check_crossing(cd u, const DynamicalParam& a, const AlgebraParams& params,
                           const TruncationPolicy& policy = {});
CheckReport check_reflection(cd u, const DynamicalParam& a, const AlgebraParams& params,
                             const TruncationPolicy& policy = {});
CheckReport check_inversion2(cd u, const DynamicalParam& a, const AlgebraParams& params,
                             const TruncationPolicy& policy = {});

// Both prefactor inversion identities in squared form, the signed advisory
// run, and the rho0-level corollary that rho^+/rho^{+*} matches the
// rho_0-form ratio up to the constant xi^{1/r - 1/r*}.
CheckReport check_rho_inversion(cd u, const AlgebraParams& params,
                                const TruncationPolicy& policy = {});

// R-matrix structural checks on assembled matrices.
CheckReport check_weight_conservation(cd u, const DynamicalParam& s,
                                      const AlgebraParams& params);
CheckReport check_initial_condition(const DynamicalParam& s, const AlgebraParams& params);
CheckReport check_bbar_spread(cd u, const DynamicalParam& s, const AlgebraParams& params);
CheckReport check_g_inversion(const DynamicalParam& s, const AlgebraParams& params);

}  // namespace ebq
