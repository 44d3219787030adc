#pragma once

// Branch-safe complex special functions: q-Pochhammer products (single and
// double index), the odd theta function Theta_p, the brackets [u] and [u]*,
// and the double product {z} = (z; p, xi^2).
//
// Branch policy: theta products and Pochhammer symbols are single-valued in
// z and never need a branch choice.  Everything fractional (z^{1/r}, prefactor
// powers, bracket dressings q^{u^2/r - u}) is evaluated in u-space through the
// one fixed log q held by AlgebraParams.

#include "ebq/params.hpp"

namespace ebq {

// (x; p)_infty = prod_{n>=0} (1 - x p^n), truncated once |x p^n| < tol.
cd qpoch1(cd x, cd p, const TruncationPolicy& policy = {});

// (x; p1, p2)_infty = prod_{n,m>=0} (1 - x p1^n p2^m).
cd qpoch2(cd x, cd p1, cd p2, const TruncationPolicy& policy = {});

// Theta_p(z) = (z; p)_inf (p/z; p)_inf (p; p)_inf.  DomainError on z = 0.
cd theta_p(cd z, cd p, const TruncationPolicy& policy = {});

// Jacobi-triple-product series sum_{n in Z} (-1)^n p^{n(n-1)/2} z^n.
// Companion oracle for theta_p; kept independent of the product route.
cd theta_sum(cd z, cd p, const TruncationPolicy& policy = {});

// z^a with z = q^{2u}, evaluated as exp(2 u a log q).  Single-valued.
cd cpow(cd base_u, cd exponent, const AlgebraParams& params);

// [u] = q^{u^2/r - u} Theta_p(q^{2u}); starred variant uses r*, p*.
cd bracket(cd u, const AlgebraParams& params, bool starred = false,
           const TruncationPolicy& policy = {});

// {z} = (z; p, xi^2)_infty.  Starred variant replaces p by p*.
cd brace(cd z, const AlgebraParams& params, bool starred = false,
         const TruncationPolicy& policy = {});

}  // namespace ebq
