#include "ebq/special.hpp"

#include <cmath>

namespace ebq {

cd qpoch1(cd x, cd p, const TruncationPolicy& policy) {
    if (x == cd(0.0)) return 1.0;
    if (std::abs(p) >= 1.0) throw NonConvergent("qpoch1: |p| >= 1");
    cd prod = 1.0;
    cd term = x;  // x p^n
    for (int n = 0; n < policy.max_terms; ++n) {
        prod *= (1.0 - term);
        term *= p;
        if (std::abs(term) < policy.tol) return prod;
    }
    throw NonConvergent("qpoch1: max_terms exceeded");
}

cd qpoch2(cd x, cd p1, cd p2, const TruncationPolicy& policy) {
    if (x == cd(0.0)) return 1.0;
    if (std::abs(p1) >= 1.0 || std::abs(p2) >= 1.0) throw NonConvergent("qpoch2: |p| >= 1");
    // prod_n (x p1^n; p2)_infty.  The n-th factor deviates from 1 by
    // O(|x p1^n| / (1-|p2|)), which sets the outer cutoff.
    const double tail_scale = 1.0 / (1.0 - std::abs(p2));
    cd prod = 1.0;
    cd head = x;  // x p1^n
    for (int n = 0; n < policy.max_terms; ++n) {
        prod *= qpoch1(head, p2, policy);
        head *= p1;
        if (std::abs(head) * tail_scale < policy.tol) return prod;
    }
    throw NonConvergent("qpoch2: max_terms exceeded");
}

cd theta_p(cd z, cd p, const TruncationPolicy& policy) {
    if (z == cd(0.0)) throw DomainError("theta_p: z = 0");
    if (p == cd(0.0)) return 1.0 - z;
    return qpoch1(z, p, policy) * qpoch1(p / z, p, policy) * qpoch1(p, p, policy);
}

cd theta_sum(cd z, cd p, const TruncationPolicy& policy) {
    if (z == cd(0.0)) throw DomainError("theta_sum: z = 0");
    // n = 0 term is 1; walk outwards until both tails are below tol.
    cd sum = 1.0;
    cd pos = 1.0, neg = 1.0;     // running (-1)^n p^{n(n-1)/2} z^{+-n}
    cd ppow_pos = 1.0;           // p^{n} multiplier chain: exponent n(n-1)/2
    cd ppow_neg = p;             // for n = -1: p^{(-1)(-2)/2} = p
    bool pos_done = false, neg_done = false;
    for (int n = 1; n < policy.max_terms; ++n) {
        if (!pos_done) {
            // term(n) = (-1)^n p^{n(n-1)/2} z^n; step multiplies by -z p^{n-1}
            pos *= -z * ppow_pos;
            sum += pos;
            ppow_pos *= p;
            if (std::abs(pos) < policy.tol) pos_done = true;
        }
        if (!neg_done) {
            // term(-n) = (-1)^n p^{n(n+1)/2} z^{-n}; step multiplies by -p^n / z
            neg *= -ppow_neg / z;
            sum += neg;
            ppow_neg *= p;
            if (std::abs(neg) < policy.tol) neg_done = true;
        }
        if (pos_done && neg_done) return sum;
    }
    throw NonConvergent("theta_sum: max_terms exceeded");
}

cd cpow(cd base_u, cd exponent, const AlgebraParams& params) {
    if (exponent == cd(0.0)) return 1.0;
    return std::exp(2.0 * base_u * exponent * params.log_q);
}

cd bracket(cd u, const AlgebraParams& params, bool starred, const TruncationPolicy& policy) {
    const cd rr = starred ? params.rstar : params.r;
    const cd pp = starred ? params.pstar : params.p;
    const cd z = params.qpow(2.0 * u);
    return params.qpow(u * u / rr - u) * theta_p(z, pp, policy);
}

cd brace(cd z, const AlgebraParams& params, bool starred, const TruncationPolicy& policy) {
    return qpoch2(z, starred ? params.pstar : params.p, params.xi * params.xi, policy);
}

}  // namespace ebq
