#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include "ebq/special.hpp"

using namespace ebq;

namespace {

// Independent oracle: sum of logs of the single product.
cd qpoch1_log_oracle(cd x, cd p, int terms = 200) {
    cd acc = 0.0;
    cd head = x;
    for (int n = 0; n < terms; ++n) {
        acc += std::log(1.0 - head);
        head *= p;
    }
    return std::exp(acc);
}

// Independent oracle: brute-force nested loop for the double product.
cd qpoch2_loop_oracle(cd x, cd p1, cd p2, int terms = 120) {
    cd prod = 1.0;
    for (int n = 0; n < terms; ++n)
        for (int m = 0; m < terms; ++m)
            prod *= (1.0 - x * std::pow(p1, n) * std::pow(p2, m));
    return prod;
}

double rel_err(cd a, cd b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

const AlgebraParams P2(2, cd(0.45, 0.05), cd(4.3), cd(1.2));

}  // namespace

TEST_CASE("qpoch1 basics and oracle") {
    TruncationPolicy pol;
    CHECK(qpoch1(0.0, 0.3, pol) == cd(1.0));
    CHECK(qpoch1(0.5, 0.0, pol) == cd(0.5));
    // frozen against the log-sum oracle
    CHECK(rel_err(qpoch1(0.2, 0.3, pol), qpoch1_log_oracle(0.2, 0.3)) < 1e-14);
    CHECK(rel_err(qpoch1(cd(0.3, 0.2), cd(0.1, 0.4), pol),
                  qpoch1_log_oracle(cd(0.3, 0.2), cd(0.1, 0.4))) < 1e-14);
    CHECK_THROWS_AS(qpoch1(0.5, 1.1, pol), NonConvergent);
}

TEST_CASE("qpoch2 basics and nested-loop oracle") {
    TruncationPolicy pol;
    CHECK(qpoch2(0.0, 0.2, 0.3, pol) == cd(1.0));
    CHECK(rel_err(qpoch2(0.4, 0.2, 0.0, pol), qpoch1(0.4, 0.2, pol)) < 1e-15);
    CHECK(rel_err(qpoch2(0.1, 0.2, 0.3, pol), qpoch2_loop_oracle(0.1, 0.2, 0.3)) < 1e-14);
    CHECK(rel_err(qpoch2(cd(0.05, 0.1), cd(0.3, 0.1), cd(0.2, -0.1), pol),
                  qpoch2_loop_oracle(cd(0.05, 0.1), cd(0.3, 0.1), cd(0.2, -0.1))) < 1e-13);
}

TEST_CASE("theta_p product vs Jacobi triple-product series") {
    TruncationPolicy pol;
    CHECK(std::abs(theta_p(1.0, 0.3, pol)) < 1e-15);
    CHECK(rel_err(theta_p(0.7, 0.0, pol), cd(0.3)) < 1e-15);
    const std::vector<cd> ps = {0.1, 0.5, cd(0.2, 0.3), cd(-0.35, 0.1)};
    const std::vector<cd> zs = {0.5, 2.0, cd(0.8, 0.6), cd(-1.2, 0.4), cd(0.0, 1.5)};
    for (cd p : ps)
        for (cd z : zs) {
            const cd prod = theta_p(z, p, pol);
            const cd ser = theta_sum(z, p, pol);
            // z = p^k is a zero of both routes; guard the denominator
            CHECK(std::abs(prod - ser) / std::max(std::abs(ser), 1e-10) < 1e-12);
        }
}

TEST_CASE("theta_p quasi-periodicity and z -> p/z symmetry") {
    TruncationPolicy pol;
    const std::vector<cd> ps = {0.2, cd(0.3, 0.2)};
    const std::vector<cd> zs = {0.7, cd(1.1, 0.5), cd(-0.6, 0.2)};
    for (cd p : ps)
        for (cd z : zs) {
            CHECK(rel_err(theta_p(p * z, p, pol), -theta_p(z, p, pol) / z) < 1e-12);
            CHECK(rel_err(theta_p(z, p, pol), theta_p(p / z, p, pol)) < 1e-12);
        }
}

TEST_CASE("bracket zero, quasi-periodicity, oddness") {
    TruncationPolicy pol;
    CHECK(std::abs(bracket(0.0, P2)) < 1e-15);
    const std::vector<cd> us = {cd(0.37, 0.11), cd(-0.8, 0.05), cd(1.9, -0.3)};
    for (cd u : us) {
        for (bool starred : {false, true}) {
            const cd rr = starred ? P2.rstar : P2.r;
            CHECK(rel_err(bracket(u + rr, P2, starred), -bracket(u, P2, starred)) < 1e-12);
            CHECK(rel_err(bracket(-u, P2, starred), -bracket(u, P2, starred)) < 1e-12);
        }
    }
}

TEST_CASE("cpow exponent rules") {
    CHECK(cpow(cd(0.3, 0.7), 0.0, P2) == cd(1.0));
    CHECK(cpow(0.0, cd(2.3, 1.0), P2) == cd(1.0));
    const cd u(0.42, -0.13);
    CHECK(rel_err(cpow(u, 1.0 / P2.r, P2) * cpow(u, -1.0 / P2.r, P2), 1.0) < 1e-15);
    // z^a agrees with q^{2ua}
    CHECK(rel_err(cpow(u, cd(1.7, 0.2), P2), P2.qpow(2.0 * u * cd(1.7, 0.2))) < 1e-15);
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
    TruncationPolicy pol(1e-16, 4096, 0.95);
    const cd a = theta_p(cd(0.8, 0.6), cd(0.2, 0.3), pol);
    const cd b = theta_p(cd(0.8, 0.6), cd(0.2, 0.3), pol);
    CHECK(std::memcmp(&a, &b, sizeof(cd)) == 0);
    const cd c1 = qpoch2(cd(0.05, 0.1), cd(0.3, 0.1), cd(0.2, -0.1), pol);
    const cd c2 = qpoch2(cd(0.05, 0.1), cd(0.3, 0.1), cd(0.2, -0.1), pol);
    CHECK(std::memcmp(&c1, &c2, sizeof(cd)) == 0);
}

TEST_CASE("AlgebraParams invariants") {
    CHECK(std::abs(P2.xi * P2.qpow(2.0 * P2.eta) - 1.0) < 1e-15);
    CHECK(std::abs(P2.pstar - P2.p * P2.qpow(-2.0 * P2.c)) == 0.0);
    CHECK_THROWS_AS(AlgebraParams(2, cd(1.2), cd(4.0), cd(1.0)), DomainError);
    // |q^{2r}| >= 1 must be rejected
    CHECK_THROWS_AS(AlgebraParams(2, cd(0.5), cd(-1.0), cd(0.0)), DomainError);
    CHECK_THROWS_AS(TruncationPolicy(0.0, 100, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(TruncationPolicy(1e-12, 4, 0.9), std::invalid_argument);
    CHECK_THROWS_AS(TruncationPolicy(1e-12, 100, 1.5), std::invalid_argument);
}
