#include "o2gasket/special.hpp"

#include <cmath>
#include <cstdlib>

#include "o2gasket/errors.hpp"

namespace o2gasket {

namespace {

// B_{2i}, i = 1..8
constexpr double kBernoulli[8] = {
    1.0 / 6.0,   -1.0 / 30.0,      1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0,  -691.0 / 2730.0,  7.0 / 6.0,  -3617.0 / 510.0,
};

constexpr double kAsymptoticThreshold = 16.0;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
    double acc = 0.0;
    while (x < kAsymptoticThreshold) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) = ln x - 1/(2x) - sum_i B_{2i}/(2i x^{2i})
    const double inv2 = 1.0 / (x * x);
    double term = inv2;
    double series = 0.0;
    for (int i = 0; i < 8; ++i) {
        series += kBernoulli[i] / (2.0 * (i + 1)) * term;
        term *= inv2;
    }
    return acc + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
    if (!(x > 0.0)) throw DomainError("trigamma: requires x > 0");
    double acc = 0.0;
    while (x < kAsymptoticThreshold) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // psi'(x) = 1/x + 1/(2x^2) + sum_i B_{2i}/x^{2i+1}
    const double inv2 = 1.0 / (x * x);
    double term = inv2 / x;
    double series = 0.0;
    for (int i = 0; i < 8; ++i) {
        series += kBernoulli[i] * term;
        term *= inv2;
    }
    return acc + 1.0 / x + 0.5 * inv2 + series;
}

double polygamma(int n, double x) {
    if (n < 0 || n > 6) throw DomainError("polygamma: order must be in [0, 6]");
    if (n == 0) return digamma(x);
    if (n == 1) return trigamma(x);
    if (!(x > 0.0)) throw DomainError("polygamma: requires x > 0");
    // psi^(n)(x) = psi^(n)(x+1) - (-1)^n n!/x^{n+1}
    const double nfact = factorial(n);
    const double sign_n = (n % 2 == 0) ? 1.0 : -1.0;
    double acc = 0.0;
    while (x < kAsymptoticThreshold) {
        acc -= sign_n * nfact / std::pow(x, n + 1);
        x += 1.0;
    }
    // psi^(n)(x) = (-1)^{n-1}[(n-1)!/x^n + n!/(2x^{n+1})
    //              + sum_i B_{2i} (2i+n-1)!/((2i)! x^{2i+n})]
    double series = factorial(n - 1) / std::pow(x, n) + nfact / (2.0 * std::pow(x, n + 1));
    for (int i = 1; i <= 8; ++i) {
        series += kBernoulli[i - 1] * (factorial(2 * i + n - 1) / factorial(2 * i)) /
                  std::pow(x, 2 * i + n);
    }
    return acc - sign_n * series;
}

double pole_pair_sum_from(long long start, double alpha, double beta) {
    if (start < 1) throw PreconditionError("pole_pair_sum_from: start >= 1");
    const double lo = std::min(alpha, beta);
    // Shift until both arguments are >= 1; keeps the near-equal expansion
    // away from the poles of the higher polygammas.
    long long m = start;
    double head = 0.0;
    while (m + lo < 1.0) {
        const double a = m + alpha;
        const double b = m + beta;
        if (a == 0.0 || b == 0.0)
            throw DomainError("pole_pair_sum: series term is singular");
        head += 1.0 / (a * b);
        ++m;
        if (m - start > 1LL << 26)
            throw DomainError("pole_pair_sum: shifts too negative");
    }
    const double delta = beta - alpha;
    double tail;
    if (delta == 0.0) {
        tail = trigamma(m + alpha);
    } else if (std::abs(delta) < 0.02) {
        // (psi(m+beta)-psi(m+alpha))/delta by central expansion at the
        // midpoint; direct quotient would lose ~|log eps/delta| digits.
        const double mid = m + 0.5 * (alpha + beta);
        const double d2 = delta * delta;
        tail = polygamma(1, mid) + d2 / 24.0 * polygamma(3, mid) +
               d2 * d2 / 1920.0 * polygamma(5, mid);
    } else {
        tail = (digamma(m + beta) - digamma(m + alpha)) / delta;
    }
    return head + tail;
}

double pole_pair_sum(double alpha, double beta) {
    return pole_pair_sum_from(1, alpha, beta);
}

}  // namespace o2gasket
