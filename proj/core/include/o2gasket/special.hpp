#ifndef O2GASKET_SPECIAL_HPP
#define O2GASKET_SPECIAL_HPP

namespace o2gasket {

// psi(x) for x > 0, |error| <= ~1e-14. Upward recurrence into the
// asymptotic region x >= 16 with 8 Bernoulli terms.
double digamma(double x);

// psi'(x) for x > 0.
double trigamma(double x);

// psi^(n)(x) for 0 <= n <= 6, x > 0.
double polygamma(int n, double x);

// sum_{l>=start} 1/((l+alpha)(l+beta)).
// Singular-free as long as no l+alpha or l+beta hits zero; initial terms
// with non-positive shifted arguments are summed directly and the digamma
// closed form (psi(1+beta)-psi(1+alpha))/(beta-alpha), trigamma at
// alpha == beta, is applied to the tail.
double pole_pair_sum_from(long long start, double alpha, double beta);

// sum_{l>=1} 1/((l+alpha)(l+beta)).
double pole_pair_sum(double alpha, double beta);

}  // namespace o2gasket

#endif
