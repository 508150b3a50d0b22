#ifndef O2GASKET_SERIES_HPP
#define O2GASKET_SERIES_HPP

#include <vector>

#include "o2gasket/rational.hpp"
#include "o2gasket/sequences.hpp"

namespace o2gasket {

// 2^{-2l} C(2l, l) for l >= 0, zero for l < 0, by the multiplicative
// recurrence h(l+1) = h(l) (2l+1)/(2l+2).
double h_down(long long l);
Rational h_down_exact(long long l);

// Table h_down(0..n) in one pass.
std::vector<double> h_down_table(long long n);

// sum_{m=k-j}^{k+j-1} 1/(m+1/2) with the negative-m terms cancelled
// symbolically against their mirror images (1/(-m-1+1/2) = -1/(m+1/2)):
//   k >= 1 :  sum_{m=|k-j|}^{k+j-1} 1/(m+1/2)
//   k == 0:  0
//   k < 0 :  -window(-k, j)
double half_harmonic_window(long long k, long long j);
Rational half_harmonic_window_exact(long long k, long long j);

// [z^k](1 - sqrt(1-z)): the strict-descending ladder-height law.
// c_1 = 1/2, c_{k+1} = c_k (2k-1)/(2k+2).
Rational sqrt_ladder_coeff(long long k);
std::vector<Rational> sqrt_ladder_coeffs(long long n);      // c_0..c_n
std::vector<double> sqrt_ladder_coeffs_d(long long n);

// Coefficients f_k of z(1-G_asc(z))/sqrt(1-z) for a finitely supported g:
//   f_k = (1/pi)(1/(k-1/2) + 1/(k+1/2)) - (1/pi) sum_j g_j window(k, j).
// For k > J this collapses to a fixed comb of simple poles,
//   f_k = (1/pi) sum_{t} w_t / (k + t + 1/2),
// which is what the closed-form nu evaluation rests on.
class FCoefficients {
public:
    explicit FCoefficients(GSequence g);

    const GSequence& g() const { return g_; }
    long long support() const { return g_.support(); }

    double value(long long k) const;            // f_k, k >= 1
    std::vector<double> batch(long long n) const;  // f_1..f_n (index 0 unused)

    // Comb representation, valid for k > support(): t ranges over
    // [t_min, t_min + weights.size()).
    long long comb_t_min() const { return t_min_; }
    const std::vector<double>& comb_weights() const { return weights_; }
    double comb_value(long long k) const;

private:
    GSequence g_;
    long long t_min_ = 0;
    std::vector<double> weights_;
};

double f_coeff(const GSequence& g, long long k);

// sum_{l>=1} f_l via the closed triple sum
//   (1/pi) sum_j g_j sum_{m=0}^{j-1} sum_{l=0}^{m} (1/(l+1/2) + 1/(l-1/2)),
// finite for finitely supported g. Requires sum j g_j = 1 within tol.
double f_total(const GSequence& g, double moment_tol = 1e-6);

// nu(k) = 1_{k=0} + (1/pi) sum_{l>=1} f_l * 4/(4(l-k-1)^2 - 1).
// closed_form_digamma expands the tail of the l-series into pole-pair
// sums; direct_truncated sums max_terms terms and adds the rigorous
// series_tail_bound to the reported error.
Estimate nu_value(const GSequence& g, long long k, const TruncationConfig& cfg = {});

// Rigorous upper bound on |sum_{l>M} f_l * 4/(4(l-k-1)^2-1)| from
//   |f_l| <= (2/pi)(1-sigma)/(l-J) + (2/pi)(sum j^2 g_j + 1/2)/(l-J)^2
// for l > 2J, closed under digamma/trigamma partial fractions.
// Requires M > 2 * support(g).
double series_tail_bound(const GSequence& g, long long M, long long k);

}  // namespace o2gasket

#endif
