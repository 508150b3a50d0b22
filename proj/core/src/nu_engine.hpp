#ifndef O2GASKET_NU_ENGINE_HPP
#define O2GASKET_NU_ENGINE_HPP

#include <vector>

#include "o2gasket/sequences.hpp"
#include "o2gasket/series.hpp"

namespace o2gasket::detail {

// Closed-form evaluator for
//   nu(k) = 1_{k=0} + (1/pi) sum_{l>=1} f_l (1/(l-k-3/2) - 1/(l-k-1/2)).
// The l-series is split at l0 = J+2: the head is summed termwise, the
// tail collapses through the comb representation of f into pole-pair
// sums with digamma arguments that move by integer steps in k, so
// contiguous windows roll a single digamma stream.
class NuEngine {
public:
    NuEngine(GSequence g, TruncationConfig cfg = {});

    const GSequence& g() const { return fc_.g(); }
    const FCoefficients& f() const { return fc_; }
    long long support() const { return fc_.support(); }

    Estimate value(long long k) const;
    std::vector<double> window(long long lo, long long hi) const;

    // sum_{m > M} nu(-m), exact pole-pair closed form, M >= 0.
    double neg_tail(long long M) const;
    // sum_{k > K} nu(k) = suffix_g(K+2) + neg_tail(K+2), K >= 0.
    double pos_tail(long long K) const;

    // L(x)       = sum_l f_l 4x^2/(4(l+x-1)^2-1), x >= 1.
    // L_tilde(x) = sum_l (1 - prefix_moment(floor(l/2)))/l * same kernel.
    Estimate L(double x) const;
    Estimate L_tilde(double x) const;

private:
    double pair_tail(double c, double psi_c, double trig_c, double d, double psi_d) const;
    double value_direct_head(long long k, long long m0, double* abs_acc) const;
    double f_at(long long l) const;

    FCoefficients fc_;
    TruncationConfig cfg_;
    long long l0_ = 2;                 // J + 2
    std::vector<double> f_direct_;     // f_1..f_{l0-1}
    std::vector<double> psi_c_;        // digamma(l0 + t + 1/2)
    std::vector<double> trig_c_;       // trigamma(l0 + t + 1/2)
};

// Direct truncated summation of the same series, used as the oracle path
// and by nu_value in direct_truncated mode. The f table is shared across
// evaluations at different k.
class DirectNu {
public:
    DirectNu(const GSequence& g, long long M);
    long long terms() const { return M_; }
    // value + rigorous tail bound (series_tail_bound) + rounding estimate.
    Estimate value(long long k) const;
    double value_only(long long k) const;  // skips the O(M) bound
    double tail_bound(long long k) const;

private:
    GSequence g_;
    long long M_;
    std::vector<double> f_;
};

}  // namespace o2gasket::detail

#endif
