#ifndef O2GASKET_ORACLE_HPP
#define O2GASKET_ORACLE_HPP

#include <memory>
#include <vector>

#include "o2gasket/rational.hpp"
#include "o2gasket/sequences.hpp"
#include "o2gasket/weights.hpp"

namespace o2gasket {
namespace detail {
class DirectNu;
}

namespace oracle {

struct DirectValue {
    double value = 0.0;
    double tail_bound = 0.0;
};

// Brute-force counterpart of the digamma path: sums l = 1..M of
// f_l 4/(4(l-k-1)^2-1)/pi plus the indicator. Requires M > 2*support.
DirectValue direct_nu(const GSequence& g, long long k, long long M);

// Same, with the f table shared across many k.
class DirectNuEvaluator {
public:
    DirectNuEvaluator(const GSequence& g, long long M);
    ~DirectNuEvaluator();
    DirectNuEvaluator(DirectNuEvaluator&&) noexcept;
    DirectValue value(long long k) const;
    long long terms() const;

private:
    std::unique_ptr<detail::DirectNu> impl_;
};

// mu^{*p}(l) for p = 0..D, l = 0..l_max, exact rational convolution.
// mu must be a sub-probability sequence (entries >= 0, sum <= 1).
std::vector<std::vector<Rational>> exact_convolution_powers(const std::vector<Rational>& mu,
                                                            long long D, long long l_max);

// Classical loop (Tutte) equation for Boltzmann maps,
//   W(l) = sum_{k>=1} q_k W(l+k-1) + sum_{a+b=l-1} W(a) W(b),
// used as an external admissibility oracle. The convention is calibrated
// against the closed-form symmetric family at construction; a mismatch
// throws CalibrationError and the oracle stays disabled.
class TutteOracle {
public:
    TutteOracle();

    // |1 - rhs/W(l)| with the k-sum truncated; computed in nu space so no
    // c_q powers appear (log-stabilized by construction).
    double residual(const WeightFamily& wf, long long l, long long truncation) const;

    double calibration_residual() const { return calibration_residual_; }

private:
    double calibration_residual_ = 0.0;
};

}  // namespace oracle
}  // namespace o2gasket

#endif
