#include "o2gasket/oracle.hpp"

#include <cmath>
#include <string>

#include "o2gasket/errors.hpp"
#include "nu_engine.hpp"

namespace o2gasket::oracle {

DirectValue direct_nu(const GSequence& g, long long k, long long M) {
    detail::DirectNu d(g, M);
    const Estimate e = d.value(k);
    return {e.value, d.tail_bound(k)};
}

DirectNuEvaluator::DirectNuEvaluator(const GSequence& g, long long M)
    : impl_(std::make_unique<detail::DirectNu>(g, M)) {}
DirectNuEvaluator::~DirectNuEvaluator() = default;
DirectNuEvaluator::DirectNuEvaluator(DirectNuEvaluator&&) noexcept = default;

DirectValue DirectNuEvaluator::value(long long k) const {
    const Estimate e = impl_->value(k);
    return {e.value, impl_->tail_bound(k)};
}

long long DirectNuEvaluator::terms() const { return impl_->terms(); }

std::vector<std::vector<Rational>> exact_convolution_powers(const std::vector<Rational>& mu,
                                                            long long D, long long l_max) {
    if (D < 0) throw PreconditionError("exact_convolution_powers: D >= 0");
    if (l_max + 1 > static_cast<long long>(mu.size()))
        throw PreconditionError("exact_convolution_powers: mu must cover l_max");
    Rational total(0);
    for (const auto& m : mu) {
        if (m < 0) throw PreconditionError("exact_convolution_powers: mu entries >= 0");
        total += m;
    }
    if (total > 1) throw PreconditionError("exact_convolution_powers: mu must be sub-probability");

    const size_t n = static_cast<size_t>(l_max) + 1;
    std::vector<std::vector<Rational>> powers;
    powers.reserve(static_cast<size_t>(D) + 1);
    std::vector<Rational> cur(n, Rational(0));
    cur[0] = 1;  // p = 0: Dirac at zero
    powers.push_back(cur);
    for (long long p = 1; p <= D; ++p) {
        std::vector<Rational> next(n, Rational(0));
        for (size_t a = 0; a < n; ++a) {
            if (cur[a] == 0) continue;
            for (size_t b = 0; a + b < n; ++b) {
                if (mu[b] == 0) continue;
                next[a + b] += cur[a] * mu[b];
            }
        }
        powers.push_back(next);
        cur = std::move(next);
    }
    return powers;
}

namespace {

// rhs/W(l) expressed through nu alone:
//   sum_{k=1..T} nu(k-1) nu(-l-k)/nu(-l-1)
//   + (1/2) sum_{a+b=l-1} nu(-a-1) nu(-b-1)/nu(-l-1),
// with nu(-1) standing in for 2 W(0)/c_q at a = 0 or b = 0.
double tutte_rhs_over_w(const NuDistribution& nu, long long l, long long T) {
    const auto w = nu.window(-(l + T + 1), T);
    auto at = [&](long long k) { return w[static_cast<size_t>(k + l + T + 1)]; };
    const double denom = at(-l - 1);
    double s = 0.0;
    for (long long k = 1; k <= T; ++k) s += at(k - 1) * at(-l - k);
    double sq = 0.0;
    for (long long a = 0; a <= l - 1; ++a) sq += at(-a - 1) * at(-(l - 1 - a) - 1);
    return (s + 0.5 * sq) / denom;
}

}  // namespace

TutteOracle::TutteOracle() {
    const NuDistribution sym = NuDistribution::builtin_symmetric();
    const double r_coarse = std::abs(1.0 - tutte_rhs_over_w(sym, 1, 400));
    const double r_fine = std::abs(1.0 - tutte_rhs_over_w(sym, 1, 1600));
    calibration_residual_ = r_fine;
    if (!(r_fine < r_coarse) || !(r_fine < 1e-6))
        throw CalibrationError(
            "TutteOracle: loop-equation convention failed to calibrate on the symmetric "
            "family (residuals " +
            std::to_string(r_coarse) + " -> " + std::to_string(r_fine) + ")");
}

double TutteOracle::residual(const WeightFamily& wf, long long l, long long truncation) const {
    if (l < 1) throw PreconditionError("tutte_residual: l >= 1");
    if (truncation < 1) throw PreconditionError("tutte_residual: truncation >= 1");
    return std::abs(1.0 - tutte_rhs_over_w(wf.nu(), l, truncation));
}

}  // namespace o2gasket::oracle
