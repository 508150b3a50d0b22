#ifndef O2GASKET_ASYMPTOTICS_HPP
#define O2GASKET_ASYMPTOTICS_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "o2gasket/sequences.hpp"

namespace o2gasket {

enum class Regime {
    drift_deficit,       // sum j g_j < 1: nu(-k) ~ c log k / k^2
    boundary_summable,   // sum j g_j = 1, sum |f_l| < inf: nu(-k) ~ c / k^2
    boundary_divergent,  // sum j g_j = 1, sum |f_l| = inf (not reachable
                         // for finitely supported g; diagnostic only)
};

struct RegimeReport {
    double first_moment = 0.0;
    Regime regime = Regime::drift_deficit;
    // 2(1-sigma)/pi^2 in drift_deficit, (1/pi) sum f_l in boundary_summable.
    std::optional<double> limit_constant;
    double lambda = 2.0;
    std::vector<std::pair<double, double>> L_samples;  // (x, L(x))
    std::vector<double> ratio_samples;                 // L(lambda x)/L(x)
};

// L(x) = sum_{l>=1} f_l 4x^2/(4(l+x-1)^2-1); equals pi k^2 nu(-k) at
// integer x = k.
Estimate L_eval(const GSequence& g, double x, const TruncationConfig& cfg = {});

// L~(x) = sum_{l>=1} ((1 - sum_{j<=floor(l/2)} j g_j)/l) 4x^2/(4(l+x-1)^2-1).
// With this normalization L(x) - (2/pi) L~(x) stays bounded.
Estimate L_tilde_eval(const GSequence& g, double x, const TruncationConfig& cfg = {});

RegimeReport classify_regime(const GSequence& g, const TruncationConfig& cfg = {},
                             double moment_eq_tol = 1e-9);

std::vector<double> slow_variation_ratios(const GSequence& g, double lambda,
                                          std::span<const double> x_grid,
                                          const TruncationConfig& cfg = {});

}  // namespace o2gasket

#endif
