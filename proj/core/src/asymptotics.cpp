#include "o2gasket/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "o2gasket/errors.hpp"
#include "o2gasket/series.hpp"
#include "nu_engine.hpp"

namespace o2gasket {

namespace {
constexpr double kPi = std::numbers::pi;
}

Estimate L_eval(const GSequence& g, double x, const TruncationConfig& cfg) {
    detail::NuEngine engine(g, cfg);
    return engine.L(x);
}

Estimate L_tilde_eval(const GSequence& g, double x, const TruncationConfig& cfg) {
    detail::NuEngine engine(g, cfg);
    return engine.L_tilde(x);
}

RegimeReport classify_regime(const GSequence& g, const TruncationConfig& cfg,
                             double moment_eq_tol) {
    RegimeReport rep;
    rep.first_moment = g.first_moment();
    if (rep.first_moment > 1.0 + moment_eq_tol)
        throw MomentExcessError(
            "classify_regime: first moment " + std::to_string(rep.first_moment) + " exceeds 1",
            rep.first_moment);

    if (rep.first_moment < 1.0 - moment_eq_tol) {
        rep.regime = Regime::drift_deficit;
        rep.limit_constant = 2.0 * (1.0 - rep.first_moment) / (kPi * kPi);
    } else {
        // Finitely supported g at the moment boundary always has summable
        // f: 1 - sum_{j<=l/2} j g_j vanishes for l >= 2J.
        rep.regime = Regime::boundary_summable;
        rep.limit_constant = f_total(g, std::max(moment_eq_tol, 1e-9) * 10.0 + 1e-7) / kPi;
    }

    detail::NuEngine engine(g, cfg);
    rep.lambda = 2.0;
    for (double x : {1e2, 1e3, 1e4, 1e5}) {
        const double Lx = engine.L(x).value;
        rep.L_samples.emplace_back(x, Lx);
        rep.ratio_samples.push_back(engine.L(rep.lambda * x).value / Lx);
    }
    return rep;
}

std::vector<double> slow_variation_ratios(const GSequence& g, double lambda,
                                          std::span<const double> x_grid,
                                          const TruncationConfig& cfg) {
    if (!(lambda > 0.0)) throw PreconditionError("slow_variation_ratios: lambda > 0");
    detail::NuEngine engine(g, cfg);
    std::vector<double> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        if (!(x >= 1.0) || !(lambda * x >= 1.0))
            throw PreconditionError("slow_variation_ratios: grid entries and lambda*x must be >= 1");
        out.push_back(engine.L(lambda * x).value / engine.L(x).value);
    }
    return out;
}

}  // namespace o2gasket
