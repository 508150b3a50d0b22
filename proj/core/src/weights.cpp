#include "o2gasket/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "o2gasket/errors.hpp"
#include "o2gasket/series.hpp"
#include "nu_engine.hpp"

namespace o2gasket {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

namespace detail {

struct NuBackend {
    virtual ~NuBackend() = default;
    virtual Estimate value(long long k) const = 0;
    virtual std::vector<double> window(long long lo, long long hi) const = 0;
    virtual double neg_tail(long long M) const = 0;
    virtual double pos_tail(long long K) const = 0;
};

struct EngineBackend final : NuBackend {
    EngineBackend(GSequence g, TruncationConfig cfg) : engine(std::move(g), cfg) {}
    Estimate value(long long k) const override { return engine.value(k); }
    std::vector<double> window(long long lo, long long hi) const override {
        return engine.window(lo, hi);
    }
    double neg_tail(long long M) const override { return engine.neg_tail(M); }
    double pos_tail(long long K) const override { return engine.pos_tail(K); }
    NuEngine engine;
};

// Values by direct truncated summation, tails by the closed form.
struct DirectBackend final : NuBackend {
    DirectBackend(GSequence g, TruncationConfig cfg)
        : engine(g, cfg), direct(make_direct(g, cfg)) {}
    static DirectNu make_direct(const GSequence& g, const TruncationConfig& cfg) {
        long long M = std::max<long long>(4 * g.support() + 64, 1024);
        while (series_tail_bound(g, M, 0) / kPi > 0.5 * cfg.target_abs_tol) {
            if (M >= cfg.max_terms)
                throw TruncationError(
                    "direct_truncated: tail bound cannot reach target_abs_tol within max_terms");
            M = std::min(cfg.max_terms, 2 * M);
        }
        return DirectNu(g, M);
    }
    Estimate value(long long k) const override { return direct.value(k); }
    std::vector<double> window(long long lo, long long hi) const override {
        std::vector<double> out;
        out.reserve(static_cast<size_t>(hi - lo + 1));
        for (long long k = lo; k <= hi; ++k) out.push_back(direct.value_only(k));
        return out;
    }
    double neg_tail(long long M) const override { return engine.neg_tail(M); }
    double pos_tail(long long K) const override { return engine.pos_tail(K); }
    NuEngine engine;
    DirectNu direct;
};

struct PerturbedBackend final : NuBackend {
    PerturbedBackend(std::shared_ptr<const NuBackend> base, long long k0, double delta)
        : base(std::move(base)), k0(k0), delta(delta) {}
    Estimate value(long long k) const override {
        Estimate e = base->value(k);
        if (k == k0) e.value += delta;
        return e;
    }
    std::vector<double> window(long long lo, long long hi) const override {
        auto w = base->window(lo, hi);
        if (k0 >= lo && k0 <= hi) w[static_cast<size_t>(k0 - lo)] += delta;
        return w;
    }
    double neg_tail(long long M) const override {
        double t = base->neg_tail(M);
        if (k0 < -M) t += delta;
        return t;
    }
    double pos_tail(long long K) const override {
        double t = base->pos_tail(K);
        if (k0 > K) t += delta;
        return t;
    }
    std::shared_ptr<const NuBackend> base;
    long long k0;
    double delta;
};

// nu_sym(k) = 1_{k=0} + (2/pi)/(4k^2-1)
struct SymBackend final : NuBackend {
    static double at(long long k) {
        const double kk = double(k);
        double v = (2.0 / kPi) / (4.0 * kk * kk - 1.0);
        if (k == 0) v += 1.0;
        return v;
    }
    Estimate value(long long k) const override { return {at(k), 1e-16}; }
    std::vector<double> window(long long lo, long long hi) const override {
        std::vector<double> out;
        out.reserve(static_cast<size_t>(hi - lo + 1));
        for (long long k = lo; k <= hi; ++k) out.push_back(at(k));
        return out;
    }
    // sum_{k>K} (2/pi)/(4k^2-1) telescopes to (1/pi)/(2K+1).
    double neg_tail(long long M) const override { return 1.0 / (kPi * double(2 * M + 1)); }
    double pos_tail(long long K) const override { return 1.0 / (kPi * double(2 * K + 1)); }
};

}  // namespace detail

NuDistribution::NuDistribution(std::shared_ptr<const detail::NuBackend> impl, Source source,
                               std::optional<GSequence> g)
    : impl_(std::move(impl)), source_(source), g_(std::move(g)) {}

NuDistribution NuDistribution::synthesized(GSequence g, TruncationConfig cfg) {
    std::shared_ptr<const detail::NuBackend> impl;
    if (cfg.mode == SumMode::direct_truncated)
        impl = std::make_shared<detail::DirectBackend>(g, cfg);
    else
        impl = std::make_shared<detail::EngineBackend>(g, cfg);
    return NuDistribution(std::move(impl), Source::synthesized, std::move(g));
}

NuDistribution NuDistribution::builtin_symmetric() {
    return NuDistribution(std::make_shared<detail::SymBackend>(), Source::builtin_symmetric,
                          std::nullopt);
}

NuDistribution NuDistribution::builtin_fully_packed(TruncationConfig cfg) {
    return NuDistribution(std::make_shared<detail::EngineBackend>(GSequence::zero(), cfg),
                          Source::builtin_fully_packed, GSequence::zero());
}

Estimate NuDistribution::value(long long k) const { return impl_->value(k); }

std::vector<double> NuDistribution::window(long long lo, long long hi) const {
    return impl_->window(lo, hi);
}

double NuDistribution::neg_tail(long long M) const { return impl_->neg_tail(M); }
double NuDistribution::pos_tail(long long K) const { return impl_->pos_tail(K); }

NuDistribution NuDistribution::perturbed(long long k0, double delta) const {
    return NuDistribution(std::make_shared<detail::PerturbedBackend>(impl_, k0, delta), source_,
                          g_);
}

NuDistribution::MassCheck NuDistribution::mass_check(long long K) const {
    const auto w = window(-K, K);
    double s = 0.0, comp = 0.0;
    for (double v : w) {
        double y = v - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    MassCheck mc;
    mc.partial = s;
    mc.tail = neg_tail(K) + pos_tail(K);
    mc.residual = mc.partial + mc.tail - 1.0;
    return mc;
}

double LogValue::value() const {
    if (sign == 0) return 0.0;
    return double(sign) * std::exp(log_abs);
}

WeightFamily::WeightFamily(NuDistribution nu, GSequence g, SynthesisInfo info)
    : nu_(std::move(nu)), g_(std::move(g)), info_(info) {
    nu_m1_ = nu_.value(-1).value;
    if (!(nu_m1_ > 0.0))
        throw DegenerateNuError("WeightFamily: nu(-1) must be positive, got " +
                                std::to_string(nu_m1_));
    cq_ = 2.0 / nu_m1_;
}

double WeightFamily::q(long long k) const {
    if (k < 1) throw PreconditionError("q: k >= 1");
    return nu_.value(k - 1).value * std::pow(nu_m1_ / 2.0, double(k - 1));
}

LogValue WeightFamily::log_q(long long k) const {
    if (k < 1) throw PreconditionError("log_q: k >= 1");
    const double v = nu_.value(k - 1).value;
    LogValue lv;
    if (v <= 0.0) {
        lv.sign = 0;
        lv.log_abs = -kInf;
        return lv;
    }
    lv.sign = 1;
    lv.log_abs = std::log(v) + double(k - 1) * std::log(nu_m1_ / 2.0);
    return lv;
}

double WeightFamily::q_tilde(long long k) const {
    if (k < 1) throw PreconditionError("q_tilde: k >= 1");
    return g_.entry(k) * std::pow(nu_m1_ / 2.0, double(k - 1));
}

LogValue WeightFamily::log_q_tilde(long long k) const {
    if (k < 1) throw PreconditionError("log_q_tilde: k >= 1");
    const double v = g_.entry(k);
    LogValue lv;
    if (v <= 0.0) {
        lv.sign = 0;
        lv.log_abs = -kInf;
        return lv;
    }
    lv.sign = 1;
    lv.log_abs = std::log(v) + double(k - 1) * std::log(nu_m1_ / 2.0);
    return lv;
}

LogValue partition_function(const WeightFamily& wf, long long l) {
    if (l < 0) throw PreconditionError("partition_function: l >= 0");
    LogValue lv;
    if (l == 0) {
        lv.sign = 1;
        lv.log_abs = 0.0;
        return lv;
    }
    const double v = wf.nu().value(-l - 1).value;
    if (v <= 0.0) {
        lv.sign = v < 0.0 ? -1 : 0;
        lv.log_abs = v == 0.0 ? -kInf : std::log(-v);
    } else {
        lv.sign = 1;
        lv.log_abs = std::log(v / 2.0);
    }
    lv.log_abs += double(l + 1) * std::log(wf.c_q());
    return lv;
}

double consistency_q_qtilde(const WeightFamily& wf, long long k) {
    if (k < 1) throw PreconditionError("consistency_q_qtilde: k >= 1");
    const double w = partition_function(wf, k).value();
    return wf.q(k) - wf.q_tilde(k) - 2.0 * std::pow(wf.h(), 2.0 * double(k)) * w;
}

WeightFamily synthesize(GSequence g, TruncationConfig cfg, SynthesisOptions opts) {
    if (g.first_moment() > 1.0 + opts.moment_tol)
        throw MomentExcessError(
            "synthesize: first moment " + std::to_string(g.first_moment()) + " exceeds 1",
            g.first_moment());

    NuDistribution nu = NuDistribution::synthesized(g, cfg);

    const double nu0 = nu.value(0).value;
    if (nu0 >= 1.0 - opts.degenerate_tol)
        throw DegenerateNuError("synthesize: nu is the Dirac mass at zero (nu(0) = " +
                                std::to_string(nu0) + ")");

    SynthesisInfo info;
    const long long W =
        opts.scan_window > 0 ? opts.scan_window : std::max<long long>(200, 4 * g.support());
    info.scan_window = W;
    const auto tab = nu.window(-W, W);
    info.min_nu = tab[0];
    info.min_nu_at = -W;
    for (long long k = -W; k <= W; ++k) {
        const double v = tab[static_cast<size_t>(k + W)];
        if (v < info.min_nu) {
            info.min_nu = v;
            info.min_nu_at = k;
        }
    }
    if (info.min_nu < -opts.negativity_tol)
        throw NegativityError("synthesize: nu(" + std::to_string(info.min_nu_at) +
                                  ") = " + std::to_string(info.min_nu) + " is negative",
                              info.min_nu_at, info.min_nu);

    // Beyond the window, the sign of the k^{-2}-scale tail is the sign of
    // the leading constant: 2(1-sigma)/pi^2 in the drift-deficit regime,
    // sum_l f_l in the boundary regime.
    const double sigma = g.first_moment();
    if (sigma < 1.0 - 1e-9) {
        info.tail_sign_verified = true;
    } else {
        double ft = 0.0;
        try {
            ft = f_total(g, 1e-6);
        } catch (const PreconditionError&) {
            ft = 0.0;
        }
        info.tail_sign_verified = ft > 0.0;
    }

    const double nu_m1 = nu.value(-1).value;
    if (!(nu_m1 > opts.negativity_tol))
        throw DegenerateNuError("synthesize: nu(-1) = " + std::to_string(nu_m1) +
                                " must be positive");

    return WeightFamily(std::move(nu), std::move(g), info);
}

ValidationReport validate_nu(const NuDistribution& nu, int depth, long long window,
                             ValidationTolerances tol, long long max_harmonicity_cutoff) {
    if (depth < 1) throw PreconditionError("validate_nu: depth >= 1");
    if (window < depth) throw PreconditionError("validate_nu: window >= depth");
    ValidationReport rep;

    // (a) total mass
    const auto mc = nu.mass_check(window);
    rep.mass_partial = mc.partial;
    rep.mass_tail = mc.tail;
    rep.mass_residual = mc.residual;

    // (b) harmonicity |h(p) - sum_k nu(k) h(p+k)| for p = 0..depth; the
    // k-sum is cut where the omitted mass times h_down is negligible.
    long long Kh = std::max<long long>(4096, 2 * window);
    const long long kCap = std::max(Kh, max_harmonicity_cutoff);
    while (Kh < kCap && nu.pos_tail(Kh) * h_down(Kh) > 0.25 * tol.harmonicity) Kh *= 2;
    rep.harmonicity_cutoff = Kh;
    rep.harmonicity_tail_bound = nu.pos_tail(Kh) * h_down(Kh);
    {
        const auto vals = nu.window(-depth, Kh);
        const auto h = h_down_table(Kh + depth);
        rep.harmonicity_residuals.assign(static_cast<size_t>(depth), 0.0);
        for (int p = 0; p <= depth; ++p) {
            double s = 0.0, comp = 0.0;
            for (long long k = -p; k <= Kh; ++k) {
                const double term = vals[static_cast<size_t>(k + depth)] *
                                    h[static_cast<size_t>(p + k)];
                double y = term - comp;
                double t = s + y;
                comp = (t - s) - y;
                s = t;
            }
            const double r = std::abs(h[static_cast<size_t>(p)] - s);
            if (p == 0)
                rep.p0_residual = r;
            else
                rep.harmonicity_residuals[static_cast<size_t>(p - 1)] = r;
        }
    }

    // (c) gasket inequality nu(k-1) >= nu(-k-1), (d) non-negativity.
    const auto tab = nu.window(-window - 1, window);
    auto at = [&](long long k) { return tab[static_cast<size_t>(k + window + 1)]; };
    rep.gasket_residuals.assign(static_cast<size_t>(window), 0.0);
    for (long long k = 1; k <= window; ++k)
        rep.gasket_residuals[static_cast<size_t>(k - 1)] =
            std::min(0.0, at(k - 1) - at(-k - 1));
    for (long long k = -window - 1; k <= window; ++k)
        if (at(k) < -tol.nonneg) rep.nonneg_violations.emplace_back(k, at(k));
    rep.degenerate = at(0) >= 1.0 - 1e-9;

    if (std::abs(rep.mass_residual) > tol.mass) rep.failing.push_back("mass");
    for (double r : rep.harmonicity_residuals)
        if (r > tol.harmonicity + rep.harmonicity_tail_bound) {
            rep.failing.push_back("harmonicity");
            break;
        }
    for (double r : rep.gasket_residuals)
        if (r < -tol.gasket) {
            rep.failing.push_back("gasket");
            break;
        }
    if (!rep.nonneg_violations.empty()) rep.failing.push_back("nonneg");
    if (rep.degenerate) rep.failing.push_back("degenerate");
    rep.pass = rep.failing.empty();
    return rep;
}

double budd_g_entry(long long k) {
    const double kk = double(k);
    double v = 2.0 * kk /
               (kPi * (kk - 1.5) * (kk - 0.5) * (kk + 0.5) * (kk + 1.5));
    if (k == 1) v += 1.0;
    return v;
}

namespace {

GSequence make_budd_g() {
    std::vector<double> g(static_cast<size_t>(kBuddSupport));
    for (long long k = 1; k < kBuddSupport; ++k) g[static_cast<size_t>(k - 1)] = budd_g_entry(k);
    // Fold the tail's first moment into the last entry so sum j g_j = 1.
    double m = 0.0, comp = 0.0;
    for (long long j = 1; j < kBuddSupport; ++j) {
        double y = double(j) * g[static_cast<size_t>(j - 1)] - comp;
        double t = m + y;
        comp = (t - m) - y;
        m = t;
    }
    g[static_cast<size_t>(kBuddSupport - 1)] = (1.0 - m) / double(kBuddSupport);
    return GSequence(std::move(g));
}

}  // namespace

BuiltinExample builtin_example(Builtin which, TruncationConfig cfg) {
    if (which == Builtin::budd_symmetric) {
        GSequence g = make_budd_g();
        NuDistribution nu = NuDistribution::builtin_symmetric();
        WeightFamily wf(nu, g);
        return BuiltinExample{std::move(g), std::move(nu), std::move(wf)};
    }
    GSequence g = GSequence::zero();
    NuDistribution nu = NuDistribution::builtin_fully_packed(cfg);
    WeightFamily wf(nu, g);
    return BuiltinExample{std::move(g), std::move(nu), std::move(wf)};
}

}  // namespace o2gasket
