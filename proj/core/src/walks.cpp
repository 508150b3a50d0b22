#include "o2gasket/walks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "o2gasket/errors.hpp"
#include "o2gasket/oracle.hpp"
#include "o2gasket/series.hpp"

namespace o2gasket {

namespace {

constexpr double kPi = std::numbers::pi;

// Geometric tail correction for sum_{n>N} a_n z^n with slowly decaying
// smooth coefficients: two steps of summation by parts.
std::complex<double> tail_correction(double a1, double a2, std::complex<double> z, long long N) {
    const std::complex<double> zeta = 1.0 - z;
    const std::complex<double> zN = std::pow(z, double(N + 1));
    return zN * (a1 / zeta + (a2 - a1) * z / (zeta * zeta));
}

}  // namespace

AliasSampler::AliasSampler(const NuDistribution& nu, long long support_cut,
                           double max_truncated_mass) {
    if (support_cut < 1) throw PreconditionError("AliasSampler: support_cut >= 1");
    cut_ = support_cut;
    truncated_mass_ = nu.neg_tail(cut_) + nu.pos_tail(cut_);
    if (truncated_mass_ > max_truncated_mass)
        throw SamplerTruncationError(
            "AliasSampler: truncated mass " + std::to_string(truncated_mass_) +
                " exceeds the allowed " + std::to_string(max_truncated_mass) +
                "; increase support_cut",
            truncated_mass_);

    pmf_ = nu.window(-cut_, cut_);
    double total = 0.0;
    for (double& p : pmf_) {
        p = std::max(p, 0.0);
        total += p;
    }
    for (double& p : pmf_) p /= total;

    // Walker/Vose alias construction.
    const std::size_t n = pmf_.size();
    n_ = n;
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = pmf_[i] * double(n);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        small.pop_back();
        const std::uint32_t l = large.back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;
}

double AliasSampler::probability(long long k) const {
    if (k < -cut_ || k > cut_) return 0.0;
    return pmf_[static_cast<std::size_t>(k + cut_)];
}

AliasSampler build_sampler(const NuDistribution& nu, const WalkConfig& cfg) {
    if (cfg.horizon < 1) throw PreconditionError("build_sampler: horizon >= 1");
    if (cfg.n_walks < 1) throw PreconditionError("build_sampler: n_walks >= 1");
    return AliasSampler(nu, cfg.support_cut, cfg.max_truncated_mass);
}

namespace {

struct WorkerTallies {
    std::map<long long, std::uint64_t> asc_height, desc_height;
    std::vector<std::uint64_t> asc_epoch, desc_epoch;
    std::uint64_t censored_asc = 0, censored_desc = 0;
};

void run_walks(const AliasSampler& sampler, const WalkConfig& cfg, long long first,
               long long last, WorkerTallies& out) {
    out.asc_epoch.assign(static_cast<size_t>(cfg.horizon) + 1, 0);
    out.desc_epoch.assign(static_cast<size_t>(cfg.horizon) + 1, 0);
    for (long long w = first; w < last; ++w) {
        rng::Xoshiro256pp gen(cfg.master_seed ^
                              (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(w + 1)));
        long long S = 0;
        long long run_max = 0, run_min = 0;
        bool have_asc = false, have_desc = false;
        for (long long n = 1; n <= cfg.horizon; ++n) {
            S += sampler.sample(gen);
            if (!have_asc && S >= run_max) {
                ++out.asc_height[S];
                ++out.asc_epoch[static_cast<size_t>(n)];
                have_asc = true;
            }
            if (!have_desc && S < run_min) {
                ++out.desc_height[-S];
                ++out.desc_epoch[static_cast<size_t>(n)];
                have_desc = true;
            }
            if (have_asc && have_desc) break;
            run_max = std::max(run_max, S);
            run_min = std::min(run_min, S);
        }
        if (!have_asc) ++out.censored_asc;
        if (!have_desc) ++out.censored_desc;
    }
}

}  // namespace

LadderStatistics simulate_ladders(const AliasSampler& sampler, const WalkConfig& cfg) {
    if (cfg.horizon < 1) throw PreconditionError("simulate_ladders: horizon >= 1");
    if (cfg.n_walks < 1) throw PreconditionError("simulate_ladders: n_walks >= 1");
    int workers = cfg.workers;
    if (workers <= 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<int>(std::min<long long>(workers, cfg.n_walks));

    std::vector<WorkerTallies> tallies(static_cast<size_t>(workers));
    {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const long long first = cfg.n_walks * w / workers;
            const long long last = cfg.n_walks * (w + 1) / workers;
            pool.emplace_back(run_walks, std::cref(sampler), std::cref(cfg), first, last,
                              std::ref(tallies[static_cast<size_t>(w)]));
        }
        for (auto& t : pool) t.join();
    }

    LadderStatistics stats;
    stats.n_walks = cfg.n_walks;
    stats.horizon = cfg.horizon;
    for (const auto& t : tallies) {
        for (const auto& [v, c] : t.asc_height) stats.asc_height[v] += c;
        for (const auto& [v, c] : t.desc_height) stats.desc_height[v] += c;
        for (size_t n = 0; n < t.asc_epoch.size(); ++n)
            if (t.asc_epoch[n]) stats.asc_epoch[static_cast<long long>(n)] += t.asc_epoch[n];
        for (size_t n = 0; n < t.desc_epoch.size(); ++n)
            if (t.desc_epoch[n]) stats.desc_epoch[static_cast<long long>(n)] += t.desc_epoch[n];
        stats.censored_asc += t.censored_asc;
        stats.censored_desc += t.censored_desc;
    }
    return stats;
}

std::complex<double> char_fn(const NuDistribution& nu, double theta,
                             const TruncationConfig& cfg) {
    if (nu.source() == NuDistribution::Source::builtin_symmetric)
        return {1.0 - std::abs(std::sin(theta / 2.0)), 0.0};

    const std::complex<double> z = std::polar(1.0, theta);
    if (std::abs(1.0 - z) < 1e-9) return {1.0, 0.0};  // total mass

    long long M = 1024;
    const long long cap = std::min<long long>(cfg.max_terms, 1 << 20);
    auto est = [&](long long m) {
        const double d = std::abs(1.0 - z);
        return (nu.value(m).value + nu.value(-m).value) / (d * d) / double(m);
    };
    while (M < cap && est(M) > cfg.target_abs_tol) M *= 2;
    if (est(M) > std::max(cfg.target_abs_tol, 1e-8) && M >= cap)
        throw TruncationError("char_fn: cannot reach tolerance within max_terms");

    const auto w = nu.window(-(M + 2), M + 2);
    auto at = [&](long long k) { return w[static_cast<size_t>(k + M + 2)]; };
    std::complex<double> pos = 0.0, neg = 0.0;
    for (long long k = M; k >= 1; --k) {
        pos = (pos + at(k)) * z;
        neg = (neg + at(-k)) * std::conj(z);
    }
    std::complex<double> phi = at(0) + pos + neg;
    phi += tail_correction(at(M + 1), at(M + 2), z, M);
    phi += tail_correction(at(-M - 1), at(-M - 2), std::conj(z), M);
    return phi;
}

std::vector<double> asc_ladder_series(const GSequence& g, long long N, double tol) {
    if (N < 1) throw PreconditionError("asc_ladder_series: N >= 1");
    const auto f = FCoefficients(g).batch(N);
    const auto s = sqrt_ladder_coeffs_d(N - 1);  // sqrt(1-z) coefficients are 1, -s_1, -s_2, ...
    std::vector<double> a(static_cast<size_t>(N), 0.0);
    a[0] = 1.0 - f[1];
    for (long long n = 1; n < N; ++n) {
        // a_n = -[z^n] sqrt(1-z) f(z)/z = -f_{n+1} + sum_{m=1}^{n} s_m f_{n-m+1}
        double acc = -f[static_cast<size_t>(n + 1)];
        for (long long m = 1; m <= n; ++m)
            acc += s[static_cast<size_t>(m)] * f[static_cast<size_t>(n - m + 1)];
        a[static_cast<size_t>(n)] = acc;
    }
    double partial = 0.0;
    for (long long n = 0; n < N; ++n) {
        const double v = a[static_cast<size_t>(n)];
        if (v < -tol)
            throw SeriesAnomalyError("asc_ladder_series: negative coefficient " +
                                     std::to_string(v) + " at order " + std::to_string(n) +
                                     " (g does not define a ladder law)");
        partial += v;
        if (partial > 1.0 + tol)
            throw SeriesAnomalyError("asc_ladder_series: partial sums exceed 1 at order " +
                                     std::to_string(n));
    }
    return a;
}

WienerHopfResult wiener_hopf_residual(const GSequence& g, std::span<const double> theta_grid,
                                      long long N, const TruncationConfig& cfg) {
    const auto coeffs = asc_ladder_series(g, N + 3, 1e-6);
    const NuDistribution nu = NuDistribution::synthesized(g, cfg);
    const long long M = N;
    const auto w = nu.window(-(M + 2), M + 2);
    auto nu_at = [&](long long k) { return w[static_cast<size_t>(k + M + 2)]; };

    WienerHopfResult res;
    res.residuals.reserve(theta_grid.size());
    for (double theta : theta_grid) {
        const std::complex<double> z = std::polar(1.0, theta);
        if (std::abs(1.0 - z) < 1e-6)
            throw PreconditionError("wiener_hopf_residual: grid must avoid theta = 0 mod 2pi");

        std::complex<double> pos = 0.0, neg = 0.0;
        for (long long k = M; k >= 1; --k) {
            pos = (pos + nu_at(k)) * z;
            neg = (neg + nu_at(-k)) * std::conj(z);
        }
        std::complex<double> phi = nu_at(0) + pos + neg;
        phi += tail_correction(nu_at(M + 1), nu_at(M + 2), z, M);
        phi += tail_correction(nu_at(-M - 1), nu_at(-M - 2), std::conj(z), M);

        std::complex<double> G = 0.0;
        for (long long n = N; n >= 0; --n) G = G * z + coeffs[static_cast<size_t>(n)];
        G += tail_correction(coeffs[static_cast<size_t>(N + 1)],
                             coeffs[static_cast<size_t>(N + 2)], z, N);

        // principal branch: Re sqrt >= 0, matching sqrt(1-z) on [0,1)
        const std::complex<double> g_desc = std::sqrt(1.0 - std::conj(z));
        const double r = std::abs(1.0 - phi - (1.0 - G) * g_desc);
        res.residuals.push_back(r);
        res.sup_residual = std::max(res.sup_residual, r);
    }
    return res;
}

PreRenewalResult pre_renewal_check(long long D, long long l_max) {
    if (D < 1) throw PreconditionError("pre_renewal_check: D >= 1");
    if (l_max < 0) throw PreconditionError("pre_renewal_check: l_max >= 0");
    const auto mu = sqrt_ladder_coeffs(l_max);
    const auto powers = oracle::exact_convolution_powers(mu, std::min(D, l_max), l_max);
    PreRenewalResult res;
    for (long long l = 0; l <= l_max; ++l) {
        Rational total(0);
        for (const auto& row : powers) total += row[static_cast<size_t>(l)];
        const Rational diff = total - h_down_exact(l);
        res.max_residual = std::max(res.max_residual, std::abs(to_double(diff)));
        if (D < l) {
            // mu^{*p}(l) <= C(l-1, p-1) 2^{-p}; sum_{p>D} <= 2^{l-D-2}
            res.omitted_bound = std::max(res.omitted_bound, std::exp2(double(l - D - 2)));
        }
    }
    return res;
}

}  // namespace o2gasket
