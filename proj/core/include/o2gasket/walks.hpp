#ifndef O2GASKET_WALKS_HPP
#define O2GASKET_WALKS_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "o2gasket/sequences.hpp"
#include "o2gasket/weights.hpp"

namespace o2gasket {

namespace rng {

struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ (Blackman/Vigna), seeded through SplitMix64.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace rng

struct WalkConfig {
    std::uint64_t master_seed = 1;
    long long n_walks = 1'000'000;
    long long horizon = 100'000;
    long long support_cut = 32768;  // nu truncated to [-K, K], renormalized
    int workers = 0;                // 0: hardware concurrency
    double max_truncated_mass = 1e-3;
};

// Walker alias table over the truncated, renormalized step law.
class AliasSampler {
public:
    AliasSampler(const NuDistribution& nu, long long support_cut, double max_truncated_mass);

    long long sample(rng::Xoshiro256pp& gen) const {
        const std::uint64_t r = gen.next();
        const std::size_t i = static_cast<std::size_t>(
            (static_cast<unsigned __int128>(r) * n_) >> 64);
        return gen.uniform01() < prob_[i] ? value(i) : value(alias_[i]);
    }

    long long support_cut() const { return cut_; }
    double truncated_mass() const { return truncated_mass_; }
    // Renormalized probability of step k.
    double probability(long long k) const;

private:
    long long value(std::size_t i) const { return static_cast<long long>(i) - cut_; }
    long long cut_ = 0;
    std::uint64_t n_ = 0;
    double truncated_mass_ = 0.0;
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
    std::vector<double> pmf_;
};

AliasSampler build_sampler(const NuDistribution& nu, const WalkConfig& cfg);

struct LadderStatistics {
    long long n_walks = 0;
    long long horizon = 0;
    // First weak-ascending ladder height (>= 0) and epoch.
    std::map<long long, std::uint64_t> asc_height;
    std::map<long long, std::uint64_t> asc_epoch;
    // First strict-descending ladder: |height| (>= 1) and epoch.
    std::map<long long, std::uint64_t> desc_height;
    std::map<long long, std::uint64_t> desc_epoch;
    std::uint64_t censored_asc = 0;
    std::uint64_t censored_desc = 0;
};

// Runs n_walks independent walks from zero; records the first weak
// ascending and first strict descending ladder of each, censoring at the
// horizon. Per-walk RNG streams derive from master_seed, so the result
// is bit-identical for any worker count.
LadderStatistics simulate_ladders(const AliasSampler& sampler, const WalkConfig& cfg);

// phi(theta) = sum_k nu(k) e^{ik theta}; closed form 1 - |sin(theta/2)|
// for the builtin symmetric law, accelerated truncated sums otherwise.
std::complex<double> char_fn(const NuDistribution& nu, double theta,
                             const TruncationConfig& cfg = {});

// First N coefficients of the weak-ascending ladder-height law from
// G_asc(z) = 1 - sqrt(1-z) f(z)/z by formal series multiplication.
std::vector<double> asc_ladder_series(const GSequence& g, long long N, double tol = 1e-9);

struct WienerHopfResult {
    double sup_residual = 0.0;
    std::vector<double> residuals;
};

// sup over the grid of |1 - phi - (1 - G_asc(e^{i t}))(1 - G_desc(e^{-i t}))|
// with G_desc(z) = 1 - sqrt(1-z) on the principal branch and G_asc summed
// to N terms with an analytic tail correction.
WienerHopfResult wiener_hopf_residual(const GSequence& g, std::span<const double> theta_grid,
                                      long long N, const TruncationConfig& cfg = {});

struct PreRenewalResult {
    double max_residual = 0.0;
    double omitted_bound = 0.0;
};

// sum_{p<=D} mu^{*p}(l) vs h_down(l) in exact rational arithmetic, where
// mu is the square-root ladder law; the convolution powers vanish for
// p > l, so the omitted bound is zero once D >= l_max.
PreRenewalResult pre_renewal_check(long long D, long long l_max);

}  // namespace o2gasket

#endif
