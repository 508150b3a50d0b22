#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "o2gasket/errors.hpp"
#include "o2gasket/series.hpp"
#include "o2gasket/walks.hpp"
#include "o2gasket/weights.hpp"
#include "test_families.hpp"

using namespace o2gasket;

namespace {

constexpr double kPi = std::numbers::pi;

double binom_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

// Closed form of phi for the fully packed law through
// 1 - phi = 2 sin(t/2) e^{-it} f(e^{it}),
// f(z) = (2/pi)[(w + 1/w) atanh(w) - 1], w = sqrt(z).
std::complex<double> fully_packed_phi(double theta) {
    const std::complex<double> w = std::polar(1.0, theta / 2.0);
    const std::complex<double> at = 0.5 * std::log((1.0 + w) / (1.0 - w));
    const std::complex<double> f = (2.0 / kPi) * ((w + 1.0 / w) * at - 1.0);
    const std::complex<double> z = std::polar(1.0, theta);
    return 1.0 - 2.0 * std::sin(theta / 2.0) * f / z;
}

}  // namespace

TEST_CASE("sampler rejects an insufficient support cut") {
    const auto sym = NuDistribution::builtin_symmetric();
    // truncated mass at K = 100 is 2/(201 pi) ~ 3.17e-3 > 1e-3
    CHECK_THROWS_AS(AliasSampler(sym, 100, 1e-3), SamplerTruncationError);
    AliasSampler ok(sym, 1000, 1e-3);
    CHECK(ok.truncated_mass() == doctest::Approx(2.0 / (2001.0 * kPi)).epsilon(1e-10));
}

TEST_CASE("sampler draws stay within the support cut") {
    const auto sym = NuDistribution::builtin_symmetric();
    AliasSampler s(sym, 64, 0.01);
    rng::Xoshiro256pp gen(7);
    for (int i = 0; i < 100'000; ++i) {
        const long long v = s.sample(gen);
        CHECK(v >= -64);
        CHECK(v <= 64);
    }
}

TEST_CASE("sampler frequencies match nu within 4-sigma binomial bands") {
    const auto sym = NuDistribution::builtin_symmetric();
    AliasSampler s(sym, 4096, 1e-3);
    rng::Xoshiro256pp gen(20240811);
    const long long n = 10'000'000;
    std::map<long long, long long> counts;
    for (long long i = 0; i < n; ++i) ++counts[s.sample(gen)];
    for (long long k = -10; k <= 10; ++k) {
        const double p = s.probability(k);
        const double freq = double(counts[k]) / double(n);
        CHECK(std::abs(freq - p) < 4.0 * binom_sigma(p, double(n)) + 1e-9);
    }
}

TEST_CASE("ladder simulation is reproducible and worker-independent") {
    const auto sym = NuDistribution::builtin_symmetric();
    WalkConfig cfg;
    cfg.master_seed = 42;
    cfg.n_walks = 20'000;
    cfg.horizon = 5'000;
    cfg.support_cut = 4096;
    AliasSampler s = build_sampler(sym, cfg);

    cfg.workers = 1;
    const auto a = simulate_ladders(s, cfg);
    cfg.workers = 2;
    const auto b = simulate_ladders(s, cfg);
    CHECK(a.desc_height == b.desc_height);
    CHECK(a.asc_height == b.asc_height);
    CHECK(a.desc_epoch == b.desc_epoch);
    CHECK(a.censored_asc == b.censored_asc);

    const auto c = simulate_ladders(s, cfg);
    CHECK(b.desc_height == c.desc_height);
}

TEST_CASE("ladder histograms account for every walk") {
    const auto sym = NuDistribution::builtin_symmetric();
    WalkConfig cfg;
    cfg.n_walks = 30'000;
    cfg.horizon = 2'000;
    cfg.support_cut = 4096;
    const auto st = simulate_ladders(build_sampler(sym, cfg), cfg);
    std::uint64_t desc_total = st.censored_desc, asc_total = st.censored_asc;
    for (const auto& [v, c] : st.desc_height) {
        CHECK(v >= 1);
        desc_total += c;
    }
    for (const auto& [v, c] : st.asc_height) {
        CHECK(v >= 0);
        asc_total += c;
    }
    CHECK(desc_total == std::uint64_t(cfg.n_walks));
    CHECK(asc_total == std::uint64_t(cfg.n_walks));
}

TEST_CASE("descending ladder law matches the square-root coefficients") {
    const auto sym = NuDistribution::builtin_symmetric();
    WalkConfig cfg;
    cfg.master_seed = 1234;
    cfg.n_walks = 200'000;
    cfg.horizon = 20'000;
    cfg.support_cut = 8192;
    const auto st = simulate_ladders(build_sampler(sym, cfg), cfg);
    const double n = double(cfg.n_walks);
    const double expected[] = {0.5, 0.125, 0.0625, 5.0 / 128.0};
    for (int k = 1; k <= 4; ++k) {
        const double p = expected[k - 1];
        auto it = st.desc_height.find(k);
        const double freq = it == st.desc_height.end() ? 0.0 : double(it->second) / n;
        CHECK(std::abs(freq - p) < 5.0 * binom_sigma(p, n));
    }
    // weak ascending law for the symmetric model: 1/2, 1/4 at heights 0, 1
    for (int k = 0; k <= 1; ++k) {
        const double p = k == 0 ? 0.5 : 0.25;
        const double freq = double(st.asc_height.at(k)) / n;
        CHECK(std::abs(freq - p) < 5.0 * binom_sigma(p, n));
    }
}

TEST_CASE("descending ladder law is universal across synthesized families") {
    // G_desc does not depend on g at all; a drift-deficit family must
    // show the same square-root law.
    const auto families = testing::random_valid_families(2, testing::kFamilySeed + 7);
    for (const auto& g : families) {
        WalkConfig cfg;
        cfg.master_seed = 5150;
        cfg.n_walks = 100'000;
        cfg.horizon = 20'000;
        cfg.support_cut = 16384;
        const auto nu = NuDistribution::synthesized(g);
        const auto st = simulate_ladders(build_sampler(nu, cfg), cfg);
        const double n = double(cfg.n_walks);
        for (int k = 1; k <= 3; ++k) {
            const double p = to_double(sqrt_ladder_coeff(k));
            auto it = st.desc_height.find(k);
            const double freq = it == st.desc_height.end() ? 0.0 : double(it->second) / n;
            CHECK(std::abs(freq - p) < 5.0 * binom_sigma(p, n) + 2e-3);
        }
    }
}

TEST_CASE("fully packed ascending ladder frequency matches 1 - f_1") {
    WalkConfig cfg;
    cfg.master_seed = 31337;
    cfg.n_walks = 200'000;
    cfg.horizon = 20'000;
    cfg.support_cut = 32768;
    const auto fp = NuDistribution::builtin_fully_packed();
    const auto st = simulate_ladders(build_sampler(fp, cfg), cfg);
    const double p0 = 1.0 - 8.0 / (3.0 * kPi);
    const double freq = double(st.asc_height.at(0)) / double(cfg.n_walks);
    CHECK(std::abs(freq - p0) < 5.0 * binom_sigma(p0, double(cfg.n_walks)) + 1e-3);
}

TEST_CASE("censoring fraction falls as the horizon grows") {
    const auto sym = NuDistribution::builtin_symmetric();
    double prev = 1.0;
    for (long long horizon : {100LL, 1000LL, 10000LL}) {
        WalkConfig cfg;
        cfg.master_seed = 9;
        cfg.n_walks = 20'000;
        cfg.horizon = horizon;
        cfg.support_cut = 4096;
        const auto st = simulate_ladders(build_sampler(sym, cfg), cfg);
        const double frac =
            double(st.censored_asc + st.censored_desc) / (2.0 * double(cfg.n_walks));
        CHECK(frac < prev);
        prev = frac;
    }
    CHECK(prev < 0.02);
}

TEST_CASE("characteristic function closed values") {
    const auto sym = NuDistribution::builtin_symmetric();
    CHECK(std::abs(char_fn(sym, kPi)) < 1e-15);
    CHECK(std::abs(char_fn(sym, kPi / 3.0) - 0.5) < 1e-15);
    CHECK(std::abs(char_fn(sym, 0.0) - 1.0) < 1e-15);

    // the nu_sym series really sums to 1 - |sin(theta/2)|
    const auto g = builtin_example(Builtin::budd_symmetric).g;
    const auto synth = NuDistribution::synthesized(g);
    for (double theta : {0.7, kPi, 5.1}) {
        const auto phi = char_fn(synth, theta);
        CHECK(std::abs(phi - std::complex<double>(1.0 - std::abs(std::sin(theta / 2.0)), 0.0)) <
              2e-4);  // truncated-g scale
    }
}

TEST_CASE("characteristic function of the fully packed law vs its closed form") {
    const auto fp = NuDistribution::builtin_fully_packed();
    for (double theta : {0.4, 1.3, kPi, 4.9}) {
        const auto phi = char_fn(fp, theta);
        CHECK(std::abs(phi - fully_packed_phi(theta)) < 1e-7);
    }
}

TEST_CASE("ascending ladder series") {
    const auto ex = builtin_example(Builtin::budd_symmetric);
    const auto a = asc_ladder_series(ex.g, 4);
    CHECK(a[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(a[1] == doctest::Approx(0.25).epsilon(1e-7));
    CHECK(a[2] == doctest::Approx(0.0625).epsilon(1e-6));
    CHECK(a[3] == doctest::Approx(0.03125).epsilon(1e-5));

    const auto a0 = asc_ladder_series(GSequence::zero(), 1);
    CHECK(a0[0] == doctest::Approx(1.0 - 8.0 / (3.0 * kPi)).epsilon(1e-13));

    for (auto which : {Builtin::budd_symmetric, Builtin::fully_packed}) {
        const auto g = builtin_example(which).g;
        double tail_prev = 1.0;
        for (long long N : {1024LL, 4096LL, 16384LL}) {
            const auto b = asc_ladder_series(g, N);
            double sum = 0.0;
            for (double v : b) {
                CHECK(v >= -1e-9);
                sum += v;
            }
            CHECK(sum < 1.0);
            CHECK(1.0 - sum < tail_prev);
            tail_prev = 1.0 - sum;
        }
        CHECK(tail_prev < 0.05);  // log-enhanced n^{-3/2} tail decays slowly
    }
}

TEST_CASE("wiener-hopf residual on both builtins, small grid") {
    std::vector<double> grid;
    for (int i = 0; i < 16; ++i) grid.push_back(0.3 + (2.0 * kPi - 0.6) * double(i) / 15.0);
    for (auto which : {Builtin::budd_symmetric, Builtin::fully_packed}) {
        const auto ex = builtin_example(which);
        const auto res = wiener_hopf_residual(ex.g, grid, 2048);
        CHECK(res.sup_residual < 1e-5);
        CHECK(res.residuals.size() == grid.size());
    }
}

TEST_CASE("wiener-hopf residual shrinks with truncation order") {
    std::vector<double> grid = {0.9, 2.2, 4.1};
    for (auto which : {Builtin::budd_symmetric, Builtin::fully_packed}) {
        const auto g = builtin_example(which).g;
        const double coarse = wiener_hopf_residual(g, grid, 256).sup_residual;
        const double fine = wiener_hopf_residual(g, grid, 4096).sup_residual;
        CHECK(fine < coarse);
    }
}

TEST_CASE("wiener-hopf grid must avoid theta = 0") {
    std::vector<double> grid = {1e-9};
    CHECK_THROWS_AS(wiener_hopf_residual(GSequence::zero(), grid, 64), PreconditionError);
}

TEST_CASE("both factorisation sides vanish as theta -> 0+") {
    const auto sym = NuDistribution::builtin_symmetric();
    const double theta = 1e-3;
    CHECK(std::abs(1.0 - char_fn(sym, theta)) < 1e-3);
    CHECK(std::abs(std::sqrt(std::complex<double>(1.0, 0.0) -
                             std::polar(1.0, -theta))) < 0.05);
}

TEST_CASE("pre-renewal identity is exact in rational arithmetic") {
    const auto res = pre_renewal_check(200, 20);
    CHECK(res.max_residual == 0.0);
    CHECK(res.omitted_bound == 0.0);

    // censored depth: bound kicks in but stays honest
    const auto shallow = pre_renewal_check(3, 10);
    CHECK(shallow.max_residual > 0.0);
    CHECK(shallow.omitted_bound >= shallow.max_residual);
}
