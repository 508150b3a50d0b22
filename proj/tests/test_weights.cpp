#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "o2gasket/errors.hpp"
#include "o2gasket/oracle.hpp"
#include "o2gasket/series.hpp"
#include "o2gasket/weights.hpp"
#include "test_families.hpp"

using namespace o2gasket;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("synthesize the fully packed model: c_q = pi^2/2") {
    WeightFamily wf = synthesize(GSequence::zero());
    CHECK(wf.c_q() == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-12));
    CHECK(wf.nu_minus_1() == doctest::Approx(4.0 / (kPi * kPi)).epsilon(1e-12));
    for (long long k = 1; k <= 64; ++k) CHECK(wf.q_tilde(k) == 0.0);
}

TEST_CASE("synthesize the symmetric-example g: c_q = 3 pi") {
    const auto ex = builtin_example(Builtin::budd_symmetric);
    WeightFamily wf = synthesize(ex.g);
    CHECK(std::abs(wf.c_q() - 3.0 * kPi) / (3.0 * kPi) < 1e-8);
}

TEST_CASE("synthesize rejects the Dirac g") {
    CHECK_THROWS_AS(synthesize(GSequence({1.0})), DegenerateNuError);
}

TEST_CASE("moment excess is rejected") {
    CHECK_THROWS_AS(GSequence({1.01}), MomentExcessError);
    CHECK_THROWS_AS(GSequence({0.0, 0.505}), MomentExcessError);
}

TEST_CASE("negativity witness through a relaxed moment gate") {
    // sigma = 1.2 makes the far negative side of nu go negative; the scan
    // must reject with a witness. No g with sigma <= 1 can reach this
    // (nu is affine in g and non-negative at every simplex vertex).
    GSequence g({0.0, 0.6}, /*moment_tolerance=*/0.25);
    SynthesisOptions opts;
    opts.moment_tol = 0.25;
    try {
        synthesize(g, {}, opts);
        FAIL("expected NegativityError");
    } catch (const NegativityError& e) {
        CHECK(e.value < 0.0);
        CHECK(e.witness_k < -50);
        CHECK(nu_value(g, e.witness_k).value == doctest::Approx(e.value).epsilon(1e-9));
    }
}

TEST_CASE("validate_nu passes the builtin symmetric law") {
    const auto rep = validate_nu(NuDistribution::builtin_symmetric(), 50, 200);
    CHECK(rep.pass);
    for (double r : rep.harmonicity_residuals) CHECK(r <= 1e-8);
    CHECK(std::abs(rep.mass_residual) < 1e-10);
    // p = 0 is recorded but never gated
    CHECK(rep.p0_residual >= 0.0);
}

TEST_CASE("validate_nu flags a Dirac-like law as degenerate") {
    const auto nu = NuDistribution::synthesized(GSequence({1.0}));
    const auto rep = validate_nu(nu, 10, 50);
    CHECK_FALSE(rep.pass);
    bool flagged = false;
    for (const auto& f : rep.failing) flagged |= (f == "degenerate");
    CHECK(flagged);
}

TEST_CASE("validate_nu catches an injected mass defect") {
    const auto nu = NuDistribution::builtin_symmetric().perturbed(0, 0.01);
    const auto rep = validate_nu(nu, 10, 100);
    CHECK_FALSE(rep.pass);
    CHECK(rep.mass_residual == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("partition function values") {
    const auto ex = builtin_example(Builtin::budd_symmetric);
    CHECK(partition_function(ex.family, 0).value() == 1.0);
    CHECK(partition_function(ex.family, 1).value() ==
          doctest::Approx(3.0 * kPi / 5.0).epsilon(1e-12));

    // fully packed W(1) against the direct-summation oracle
    const auto fp = builtin_example(Builtin::fully_packed);
    const double w1 = partition_function(fp.family, 1).value();
    const auto direct = oracle::direct_nu(GSequence::zero(), -2, 200'000);
    const double cq = fp.family.c_q();
    CHECK(std::abs(w1 - cq * cq * direct.value / 2.0) < 1e-9);
}

TEST_CASE("builtin symmetric partition functions match the closed form up to l = 100") {
    const auto ex = builtin_example(Builtin::budd_symmetric);
    const double log3pi = std::log(3.0 * kPi);
    for (long long l = 0; l <= 100; ++l) {
        const LogValue w = partition_function(ex.family, l);
        REQUIRE(w.sign == 1);
        const double log_residual =
            w.log_abs + std::log(kPi) + std::log(4.0 * double(l + 1) * double(l + 1) - 1.0) -
            double(l + 1) * log3pi;
        CHECK(std::abs(log_residual) < 1e-10);
    }
}

TEST_CASE("consistency q = q~ + 2 h^{2k} W(k)") {
    const auto ex = builtin_example(Builtin::budd_symmetric);
    // closed-form arithmetic at k = 1: (1-2/pi) - (1-32/(15pi)) - 2/(15pi) = 0
    const double closed = (1.0 - 2.0 / kPi) - (1.0 - 32.0 / (15.0 * kPi)) - 2.0 / (15.0 * kPi);
    CHECK(std::abs(closed) < 1e-16);
    CHECK(std::abs(consistency_q_qtilde(ex.family, 1)) < 1e-10);
    for (long long k = 1; k <= 32; ++k)
        CHECK(std::abs(consistency_q_qtilde(ex.family, k)) < 1e-10);

    const auto fp = builtin_example(Builtin::fully_packed);
    for (long long k = 1; k <= 32; ++k) {
        CHECK(fp.family.q_tilde(k) == 0.0);
        CHECK(std::abs(consistency_q_qtilde(fp.family, k)) < 1e-10);
    }
}

TEST_CASE("builtin example values") {
    const auto ex = builtin_example(Builtin::budd_symmetric);
    CHECK(ex.nu.value(1).value == doctest::Approx(2.0 / (3.0 * kPi)).epsilon(1e-14));
    CHECK(ex.nu.value(-1).value == doctest::Approx(2.0 / (3.0 * kPi)).epsilon(1e-14));
    CHECK(ex.family.c_q() == doctest::Approx(3.0 * kPi).epsilon(1e-14));
    // registered g folds the tail moment into the last entry
    CHECK(std::abs(ex.g.first_moment() - 1.0) < 1e-12);
    CHECK(ex.g.support() == kBuddSupport);
    CHECK(ex.g.entry(1) == doctest::Approx(1.0 - 32.0 / (15.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("round trip: extracting g from a synthesized family recovers it") {
    const auto families = testing::random_valid_families(5, testing::kFamilySeed + 3);
    for (const auto& g : families) {
        WeightFamily wf = synthesize(g);
        for (long long k = 1; k <= g.support(); ++k) {
            const Estimate a = wf.nu().value(k - 1);
            const Estimate b = wf.nu().value(-k - 1);
            const double recovered = a.value - b.value;
            CHECK(std::abs(recovered - g.entry(k)) <= 2.0 * (a.abs_error + b.abs_error) + 1e-12);
        }
    }
}

TEST_CASE("scale covariance: q and W map back to nu") {
    const auto families = testing::random_valid_families(2, testing::kFamilySeed + 4);
    for (const auto& g : families) {
        WeightFamily wf = synthesize(g);
        const double cq = wf.c_q();
        for (long long k = 0; k <= 64; ++k) {
            const double lhs = wf.q(k + 1) * std::pow(cq, double(k));
            CHECK(lhs == doctest::Approx(wf.nu().value(k).value).epsilon(1e-9));
            const double w = partition_function(wf, k).value();
            const double rhs = 2.0 * w * std::pow(cq, -double(k) - 1.0);
            CHECK(rhs == doctest::Approx(wf.nu().value(-k - 1).value).epsilon(1e-9));
        }
    }
}

TEST_CASE("mass closes through the telescoped tails") {
    CHECK(std::abs(NuDistribution::builtin_symmetric().mass_check(1000).residual) < 1e-12);
    CHECK(std::abs(NuDistribution::builtin_fully_packed().mass_check(500).residual) < 1e-10);
    const auto ex = builtin_example(Builtin::budd_symmetric);
    const auto nu = NuDistribution::synthesized(ex.g);
    CHECK(std::abs(nu.mass_check(400).residual) < 1e-9);
}

TEST_CASE("log accessors agree with plain ones in range") {
    const auto ex = builtin_example(Builtin::budd_symmetric);
    for (long long k : {1LL, 5LL, 40LL}) {
        CHECK(std::exp(ex.family.log_q(k).log_abs) == doctest::Approx(ex.family.q(k)).epsilon(1e-12));
        if (ex.family.q_tilde(k) > 0.0)
            CHECK(std::exp(ex.family.log_q_tilde(k).log_abs) ==
                  doctest::Approx(ex.family.q_tilde(k)).epsilon(1e-12));
    }
    // far beyond underflow the log path still reports
    const LogValue lq = ex.family.log_q(800);
    CHECK(lq.sign == 1);
    CHECK(lq.log_abs < -1500.0);
}
