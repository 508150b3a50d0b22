#ifndef O2GASKET_WEIGHTS_HPP
#define O2GASKET_WEIGHTS_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "o2gasket/sequences.hpp"

namespace o2gasket {

namespace detail {
struct NuBackend;
}

// Step law on the integers: positive side carries the gasket weights,
// negative side the partition-function sequence.
class NuDistribution {
public:
    enum class Source { synthesized, builtin_symmetric, builtin_fully_packed };

    static NuDistribution synthesized(GSequence g, TruncationConfig cfg = {});
    // nu_sym(k) = 1_{k=0} + (2/pi)/(4k^2-1), closed form.
    static NuDistribution builtin_symmetric();
    // g identically zero.
    static NuDistribution builtin_fully_packed(TruncationConfig cfg = {});

    Source source() const { return source_; }
    // The g this distribution was built from (nullopt for the closed-form
    // symmetric law, whose q-tilde sequence lives on the WeightFamily).
    const std::optional<GSequence>& g() const { return g_; }

    Estimate value(long long k) const;
    // nu(lo), ..., nu(hi) as a dense table.
    std::vector<double> window(long long lo, long long hi) const;
    double neg_tail(long long M) const;  // sum_{m>M} nu(-m)
    double pos_tail(long long K) const;  // sum_{k>K} nu(k)

    struct MassCheck {
        double partial;   // sum_{|k|<=K} nu(k)
        double tail;      // closed-form mass beyond the window
        double residual;  // partial + tail - 1
    };
    MassCheck mass_check(long long K) const;

    // Copy with a point defect nu(k0) += delta; a diagnostic hook for
    // exercising the validation pipeline on broken measures.
    NuDistribution perturbed(long long k0, double delta) const;

private:
    NuDistribution(std::shared_ptr<const detail::NuBackend> impl, Source source,
                   std::optional<GSequence> g);
    std::shared_ptr<const detail::NuBackend> impl_;
    Source source_;
    std::optional<GSequence> g_;
};

// W or q value that may exceed floating range: sign * exp(log_abs).
struct LogValue {
    double log_abs = 0.0;
    int sign = 0;
    double value() const;
};

struct SynthesisInfo {
    long long scan_window = 0;
    double min_nu = 0.0;
    long long min_nu_at = 0;
    bool tail_sign_verified = true;
};

// Critical O(2) family: q_k = nu(k-1) (nu(-1)/2)^{k-1},
// q~_k = g_k (nu(-1)/2)^{k-1}, c_q = 2/nu(-1), h = 1/c_q, n = 2.
class WeightFamily {
public:
    WeightFamily(NuDistribution nu, GSequence g, SynthesisInfo info = {});

    static constexpr double n = 2.0;

    const NuDistribution& nu() const { return nu_; }
    const GSequence& g() const { return g_; }
    const SynthesisInfo& synthesis_info() const { return info_; }

    double c_q() const { return cq_; }
    double h() const { return 1.0 / cq_; }
    double nu_minus_1() const { return nu_m1_; }

    double q(long long k) const;  // k >= 1
    LogValue log_q(long long k) const;
    double q_tilde(long long k) const;
    LogValue log_q_tilde(long long k) const;

private:
    NuDistribution nu_;
    GSequence g_;
    SynthesisInfo info_;
    double nu_m1_ = 0.0;
    double cq_ = 0.0;
};

// W(l) = c_q^{l+1} nu(-l-1) / 2; W(0) = 1 by the normalization
// nu(-1) = 2 W(0) / c_q. Log-scale representation guards overflow.
LogValue partition_function(const WeightFamily& wf, long long l);

// q_k - q~_k - 2 h^{2k} W(k); identically zero for a consistent family.
double consistency_q_qtilde(const WeightFamily& wf, long long k);

struct SynthesisOptions {
    double moment_tol = 1e-9;
    double degenerate_tol = 1e-9;
    double negativity_tol = 1e-10;
    long long scan_window = 0;  // 0: max(200, 4*support)
};

WeightFamily synthesize(GSequence g, TruncationConfig cfg = {}, SynthesisOptions opts = {});

struct ValidationTolerances {
    double mass = 1e-8;
    double harmonicity = 1e-8;
    double gasket = 1e-10;
    double nonneg = 1e-10;
};

struct ValidationReport {
    double mass_partial = 0.0;
    double mass_tail = 0.0;
    double mass_residual = 0.0;
    std::vector<double> harmonicity_residuals;  // p = 1..P
    double p0_residual = 0.0;                   // informational, not gated
    double harmonicity_tail_bound = 0.0;
    long long harmonicity_cutoff = 0;
    std::vector<double> gasket_residuals;  // min(0, nu(k-1)-nu(-k-1)), k = 1..K
    std::vector<std::pair<long long, double>> nonneg_violations;
    bool degenerate = false;  // nu(0) >= 1 - tol
    bool pass = false;
    std::vector<std::string> failing;
};

// The harmonicity verdict allows residual <= tol.harmonicity plus the
// reported truncation bound, so a capped cutoff stays honest.
ValidationReport validate_nu(const NuDistribution& nu, int depth, long long window,
                             ValidationTolerances tol = {},
                             long long max_harmonicity_cutoff = 1LL << 21);

enum class Builtin { budd_symmetric, fully_packed };

struct BuiltinExample {
    GSequence g;
    NuDistribution nu;
    WeightFamily family;
};

// The two reference models. budd_symmetric registers the closed-form g
//   g_k = 1_{k=1} + 2k/(pi (k-3/2)(k-1/2)(k+1/2)(k+3/2))
// truncated at J = 2000 with the last entry adjusted so sum j g_j = 1
// exactly; its nu is the closed form. fully_packed is g == 0.
BuiltinExample builtin_example(Builtin which, TruncationConfig cfg = {});

// Support size used for the registered symmetric-example g.
inline constexpr long long kBuddSupport = 2000;

// The closed-form g entry above, any k >= 1 (no truncation).
double budd_g_entry(long long k);

}  // namespace o2gasket

#endif
