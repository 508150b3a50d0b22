#ifndef O2GASKET_SEQUENCES_HPP
#define O2GASKET_SEQUENCES_HPP

#include <cstdint>
#include <vector>

namespace o2gasket {

// A value together with an absolute error estimate.
struct Estimate {
    double value = 0.0;
    double abs_error = 0.0;
};

enum class SumMode {
    closed_form_digamma,
    direct_truncated,
};

struct TruncationConfig {
    double target_abs_tol = 1e-10;
    long long max_terms = 10'000'000;
    SumMode mode = SumMode::closed_form_digamma;
};

// Finitely supported sequence (g_1, ..., g_J) of non-negative reals with
// first moment sum_j j g_j <= 1 + moment_tolerance. Trailing zeros are
// trimmed so J is the canonical support size.
class GSequence {
public:
    static constexpr double kDefaultMomentTolerance = 1e-9;

    GSequence() = default;  // g identically zero
    explicit GSequence(std::vector<double> entries,
                       double moment_tolerance = kDefaultMomentTolerance);

    static GSequence zero() { return GSequence{}; }

    const std::vector<double>& entries() const { return entries_; }
    // g_j for j >= 1; zero outside the support.
    double entry(long long j) const {
        return (j >= 1 && j <= support()) ? entries_[static_cast<size_t>(j - 1)] : 0.0;
    }
    long long support() const { return static_cast<long long>(entries_.size()); }
    bool is_zero() const { return entries_.empty(); }

    double first_moment() const { return first_moment_; }    // sum j g_j
    double second_moment() const { return second_moment_; }  // sum j^2 g_j
    double sum() const { return sum_; }                      // sum g_j

    // sum_{j <= m} j g_j
    double prefix_moment(long long m) const;
    // sum_{j >= a} g_j
    double suffix_sum(long long a) const;

private:
    std::vector<double> entries_;
    std::vector<double> prefix_moment_;  // index m: sum_{j<=m} j g_j
    std::vector<double> suffix_sum_;     // index a: sum_{j>=a} g_j
    double first_moment_ = 0.0;
    double second_moment_ = 0.0;
    double sum_ = 0.0;
};

}  // namespace o2gasket

#endif
