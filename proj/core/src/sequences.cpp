#include "o2gasket/sequences.hpp"

#include <cmath>
#include <string>

#include "o2gasket/errors.hpp"

namespace o2gasket {

namespace {

// Kahan-compensated sum of f(j) over j = 1..n.
template <typename F>
double compensated_sum(long long n, F f) {
    double s = 0.0, c = 0.0;
    for (long long j = 1; j <= n; ++j) {
        double y = f(j) - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace

GSequence::GSequence(std::vector<double> entries, double moment_tolerance) {
    while (!entries.empty() && entries.back() == 0.0) entries.pop_back();
    for (size_t i = 0; i < entries.size(); ++i) {
        if (!std::isfinite(entries[i]) || entries[i] < 0.0)
            throw EntryError("GSequence: entry g_" + std::to_string(i + 1) +
                             " must be finite and non-negative");
    }
    entries_ = std::move(entries);
    const long long J = support();
    prefix_moment_.assign(static_cast<size_t>(J) + 1, 0.0);
    {
        double s = 0.0, c = 0.0;
        for (long long j = 1; j <= J; ++j) {
            double y = static_cast<double>(j) * entries_[static_cast<size_t>(j - 1)] - c;
            double t = s + y;
            c = (t - s) - y;
            s = t;
            prefix_moment_[static_cast<size_t>(j)] = s;
        }
        first_moment_ = s;
    }
    suffix_sum_.assign(static_cast<size_t>(J) + 2, 0.0);
    for (long long a = J; a >= 1; --a)
        suffix_sum_[static_cast<size_t>(a)] =
            suffix_sum_[static_cast<size_t>(a + 1)] + entries_[static_cast<size_t>(a - 1)];
    sum_ = J > 0 ? suffix_sum_[1] : 0.0;
    second_moment_ =
        compensated_sum(J, [&](long long j) { return double(j) * double(j) * entry(j); });

    if (first_moment_ > 1.0 + moment_tolerance)
        throw MomentExcessError("GSequence: first moment " + std::to_string(first_moment_) +
                                    " exceeds 1",
                                first_moment_);
}

double GSequence::prefix_moment(long long m) const {
    if (m <= 0) return 0.0;
    if (m >= support()) return first_moment_;
    return prefix_moment_[static_cast<size_t>(m)];
}

double GSequence::suffix_sum(long long a) const {
    if (a <= 1) return sum_;
    if (a > support()) return 0.0;
    return suffix_sum_[static_cast<size_t>(a)];
}

}  // namespace o2gasket
