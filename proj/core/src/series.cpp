#include "o2gasket/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "o2gasket/errors.hpp"
#include "o2gasket/special.hpp"
#include "nu_engine.hpp"

namespace o2gasket {

namespace {
constexpr double kPi = std::numbers::pi;
}

double h_down(long long l) {
    if (l < 0) return 0.0;
    double h = 1.0;
    for (long long i = 0; i < l; ++i) h *= double(2 * i + 1) / double(2 * i + 2);
    return h;
}

std::vector<double> h_down_table(long long n) {
    std::vector<double> h(static_cast<size_t>(n) + 1);
    h[0] = 1.0;
    for (long long i = 0; i < n; ++i)
        h[static_cast<size_t>(i + 1)] =
            h[static_cast<size_t>(i)] * double(2 * i + 1) / double(2 * i + 2);
    return h;
}

Rational h_down_exact(long long l) {
    if (l < 0) return Rational(0);
    Rational h(1);
    for (long long i = 0; i < l; ++i) h *= Rational(2 * i + 1, 2 * i + 2);
    return h;
}

double half_harmonic_window(long long k, long long j) {
    if (j < 1) throw PreconditionError("half_harmonic_window: j >= 1");
    if (k == 0) return 0.0;
    if (k < 0) return -half_harmonic_window(-k, j);
    const long long lo = std::llabs(k - j);
    const long long hi = k + j - 1;
    double s = 0.0;
    for (long long m = hi; m >= lo; --m) s += 1.0 / (double(m) + 0.5);
    return s;
}

Rational half_harmonic_window_exact(long long k, long long j) {
    if (j < 1) throw PreconditionError("half_harmonic_window_exact: j >= 1");
    if (k == 0) return Rational(0);
    if (k < 0) return -half_harmonic_window_exact(-k, j);
    const long long lo = std::llabs(k - j);
    const long long hi = k + j - 1;
    Rational s(0);
    for (long long m = lo; m <= hi; ++m) s += Rational(2, 2 * m + 1);
    return s;
}

Rational sqrt_ladder_coeff(long long k) {
    if (k <= 0) return Rational(0);
    Rational c(1, 2);
    for (long long i = 1; i < k; ++i) c *= Rational(2 * i - 1, 2 * i + 2);
    return c;
}

std::vector<Rational> sqrt_ladder_coeffs(long long n) {
    std::vector<Rational> c(static_cast<size_t>(n) + 1, Rational(0));
    if (n >= 1) c[1] = Rational(1, 2);
    for (long long k = 1; k < n; ++k)
        c[static_cast<size_t>(k + 1)] = c[static_cast<size_t>(k)] * Rational(2 * k - 1, 2 * k + 2);
    return c;
}

std::vector<double> sqrt_ladder_coeffs_d(long long n) {
    std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
    if (n >= 1) c[1] = 0.5;
    for (long long k = 1; k < n; ++k)
        c[static_cast<size_t>(k + 1)] =
            c[static_cast<size_t>(k)] * double(2 * k - 1) / double(2 * k + 2);
    return c;
}

FCoefficients::FCoefficients(GSequence g) : g_(std::move(g)) {
    const long long J = g_.support();
    t_min_ = -std::max<long long>(J, 1);
    const long long t_max = std::max<long long>(J, 1) - 1;
    weights_.assign(static_cast<size_t>(t_max - t_min_ + 1), 0.0);
    for (long long t = t_min_; t <= t_max; ++t) {
        double w = 0.0;
        if (t == -1) w += 1.0;
        if (t == 0) w += 1.0;
        w -= g_.suffix_sum(std::max(t + 1, -t));
        weights_[static_cast<size_t>(t - t_min_)] = w;
    }
}

double FCoefficients::comb_value(long long k) const {
    double s = 0.0;
    for (size_t i = 0; i < weights_.size(); ++i) {
        const double c = double(t_min_ + static_cast<long long>(i)) + 0.5;
        s += weights_[i] / (double(k) + c);
    }
    return s / kPi;
}

double FCoefficients::value(long long k) const {
    if (k < 1) throw PreconditionError("FCoefficients::value: k >= 1");
    const long long J = g_.support();
    if (k > J) return comb_value(k);
    double s = 2.0 * double(k) / (double(k) * double(k) - 0.25);
    for (long long j = 1; j <= J; ++j) {
        const double gj = g_.entry(j);
        if (gj == 0.0) continue;
        s -= gj * (digamma(double(k + j) + 0.5) - digamma(double(std::llabs(k - j)) + 0.5));
    }
    return s / kPi;
}

std::vector<double> FCoefficients::batch(long long n) const {
    std::vector<double> f(static_cast<size_t>(n) + 1, 0.0);
    const long long J = g_.support();
    const long long small = std::min(n, J);
    if (small >= 1) {
        // Hc[i] = sum_{m=0}^{i-1} 1/(m+1/2), compensated.
        std::vector<double> hc(static_cast<size_t>(small + J) + 1, 0.0);
        double s = 0.0, comp = 0.0;
        for (long long i = 0; i < small + J; ++i) {
            double y = 1.0 / (double(i) + 0.5) - comp;
            double t = s + y;
            comp = (t - s) - y;
            s = t;
            hc[static_cast<size_t>(i + 1)] = s;
        }
        for (long long k = 1; k <= small; ++k) {
            double acc = 2.0 * double(k) / (double(k) * double(k) - 0.25);
            for (long long j = 1; j <= J; ++j) {
                const double gj = g_.entry(j);
                if (gj == 0.0) continue;
                acc -= gj * (hc[static_cast<size_t>(k + j)] -
                             hc[static_cast<size_t>(std::llabs(k - j))]);
            }
            f[static_cast<size_t>(k)] = acc / kPi;
        }
    }
    for (long long k = small + 1; k <= n; ++k) f[static_cast<size_t>(k)] = comb_value(k);
    return f;
}

double f_coeff(const GSequence& g, long long k) { return FCoefficients(g).value(k); }

double f_total(const GSequence& g, double moment_tol) {
    if (std::abs(g.first_moment() - 1.0) > moment_tol)
        throw PreconditionError("f_total: requires sum j g_j = 1, got " +
                                std::to_string(g.first_moment()));
    // Inner sum A(m) = sum_{l=0}^{m} (1/(l+1/2) + 1/(l-1/2)); the l = 0
    // bracket is 2 - 2 = 0, so A(0) = 0. B(j) = sum_{m=0}^{j-1} A(m).
    const long long J = g.support();
    double total = 0.0, comp = 0.0;
    double A = 0.0;  // holds A(j-1) at the top of iteration j
    double B = 0.0;
    for (long long j = 1; j <= J; ++j) {
        B += A;  // B(j)
        const double gj = g.entry(j);
        if (gj != 0.0) {
            double y = gj * B - comp;
            double t = total + y;
            comp = (t - total) - y;
            total = t;
        }
        A += 1.0 / (double(j) + 0.5) + 1.0 / (double(j) - 0.5);  // A(j)
    }
    return total / kPi;
}

Estimate nu_value(const GSequence& g, long long k, const TruncationConfig& cfg) {
    detail::NuEngine engine(g, cfg);
    return engine.value(k);
}

double series_tail_bound(const GSequence& g, long long M, long long k) {
    const long long J = g.support();
    if (M <= 2 * J) throw PreconditionError("series_tail_bound: requires M > 2*support");
    const double a = (2.0 / kPi) * std::max(0.0, 1.0 - g.first_moment());
    const double b = (2.0 / kPi) * (g.second_moment() + 0.5);

    // Pointwise bound summed over (M, M'], Kahan-compensated; |kernel| =
    // |1/(l-k-3/2) - 1/(l-k-1/2)| has no singular term at half-integers.
    const long long Mp = std::max(4 * M, 8 * (J + std::llabs(k) + 4));
    double s = 0.0, comp = 0.0;
    for (long long l = M + 1; l <= Mp; ++l) {
        const double d1 = double(l - k) - 1.5, d2 = double(l - k) - 0.5;
        const double kf = std::abs(1.0 / d1 - 1.0 / d2);
        const double lj = double(l - J);
        const double term = (a / lj + b / (lj * lj)) * kf;
        double y = term - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    // Beyond M' every factor exceeds l/2, so the summand is at most
    // 8a/l^3 + 16b/l^4; integral comparison closes the remainder.
    const double mp = double(Mp);
    const double remainder = 8.0 * a / (2.0 * mp * mp) + 16.0 * b / (3.0 * mp * mp * mp);
    return s * (1.0 + 1e-12) + remainder;
}

}  // namespace o2gasket
