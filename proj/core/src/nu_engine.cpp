#include "nu_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "o2gasket/errors.hpp"
#include "o2gasket/special.hpp"

namespace o2gasket::detail {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

std::vector<double> psi_stream(double arg0, size_t n) {
    std::vector<double> s(n);
    if (n == 0) return s;
    s[0] = digamma(arg0);
    double acc = s[0], comp = 0.0;
    for (size_t i = 1; i < n; ++i) {
        double y = 1.0 / (arg0 + double(i - 1)) - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
        s[i] = acc;
    }
    return s;
}

}  // namespace

NuEngine::NuEngine(GSequence g, TruncationConfig cfg) : fc_(std::move(g)), cfg_(cfg) {
    const long long J = fc_.support();
    l0_ = J + 2;
    f_direct_ = fc_.batch(l0_ - 1);
    const auto& w = fc_.comb_weights();
    psi_c_.resize(w.size());
    trig_c_.resize(w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        const double arg = double(l0_) + double(fc_.comb_t_min() + (long long)i) + 0.5;
        psi_c_[i] = digamma(arg);
        trig_c_[i] = trigamma(arg);
    }
    // The positive side of contiguous windows is filled through
    // nu(k) = g_{k+1} + nu(-k-2); verify the identity once.
    const long long ks = std::max<long long>(J, 1);
    const double lhs = value(ks).value;
    const double rhs = fc_.g().entry(ks + 1) + value(-ks - 2).value;
    if (std::abs(lhs - rhs) > 1e-8)
        throw Error("NuEngine: positive-side identity check failed (" + std::to_string(lhs) +
                    " vs " + std::to_string(rhs) + ")");
}

double NuEngine::f_at(long long l) const {
    return l < l0_ ? f_direct_[static_cast<size_t>(l)] : fc_.comb_value(l);
}

// sum_{l>=m0} 1/((l+c)(l+d)) given cached psi/trigamma at m0+c and a
// precomputed psi(m0+d); c and d differ by an integer here.
double NuEngine::pair_tail(double c, double psi_c, double trig_c, double d,
                           double psi_d) const {
    const double delta = d - c;
    if (delta == 0.0) return trig_c;
    return (psi_d - psi_c) / delta;
}

double NuEngine::value_direct_head(long long k, long long m0, double* abs_acc) const {
    double s = 0.0, comp = 0.0;
    for (long long l = 1; l < m0; ++l) {
        const double d1 = double(l - k) - 1.5, d2 = double(l - k) - 0.5;
        const double term = f_at(l) * (1.0 / d1 - 1.0 / d2);
        if (abs_acc) *abs_acc += std::abs(term);
        double y = term - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

Estimate NuEngine::value(long long k) const {
    const long long m0 = std::max(l0_, k + 3);
    double abs_acc = 0.0;
    const double head = value_direct_head(k, m0, &abs_acc);

    const auto& w = fc_.comb_weights();
    const long long t_min = fc_.comb_t_min();
    const double d1 = -double(k) - 1.5, d2 = -double(k) - 0.5;
    const double psi_d1 = digamma(double(m0) + d1);
    const double psi_d2 = digamma(double(m0) + d2);
    const bool cached = (m0 == l0_);
    double tail = 0.0, tail_abs = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const double c = double(t_min + (long long)i) + 0.5;
        double pc, tc;
        if (cached) {
            pc = psi_c_[i];
            tc = trig_c_[i];
        } else {
            const double arg = double(m0) + c;
            pc = digamma(arg);
            tc = (d1 == c || d2 == c) ? trigamma(arg) : 0.0;
        }
        const double term =
            w[i] * (pair_tail(c, pc, tc, d1, psi_d1) - pair_tail(c, pc, tc, d2, psi_d2));
        tail += term;
        tail_abs += std::abs(term);
    }
    Estimate e;
    e.value = (k == 0 ? 1.0 : 0.0) + head / kPi + tail / kPi2;
    e.abs_error = 2e-14 * (1.0 + abs_acc / kPi + tail_abs / kPi2);
    return e;
}

std::vector<double> NuEngine::window(long long lo, long long hi) const {
    if (lo > hi) return {};
    const long long J = fc_.support();
    const bool identity = hi >= J;
    const long long k_top = std::min(hi, J - 1);  // may be < lo; direct range still needed
    const long long k_bot = identity ? std::min(lo, -hi - 2) : lo;

    std::vector<double> direct;
    if (k_top >= k_bot) {
        const double arg0 = double(l0_ - k_top) - 1.5;
        const auto s = psi_stream(arg0, static_cast<size_t>(k_top - k_bot) + 2);
        direct.resize(static_cast<size_t>(k_top - k_bot) + 1);
        const auto& w = fc_.comb_weights();
        const long long t_min = fc_.comb_t_min();
        for (long long k = k_bot; k <= k_top; ++k) {
            const double head = value_direct_head(k, l0_, nullptr);
            const double psi_d1 = s[static_cast<size_t>(k_top - k)];
            const double psi_d2 = s[static_cast<size_t>(k_top - k) + 1];
            const double d1 = -double(k) - 1.5, d2 = -double(k) - 0.5;
            double tail = 0.0;
            for (size_t i = 0; i < w.size(); ++i) {
                if (w[i] == 0.0) continue;
                const double c = double(t_min + (long long)i) + 0.5;
                tail += w[i] * (pair_tail(c, psi_c_[i], trig_c_[i], d1, psi_d1) -
                                pair_tail(c, psi_c_[i], trig_c_[i], d2, psi_d2));
            }
            direct[static_cast<size_t>(k - k_bot)] =
                (k == 0 ? 1.0 : 0.0) + head / kPi + tail / kPi2;
        }
    }

    std::vector<double> out(static_cast<size_t>(hi - lo) + 1);
    for (long long k = lo; k <= hi; ++k) {
        if (k <= k_top) {
            out[static_cast<size_t>(k - lo)] = direct[static_cast<size_t>(k - k_bot)];
        } else {
            // nu(k) = g_{k+1} + nu(-k-2); g vanishes here since k >= J.
            out[static_cast<size_t>(k - lo)] =
                fc_.g().entry(k + 1) + direct[static_cast<size_t>(-k - 2 - k_bot)];
        }
    }
    return out;
}

double NuEngine::neg_tail(long long M) const {
    if (M < 0) throw PreconditionError("neg_tail: M >= 0");
    // sum_{m>M} nu(-m) = (1/pi) sum_l f_l / (l + M - 1/2)   (telescoped kernel)
    double head = 0.0;
    for (long long l = 1; l < l0_; ++l) head += f_direct_[static_cast<size_t>(l)] / (double(l + M) - 0.5);
    const auto& w = fc_.comb_weights();
    const long long t_min = fc_.comb_t_min();
    const double d = double(M) - 0.5;
    const double psi_d = digamma(double(l0_) + d);
    double tail = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const double c = double(t_min + (long long)i) + 0.5;
        tail += w[i] * pair_tail(c, psi_c_[i], trig_c_[i], d, psi_d);
    }
    return head / kPi + tail / kPi2;
}

double NuEngine::pos_tail(long long K) const {
    if (K < 0) throw PreconditionError("pos_tail: K >= 0");
    return fc_.g().suffix_sum(K + 2) + neg_tail(K + 2);
}

Estimate NuEngine::L(double x) const {
    if (!(x >= 1.0)) throw PreconditionError("L: requires x >= 1");
    const double x2 = x * x;
    double head = 0.0, abs_acc = 0.0;
    for (long long l = 1; l < l0_; ++l) {
        const double term = f_direct_[static_cast<size_t>(l)] *
                            (1.0 / (double(l) + x - 1.5) - 1.0 / (double(l) + x - 0.5));
        head += term;
        abs_acc += std::abs(term);
    }
    const auto& w = fc_.comb_weights();
    const long long t_min = fc_.comb_t_min();
    double tail = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const double c = double(t_min + (long long)i) + 0.5;
        tail += w[i] * (pole_pair_sum_from(l0_, c, x - 1.5) - pole_pair_sum_from(l0_, c, x - 0.5));
    }
    Estimate e;
    e.value = x2 * (head + tail / kPi);
    e.abs_error = 2e-14 * x2 * (abs_acc + std::abs(tail) / kPi) + 1e-13;
    return e;
}

Estimate NuEngine::L_tilde(double x) const {
    if (!(x >= 1.0)) throw PreconditionError("L_tilde: requires x >= 1");
    const auto& g = fc_.g();
    const long long J = g.support();
    const double sigma = g.first_moment();
    const long long m0 = std::max<long long>(2 * J, 1);
    const double x2 = x * x;
    double head = 0.0;
    for (long long l = 1; l < m0; ++l) {
        const double wl = (1.0 - g.prefix_moment(l / 2)) / double(l);
        head += wl * (1.0 / (double(l) + x - 1.5) - 1.0 / (double(l) + x - 0.5));
    }
    double tail = 0.0;
    if (std::abs(1.0 - sigma) > 0.0) {
        tail = (1.0 - sigma) *
               (pole_pair_sum_from(m0, 0.0, x - 1.5) - pole_pair_sum_from(m0, 0.0, x - 0.5));
    }
    Estimate e;
    e.value = x2 * (head + tail);
    e.abs_error = 2e-14 * x2 * (std::abs(head) + std::abs(tail)) + 1e-13;
    return e;
}

DirectNu::DirectNu(const GSequence& g, long long M) : g_(g), M_(M) {
    if (M <= 2 * g.support())
        throw PreconditionError("DirectNu: requires M > 2*support");
    f_ = FCoefficients(g).batch(M);
}

double DirectNu::tail_bound(long long k) const { return series_tail_bound(g_, M_, k); }

double DirectNu::value_only(long long k) const {
    double s = 0.0, comp = 0.0;
    for (long long l = 1; l <= M_; ++l) {
        const double d1 = double(l - k) - 1.5, d2 = double(l - k) - 0.5;
        const double term = f_[static_cast<size_t>(l)] * (1.0 / d1 - 1.0 / d2);
        double y = term - comp;
        double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return (k == 0 ? 1.0 : 0.0) + s / kPi;
}

Estimate DirectNu::value(long long k) const {
    Estimate e;
    e.value = value_only(k);
    e.abs_error = tail_bound(k) / kPi + 1e-15 * (1.0 + std::abs(e.value));
    return e;
}

}  // namespace o2gasket::detail
