#pragma once

#include "gapzeros/coeffs.hpp"
#include "gapzeros/errors.hpp"

#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace gapzeros {

/// sign * exp(log_mag). An exact zero has sign 0 and log_mag = -inf.
/// The binary form mantissa * 2^exp2 is kept alongside so that representable
/// values convert back to double without rounding.
struct ScaledPolyValue {
    int sign = 0;
    double log_mag = -std::numeric_limits<double>::infinity();
    double mantissa = 0.0;
    long long exp2 = 0;

    [[nodiscard]] static ScaledPolyValue from_binary(double m, long long e) noexcept {
        if (m == 0.0) return {};
        return {m > 0.0 ? 1 : -1, std::log(std::abs(m)) + static_cast<double>(e) * std::numbers::ln2, m, e};
    }

    [[nodiscard]] static ScaledPolyValue from_double(double v) noexcept { return from_binary(v, 0); }

    /// Plain value; +-inf when the magnitude is not representable.
    [[nodiscard]] double value() const noexcept {
        if (sign == 0) return 0.0;
        if (exp2 > std::numeric_limits<int>::max()) return sign * std::numeric_limits<double>::infinity();
        if (exp2 < std::numeric_limits<int>::min()) return 0.0;
        return std::ldexp(mantissa, static_cast<int>(exp2));
    }

    [[nodiscard]] bool representable() const noexcept { return sign == 0 || std::isfinite(value()); }

    [[nodiscard]] bool is_zero() const noexcept { return sign == 0; }

    /// Orders by real value without exponentiating.
    friend std::partial_ordering operator<=>(const ScaledPolyValue& l, const ScaledPolyValue& r) noexcept {
        if (l.sign != r.sign) return l.sign <=> r.sign;
        if (l.sign == 0) return std::partial_ordering::equivalent;
        return l.sign > 0 ? l.log_mag <=> r.log_mag : r.log_mag <=> l.log_mag;
    }
    friend bool operator==(const ScaledPolyValue& l, const ScaledPolyValue& r) noexcept {
        return l.sign == r.sign && (l.sign == 0 || l.log_mag == r.log_mag);
    }
};

namespace detail {

// Running pair is renormalised by a power of two once it leaves [e^-64, e^64],
// so ratios between consecutive values are unaffected by rescaling.
inline constexpr double kRescaleHigh = 6.235149080811617e27;  // e^64
inline constexpr double kRescaleLow = 1.0 / kRescaleHigh;

inline ScaledPolyValue to_scaled(double mantissa, long long exp2) noexcept {
    return ScaledPolyValue::from_binary(mantissa, exp2);
}

/// log(sum exp(2 * log_mag)) over nonzero entries; -inf when all vanish.
inline double log_sum_squares(std::span<const ScaledPolyValue> vals) noexcept {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& v : vals)
        if (v.sign != 0) top = std::max(top, 2.0 * v.log_mag);
    if (!std::isfinite(top)) return top;
    double acc = 0.0;
    for (const auto& v : vals)
        if (v.sign != 0) acc += std::exp(2.0 * v.log_mag - top);
    return top + std::log(acc);
}

/// u * v as a plain double; OverflowError when out of range.
inline double product_value(const ScaledPolyValue& u, const ScaledPolyValue& v, const char* who) {
    if (u.is_zero() || v.is_zero()) return 0.0;
    if (u.log_mag + v.log_mag >= std::log(std::numeric_limits<double>::max()))
        throw OverflowError(std::string(who) + ": product exceeds double range");
    const long long e = u.exp2 + v.exp2;
    if (e < std::numeric_limits<int>::min()) return 0.0;
    const double r = std::ldexp(u.mantissa * v.mantissa, static_cast<int>(e));
    if (!std::isfinite(r)) throw OverflowError(std::string(who) + ": product exceeds double range");
    return r;
}

} // namespace detail

/// p_0(x), ..., p_n(x) from
///   a_{k+1} p_{k+1} = (x - b_{k+1}) p_k - a_k p_{k-1},   p_0 = 1, p_{-1} = 0.
[[nodiscard]] inline std::vector<ScaledPolyValue> eval_p(const CoefficientSequence& seq, double x, std::size_t n) {
    std::vector<ScaledPolyValue> out;
    out.reserve(n + 1);
    double prev = 0.0;
    double cur = 1.0;
    long long exp2 = 0;
    out.push_back(detail::to_scaled(cur, exp2));
    double a_prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a_next = seq.a(k + 1);
        const double next = ((x - seq.b(k + 1)) * cur - a_prev * prev) / a_next;
        prev = cur;
        cur = next;
        a_prev = a_next;
        const double big = std::max(std::abs(prev), std::abs(cur));
        if (big > detail::kRescaleHigh || (big < detail::kRescaleLow && big > 0.0)) {
            const int e = std::ilogb(big);
            prev = std::ldexp(prev, -e);
            cur = std::ldexp(cur, -e);
            exp2 += e;
        }
        out.push_back(detail::to_scaled(cur, exp2));
    }
    return out;
}

/// Same recurrence in plain doubles with no rescaling; overflows for large n off the support.
[[nodiscard]] inline std::vector<double> eval_p_plain(const CoefficientSequence& seq, double x, std::size_t n) {
    std::vector<double> out;
    out.reserve(n + 1);
    out.push_back(1.0);
    double prev = 0.0;
    double a_prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a_next = seq.a(k + 1);
        const double next = ((x - seq.b(k + 1)) * out.back() - a_prev * prev) / a_next;
        prev = out.back();
        out.push_back(next);
        a_prev = a_next;
    }
    return out;
}

/// Second-kind polynomials q_0..q_n.
[[nodiscard]] inline std::vector<ScaledPolyValue> eval_q(const CoefficientSequence& seq, double x, std::size_t n) {
    return eval_p(strip(seq), x, n);
}

/// log of the leading coefficient gamma_n = 1 / (a_1 ... a_n).
[[nodiscard]] inline double leading_coeff(const CoefficientSequence& seq, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s -= std::log(seq.a(k));
    return s;
}

struct KernelValue {
    double value = 0.0;
    std::size_t n = 0;
    double x = 0.0;
    double y = 0.0;
};

/// K_n(x, y) = sum_{j<=n} p_j(x) p_j(y), Neumaier-compensated.
/// Throws OverflowError if a term is not representable.
[[nodiscard]] inline KernelValue kernel_direct(const CoefficientSequence& seq, double x, double y, std::size_t n) {
    const auto px = eval_p(seq, x, n);
    const auto py = eval_p(seq, y, n);
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double term = detail::product_value(px[j], py[j], "kernel_direct");
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    const double v = sum + comp;
    if (!std::isfinite(v)) throw OverflowError("kernel_direct: sum exceeds double range");
    return {v, n, x, y};
}

/// Christoffel-Darboux form a_{n+1} [p_{n+1}(x) p_n(y) - p_{n+1}(y) p_n(x)] / (x - y).
/// Rejects |x - y| < 1e-12 (1 + |x|).
[[nodiscard]] inline KernelValue kernel_cd(const CoefficientSequence& seq, double x, double y, std::size_t n) {
    if (std::abs(x - y) < 1e-12 * (1.0 + std::abs(x)))
        throw PreconditionError("kernel_cd: x and y coincide to within tolerance");
    const auto px = eval_p(seq, x, n + 1);
    const auto py = eval_p(seq, y, n + 1);
    const double bracket = detail::product_value(px[n + 1], py[n], "kernel_cd") -
                           detail::product_value(py[n + 1], px[n], "kernel_cd");
    const double v = seq.a(n + 1) * bracket / (x - y);
    if (!std::isfinite(v)) throw OverflowError("kernel_cd: value exceeds double range");
    return {v, n, x, y};
}

/// log K_n(x, x), valid for any n (no overflow).
[[nodiscard]] inline double log_kernel_diagonal(const CoefficientSequence& seq, double x, std::size_t n) {
    const auto p = eval_p(seq, x, n);
    return detail::log_sum_squares(p);
}

} // namespace gapzeros
