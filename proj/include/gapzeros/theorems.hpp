#pragma once

#include "gapzeros/coeffs.hpp"
#include "gapzeros/errors.hpp"
#include "gapzeros/polyeval.hpp"
#include "gapzeros/support.hpp"
#include "gapzeros/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace gapzeros {

/// Relative slack applied to every inequality check.
inline constexpr double kInequalitySlack = 1e-9;

/// Half-width d^2 / (d + sqrt(2) a) of the exclusion interval around a point
/// at distance d from the support. Always in (0, d).
[[nodiscard]] inline double delta_radius(double d, double a_next) {
    if (!(d > 0.0) || !(a_next > 0.0)) throw PreconditionError("delta_radius: d and a_next must be positive");
    return d * d / (d + std::numbers::sqrt2 * a_next);
}

/// Zero count of p_n in the open interval; p_0 has none.
[[nodiscard]] inline std::size_t zeros_of_degree_in(const CoefficientSequence& seq, std::size_t n, double lo,
                                                   double hi) {
    if (n == 0) return 0;
    return count_zeros_in(seq, n, lo, hi);
}

/// Claim: p_n or p_{n+1} has no zeros within delta_n of x0.
struct GapCertificate {
    double x0 = 0.0;
    double d = 0.0;
    std::size_t n = 0;
    double delta_n = 0.0;
    std::size_t zeros_n = 0;   ///< zeros of p_n in (x0 - delta_n, x0 + delta_n)
    std::size_t zeros_n1 = 0;  ///< same for p_{n+1}
    bool verified = false;

    /// "n", "n+1", "both" or "none".
    [[nodiscard]] std::string zero_free_degree() const {
        if (zeros_n == 0 && zeros_n1 == 0) return "both";
        if (zeros_n == 0) return "n";
        if (zeros_n1 == 0) return "n+1";
        return "none";
    }
};

/// Checks the gap-exclusion statement at degree pair (n, n+1). `support` must be a
/// correct model of the support; verified == false then signals a violation.
[[nodiscard]] inline GapCertificate certify_theorem1(const CoefficientSequence& seq, const SupportModel& support,
                                                     double x0, std::size_t n) {
    const double d = support.dist(x0);
    if (!(d > 0.0)) throw PreconditionError("certify_theorem1: x0 lies in the support model");
    if (!std::isfinite(d)) throw PreconditionError("certify_theorem1: empty support model");
    GapCertificate c;
    c.x0 = x0;
    c.d = d;
    c.n = n;
    c.delta_n = delta_radius(d, seq.a(n + 1));
    c.zeros_n = zeros_of_degree_in(seq, n, x0 - c.delta_n, x0 + c.delta_n);
    c.zeros_n1 = zeros_of_degree_in(seq, n + 1, x0 - c.delta_n, x0 + c.delta_n);
    c.verified = c.zeros_n == 0 || c.zeros_n1 == 0;
    return c;
}

/// Eigenvalues of the size-N truncation of strip(seq), each fattened by eps and merged.
[[nodiscard]] inline SupportModel estimate_nu_support(const CoefficientSequence& seq, std::size_t N, double eps,
                                                      unsigned threads = 1) {
    if (N < 2) throw PreconditionError("estimate_nu_support: N must be >= 2");
    if (!(eps > 0.0)) throw PreconditionError("estimate_nu_support: eps must be positive");
    const auto T = truncate(strip(seq), N);
    const auto zs = eigenvalues(T, default_tolerance(T), threads);
    return SupportModel::fattened(zs.zeros, eps);
}

/// Eigenvalues of the size-N truncation of seq whose eps-neighbourhood meets no
/// other eigenvalue's: numerical isolated points of supp(d mu).
[[nodiscard]] inline std::vector<double> estimate_isolated_points(const CoefficientSequence& seq, std::size_t N,
                                                                  double eps, unsigned threads = 1) {
    if (N < 2) throw PreconditionError("estimate_isolated_points: N must be >= 2");
    if (!(eps > 0.0)) throw PreconditionError("estimate_isolated_points: eps must be positive");
    const auto T = truncate(seq, N);
    const auto z = eigenvalues(T, default_tolerance(T), threads).zeros;
    std::vector<double> out;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const bool left_clear = i == 0 || z[i] - z[i - 1] > 2.0 * eps;
        const bool right_clear = i + 1 == z.size() || z[i + 1] - z[i] > 2.0 * eps;
        if (left_clear && right_clear) out.push_back(z[i]);
    }
    return out;
}

enum class CertificateStatus { verified, failed, inconclusive };

[[nodiscard]] inline const char* to_string(CertificateStatus s) noexcept {
    switch (s) {
    case CertificateStatus::verified: return "verified";
    case CertificateStatus::failed: return "failed";
    case CertificateStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

/// Claim: p_n or p_{n+1} has at most one zero within delta_n of an isolated point x0.
struct IsolatedCertificate {
    double x0 = 0.0;
    double d0 = 0.0;
    std::size_t n = 0;
    double delta_n = 0.0;
    std::size_t zeros_n = 0;
    std::size_t zeros_n1 = 0;
    std::size_t low_zero_degree = 0;  ///< n or n+1: the degree with the fewer zeros
    std::size_t zero_count = 0;       ///< zero count at low_zero_degree
    /// Second-kind route: q_{n-1} or q_n zero-free on the same interval (n >= 1).
    bool q_level_checked = false;
    bool q_level_zero_free = false;
    CertificateStatus status = CertificateStatus::inconclusive;

    [[nodiscard]] bool verified() const noexcept { return status == CertificateStatus::verified; }
};

/// Isolated-point statement with delta_n = d0^2 / (d0 + sqrt2 a_{n+1}) using the
/// original sequence's a_{n+1}; d0 is the distance from x0 to `nu_support`.
[[nodiscard]] inline IsolatedCertificate certify_theorem2(const CoefficientSequence& seq,
                                                          const SupportModel& nu_support, double x0, std::size_t n) {
    IsolatedCertificate c;
    c.x0 = x0;
    c.n = n;
    c.d0 = nu_support.dist(x0);
    if (!(c.d0 > 0.0) || !std::isfinite(c.d0)) return c;
    c.delta_n = delta_radius(c.d0, seq.a(n + 1));
    const double lo = x0 - c.delta_n;
    const double hi = x0 + c.delta_n;
    c.zeros_n = zeros_of_degree_in(seq, n, lo, hi);
    c.zeros_n1 = zeros_of_degree_in(seq, n + 1, lo, hi);
    c.low_zero_degree = c.zeros_n <= c.zeros_n1 ? n : n + 1;
    c.zero_count = std::min(c.zeros_n, c.zeros_n1);
    if (n >= 1) {
        const auto q = strip(seq);
        c.q_level_checked = true;
        c.q_level_zero_free =
            zeros_of_degree_in(q, n - 1, lo, hi) == 0 || zeros_of_degree_in(q, n, lo, hi) == 0;
    }
    c.status = c.zero_count <= 1 ? CertificateStatus::verified : CertificateStatus::failed;
    return c;
}

inline constexpr std::size_t kDefaultNuTruncation = 2000;
inline constexpr double kDefaultNuFattening = 0.02;

/// Estimates both supports from size-N truncations. Throws PreconditionError
/// unless x0 is within eps of an isolated eigenvalue of the seq truncation.
[[nodiscard]] inline IsolatedCertificate certify_theorem2(const CoefficientSequence& seq, double x0, std::size_t n,
                                                          std::size_t N = kDefaultNuTruncation,
                                                          double eps = kDefaultNuFattening, unsigned threads = 1) {
    const auto isolated = estimate_isolated_points(seq, N, eps, threads);
    const bool ok = std::any_of(isolated.begin(), isolated.end(), [&](double p) { return std::abs(p - x0) <= eps; });
    if (!ok) throw PreconditionError("certify_theorem2: x0 is not an isolated point of the estimated support");
    return certify_theorem2(seq, estimate_nu_support(seq, N, eps, threads), x0, n);
}

/// For each zero w of p_j (1 <= j <= n+1):
///   |z0 - w| >= |p_j(z0)| dist(w, supp) / K_n(z0, z0)^{1/2}.
/// Bisection brackets are folded into the comparison.
[[nodiscard]] inline bool check_lemma21(const CoefficientSequence& seq, const SupportModel& support, double z0,
                                        std::size_t j, std::size_t n) {
    if (j < 1 || j > n + 1) throw PreconditionError("check_lemma21: need 1 <= j <= n + 1");
    const auto p = eval_p(seq, z0, std::max(j, n));
    if (p[j].is_zero()) return true;
    const double log_kernel = detail::log_sum_squares(std::span(p).first(n + 1));
    const double log_ratio = p[j].log_mag - 0.5 * log_kernel;
    const auto T = truncate(seq, j);
    const auto zs = eigenvalues(T, default_tolerance(T));
    for (std::size_t i = 0; i < zs.zeros.size(); ++i) {
        const double w = zs.zeros[i];
        const double width = zs.widths[i];
        const double dist_lower = std::max(0.0, support.dist(w) - width);
        if (dist_lower == 0.0) continue;
        const double lhs = std::abs(z0 - w) + width;
        const double rhs_log = log_ratio + std::log(dist_lower);
        if (lhs == 0.0) return false;
        if (rhs_log > std::log(lhs) + std::log1p(kInequalitySlack)) return false;
    }
    return true;
}

/// K_n(x, x) dist(x, supp)^2 <= a_{n+1}^2 [p_{n+1}(x)^2 + p_n(x)^2], in log space.
[[nodiscard]] inline bool check_lemma22(const CoefficientSequence& seq, const SupportModel& support, double x,
                                        std::size_t n) {
    const double d = support.dist(x);
    if (d == 0.0) return true;
    const auto p = eval_p(seq, x, n + 1);
    const double lhs = detail::log_sum_squares(std::span(p).first(n + 1)) + 2.0 * std::log(d);
    const double rhs = 2.0 * std::log(seq.a(n + 1)) + detail::log_sum_squares(std::span(p).subspan(n, 2));
    return lhs <= rhs + std::log1p(kInequalitySlack);
}

/// Outcome of comparing the zeros of p_{n+1} with those of q_n.
struct InterlaceReport {
    bool holds = false;
    /// Adjacent pairs closer than their bisection brackets: consistent with
    /// interlacing but not resolvable in double precision.
    std::size_t unresolved = 0;
};

[[nodiscard]] inline InterlaceReport interlace_report(const ZeroSet& outer, const ZeroSet& inner) {
    InterlaceReport r;
    if (outer.zeros.size() != inner.zeros.size() + 1) return r;
    // -1 ordered, 0 unresolved, +1 misordered
    auto order = [](double a, double wa, double b, double wb) {
        const double gap = (b - 0.5 * wb) - (a + 0.5 * wa);
        if (gap > 0.0) return -1;
        if (a <= b || std::abs(a - b) <= 0.5 * (wa + wb)) return 0;
        return 1;
    };
    for (std::size_t i = 0; i < inner.zeros.size(); ++i) {
        for (const int o : {order(outer.zeros[i], outer.widths[i], inner.zeros[i], inner.widths[i]),
                            order(inner.zeros[i], inner.widths[i], outer.zeros[i + 1], outer.widths[i + 1])}) {
            if (o > 0) return r;
            if (o == 0) ++r.unresolved;
        }
    }
    r.holds = true;
    return r;
}

/// Zeros of p_{n+1} and q_n interlace (n >= 1).
[[nodiscard]] inline bool check_interlace(const CoefficientSequence& seq, std::size_t n) {
    if (n < 1) throw PreconditionError("check_interlace: n must be >= 1");
    const auto P = truncate(seq, n + 1);
    const auto Q = truncate(strip(seq), n);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * P.scale();
    return interlace_report(eigenvalues(P, tol), eigenvalues(Q, tol)).holds;
}

/// Zeros of p_n and p_{n+1} interlace (n >= 1).
[[nodiscard]] inline bool check_adjacent_interlace(const CoefficientSequence& seq, std::size_t n) {
    if (n < 1) throw PreconditionError("check_adjacent_interlace: n must be >= 1");
    const auto P = truncate(seq, n + 1);
    const auto Q = truncate(seq, n);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * P.scale();
    return interlace_report(eigenvalues(P, tol), eigenvalues(Q, tol)).holds;
}

/// Stieltjes transform int d mu(x) / (x - z) approximated by the (1,1) entry of
/// (J_N - z)^{-1}, via the backward continued fraction
///   t_k = 1 / (b_k - z - a_k^2 t_{k+1}),  t_{N+1} = 0.
[[nodiscard]] inline std::complex<double> m_function(const CoefficientSequence& seq, std::complex<double> z,
                                                     std::size_t N) {
    if (z.imag() == 0.0) throw PreconditionError("m_function: z must be off the real axis");
    if (N < 1) throw PreconditionError("m_function: N must be >= 1");
    std::complex<double> t = 0.0;
    for (std::size_t k = N; k >= 1; --k) {
        const double a = seq.a(k);
        t = 1.0 / (seq.b(k) - z - a * a * t);
    }
    return t;
}

/// |m_nu(z) - a_1^{-2} [b_1 - z - 1/m_mu(z)]| with nu the second-kind measure.
[[nodiscard]] inline double check_eq32(const CoefficientSequence& seq, std::complex<double> z, std::size_t N) {
    const auto m_mu = m_function(seq, z, N);
    const auto m_nu = m_function(strip(seq), z, N);
    const double a1 = seq.a(1);
    return std::abs(m_nu - (seq.b(1) - z - 1.0 / m_mu) / (a1 * a1));
}

} // namespace gapzeros
