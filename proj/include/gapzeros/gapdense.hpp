#pragma once

#include "gapzeros/coeffs.hpp"
#include "gapzeros/errors.hpp"
#include "gapzeros/support.hpp"
#include "gapzeros/tridiag.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gapzeros {

/// Trace of the two-step transfer matrix of the period-2 operator with zero diagonal.
[[nodiscard]] inline double discriminant(double a1, double a2, double x) {
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw PreconditionError("discriminant: a1, a2 must be positive");
    return (x * x - (a1 * a1 + a2 * a2)) / (a1 * a2);
}

/// {x : |discriminant(x)| <= 2} = [-(a1+a2), -|a1-a2|] u [|a1-a2|, a1+a2].
[[nodiscard]] inline SupportModel bands(double a1, double a2) {
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw PreconditionError("bands: a1, a2 must be positive");
    return periodic2_bands(a1, a2);
}

/// Degree of the block-n test polynomial: 2(n+1)^2 - 1.
[[nodiscard]] constexpr std::size_t block_degree(std::size_t n) noexcept { return 2 * (n + 1) * (n + 1) - 1; }

/// (p_0(0), ..., p_{j-1}(0)) for the period-(3,1) family with zero diagonal:
/// 0 at odd indices, (-3)^k at index 2k.
[[nodiscard]] inline std::vector<double> phi_vector(std::size_t j) {
    if (j % 2 == 0) throw PreconditionError("phi_vector: j must be odd");
    if (static_cast<double>((j - 1) / 2) * std::log(3.0) >= std::log(std::numeric_limits<double>::max()))
        throw OverflowError("phi_vector: entries exceed double range");
    std::vector<double> phi(j, 0.0);
    double v = 1.0;
    for (std::size_t k = 0; k < j; k += 2) {
        phi[k] = v;
        v *= -3.0;
    }
    return phi;
}

struct ResidualResult {
    std::size_t n = 0;
    std::size_t j = 0;
    double beta_n = 0.0;
    double residual_sq = 0.0;  ///< ||(L_{j;F} - beta_n) phi||^2 / ||phi||^2
    double bound = 0.0;        ///< 4 * 3^{-4n}
    /// Residual components at rows 2n^2..j (1-based) are all exactly zero.
    bool tail_vanishes = false;

    [[nodiscard]] bool within_bound() const noexcept { return residual_sq <= bound; }
};

namespace detail {

__extension__ typedef __int128 int128;

inline int128 checked_mul(int128 x, int128 y, const char* who) {
    int128 r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError(std::string(who) + ": exceeds 128-bit integers");
    return r;
}

inline int128 checked_add(int128 x, int128 y, const char* who) {
    int128 r;
    if (__builtin_add_overflow(x, y, &r)) throw OverflowError(std::string(who) + ": exceeds 128-bit integers");
    return r;
}

/// x * 2^shift as an integer; throws unless exact.
inline int128 dyadic_to_int(double x, int shift, const char* who) {
    const double scaled = std::ldexp(x, shift);
    if (scaled != std::trunc(scaled) || std::abs(scaled) >= 0x1p62)
        throw OverflowError(std::string(who) + ": coefficient is not a short dyadic rational");
    return static_cast<int128>(static_cast<long long>(scaled));
}

} // namespace detail

/// Residual of phi_j as a trial eigenvector of the block-n truncation at beta_n.
/// The matrix-vector product is exact: coefficients are scaled by a common power
/// of two and multiplied out in 128-bit integers (n <= 7); only the two norms
/// are rounded.
[[nodiscard]] inline ResidualResult residual_check(std::size_t n) {
    static constexpr const char* who = "residual_check";
    if (n < 1) throw PreconditionError("residual_check: n must be >= 1");
    ResidualResult r;
    r.n = n;
    r.j = block_degree(n);
    r.beta_n = beta(n);
    r.bound = 4.0 * std::pow(3.0, -4.0 * static_cast<double>(n));
    const auto T = truncate(make_section4(), r.j);
    const auto& d = T.diag();
    const auto& e = T.offdiag();
    int shift = 0;
    for (double x : d)
        while (std::ldexp(x, shift) != std::trunc(std::ldexp(x, shift))) ++shift;
    std::vector<detail::int128> phi(r.j, 0);
    detail::int128 v = 1;
    for (std::size_t k = 0; k < r.j; k += 2) {
        phi[k] = v;
        if (k + 2 < r.j) v = detail::checked_mul(v, -3, who);
    }
    const auto beta_scaled = detail::dyadic_to_int(r.beta_n, shift, who);
    std::vector<detail::int128> res(r.j);
    for (std::size_t i = 0; i < r.j; ++i) {
        auto y = detail::checked_mul(detail::dyadic_to_int(d[i], shift, who) - beta_scaled, phi[i], who);
        if (i > 0) y = detail::checked_add(y, detail::checked_mul(detail::dyadic_to_int(e[i - 1], shift, who), phi[i - 1], who), who);
        if (i + 1 < r.j) y = detail::checked_add(y, detail::checked_mul(detail::dyadic_to_int(e[i], shift, who), phi[i + 1], who), who);
        res[i] = y;
    }
    long double num = 0.0L;
    long double den = 0.0L;
    for (std::size_t i = 0; i < r.j; ++i) {
        const auto ri = static_cast<long double>(res[i]);
        const auto pi = static_cast<long double>(phi[i]);
        num += ri * ri;
        den += pi * pi;
    }
    r.residual_sq = static_cast<double>(num / (den * std::ldexp(1.0L, 2 * shift)));
    r.tail_vanishes = true;
    for (std::size_t row = 2 * n * n; row <= r.j; ++row)
        if (res[row - 1] != 0) r.tail_vanishes = false;
    return r;
}

struct ExperimentRecord {
    std::size_t n = 0;
    std::size_t j = 0;
    double beta_n = 0.0;
    double nearest_zero = 0.0;
    double distance = 0.0;  ///< |nearest_zero - beta_n| plus its bracket width
    double bound = 0.0;     ///< 2 * 3^{-2n}
    double residual_sq = 0.0;
    double residual_bound = 0.0;
    bool pass = false;
};

[[nodiscard]] inline ExperimentRecord gap_experiment_record(std::size_t n, double tol = 1e-12, unsigned threads = 1) {
    if (n < 1) throw PreconditionError("gap experiment: n must be >= 1");
    ExperimentRecord rec;
    rec.n = n;
    rec.j = block_degree(n);
    rec.beta_n = beta(n);
    rec.bound = 2.0 * std::pow(3.0, -2.0 * static_cast<double>(n));
    const auto zs = eigenvalues(truncate(make_section4(), rec.j), tol, threads);
    std::size_t best = 0;
    for (std::size_t i = 1; i < zs.zeros.size(); ++i)
        if (std::abs(zs.zeros[i] - rec.beta_n) < std::abs(zs.zeros[best] - rec.beta_n)) best = i;
    rec.nearest_zero = zs.zeros[best];
    rec.distance = std::abs(rec.nearest_zero - rec.beta_n) + zs.widths[best];
    const auto res = residual_check(n);
    rec.residual_sq = res.residual_sq;
    rec.residual_bound = res.bound;
    rec.pass = rec.distance <= rec.bound && rec.residual_sq <= rec.residual_bound;
    return rec;
}

/// Records for n = 1..n_max, in order.
[[nodiscard]] inline std::vector<ExperimentRecord> run_gap_experiment(std::size_t n_max, double tol = 1e-12,
                                                                      unsigned threads = 1) {
    if (n_max < 1) throw PreconditionError("run_gap_experiment: n_max must be >= 1");
    std::vector<ExperimentRecord> out(n_max);
    detail::parallel_for(n_max, threads, [&](std::size_t i) { out[i] = gap_experiment_record(i + 1, tol); });
    return out;
}

struct CloudPoint {
    std::size_t j = 0;
    double zero = 0.0;
};

/// Zeros in (-1, 1) of p_1..p_{j_max} for the dense-gap family, ordered by degree.
/// Throws TheoremViolation if some degree has two zeros in the gap.
[[nodiscard]] inline std::vector<CloudPoint> gap_zero_cloud(std::size_t j_max, double tol = 1e-12) {
    if (j_max < 1) throw PreconditionError("gap_zero_cloud: j_max must be >= 1");
    const auto seq = make_section4();
    std::vector<CloudPoint> out;
    for (std::size_t j = 1; j <= j_max; ++j) {
        const auto zs = eigenvalues_in(truncate(seq, j), -1.0, 1.0, tol);
        if (zs.zeros.size() > 1)
            throw TheoremViolation("gap_zero_cloud: degree " + std::to_string(j) + " has " +
                                   std::to_string(zs.zeros.size()) + " zeros in the gap (-1, 1)");
        for (double z : zs.zeros) out.push_back({j, z});
    }
    return out;
}

struct SpectrumReport {
    std::size_t N = 0;
    double tol = 0.0;
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    std::size_t in_gap = 0;  ///< eigenvalues in (-1 + tol, 1 - tol)
    /// Distance from each of -5, -1, 1, 5 to the nearest eigenvalue.
    std::array<double, 4> endpoint_distance{};
    std::optional<double> endpoint_reach;

    [[nodiscard]] bool hull_ok() const noexcept { return min_eigenvalue >= -5.0 - tol && max_eigenvalue <= 5.0 + tol; }
    [[nodiscard]] bool gap_ok() const noexcept { return in_gap <= 1; }
    [[nodiscard]] bool endpoints_ok() const noexcept {
        if (!endpoint_reach) return true;
        return std::all_of(endpoint_distance.begin(), endpoint_distance.end(),
                           [this](double d) { return d <= *endpoint_reach; });
    }
    [[nodiscard]] bool passed() const noexcept { return hull_ok() && gap_ok() && endpoints_ok(); }
};

inline constexpr std::array<double, 4> kSection4Endpoints{-5.0, -1.0, 1.0, 5.0};

/// Compares the size-N truncation spectrum of the dense-gap family with
/// [-5,-1] u [1,5]. When `endpoint_reach` is set, every band endpoint must also
/// have an eigenvalue within that distance.
[[nodiscard]] inline SpectrumReport spectrum_report(std::size_t N, double tol,
                                                    std::optional<double> endpoint_reach = std::nullopt,
                                                    unsigned threads = 1) {
    if (N < 10) throw PreconditionError("spectrum_check: N must be >= 10");
    if (!(tol > 0.0)) throw PreconditionError("spectrum_check: tol must be positive");
    const auto T = truncate(make_section4(), N);
    const auto zs = eigenvalues(T, default_tolerance(T), threads);
    SpectrumReport r;
    r.N = N;
    r.tol = tol;
    r.endpoint_reach = endpoint_reach;
    r.min_eigenvalue = zs.zeros.front();
    r.max_eigenvalue = zs.zeros.back();
    for (double z : zs.zeros)
        if (z > -1.0 + tol && z < 1.0 - tol) ++r.in_gap;
    for (std::size_t e = 0; e < kSection4Endpoints.size(); ++e) {
        double best = std::numeric_limits<double>::infinity();
        for (double z : zs.zeros) best = std::min(best, std::abs(z - kSection4Endpoints[e]));
        r.endpoint_distance[e] = best;
    }
    return r;
}

/// Endpoint reach of 0.1 is enforced from N = 2000 upward.
[[nodiscard]] inline bool spectrum_check(std::size_t N, double tol, unsigned threads = 1) {
    const auto reach = N >= 2000 ? std::optional<double>(0.1) : std::nullopt;
    return spectrum_report(N, tol, reach, threads).passed();
}

} // namespace gapzeros
