#pragma once

#include "gapzeros/coeffs.hpp"
#include "gapzeros/errors.hpp"
#include "gapzeros/parallel.hpp"
#include "gapzeros/polyeval.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace gapzeros {

/// Symmetric tridiagonal matrix with strictly positive off-diagonal.
class TridiagonalMatrix {
public:
    TridiagonalMatrix(std::vector<double> diag, std::vector<double> offdiag)
        : diag_(std::move(diag)), off_(std::move(offdiag)) {
        if (diag_.empty()) throw PreconditionError("tridiagonal matrix must have dimension >= 1");
        if (off_.size() + 1 != diag_.size()) throw PreconditionError("off-diagonal length must be n - 1");
        for (double a : off_)
            if (!(a > 0.0)) throw PreconditionError("off-diagonal entries must be strictly positive");
        off2_.reserve(off_.size());
        for (double a : off_) off2_.push_back(a * a);
    }

    [[nodiscard]] std::size_t size() const noexcept { return diag_.size(); }
    [[nodiscard]] const std::vector<double>& diag() const noexcept { return diag_; }
    [[nodiscard]] const std::vector<double>& offdiag() const noexcept { return off_; }
    [[nodiscard]] const std::vector<double>& offdiag_squared() const noexcept { return off2_; }

    /// Gershgorin enclosure of the spectrum.
    [[nodiscard]] std::pair<double, double> gershgorin() const noexcept {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < diag_.size(); ++i) {
            const double r = (i > 0 ? off_[i - 1] : 0.0) + (i < off_.size() ? off_[i] : 0.0);
            lo = std::min(lo, diag_[i] - r);
            hi = std::max(hi, diag_[i] + r);
        }
        return {lo, hi};
    }

    /// Largest entry magnitude, floored at the smallest normal double.
    [[nodiscard]] double scale() const noexcept {
        double s = std::numeric_limits<double>::min();
        for (double d : diag_) s = std::max(s, std::abs(d));
        for (double a : off_) s = std::max(s, a);
        return s;
    }

    /// The matrix with its first row and column deleted.
    [[nodiscard]] TridiagonalMatrix without_first() const {
        if (size() < 2) throw PreconditionError("cannot delete the only row of a 1x1 matrix");
        return TridiagonalMatrix(std::vector<double>(diag_.begin() + 1, diag_.end()),
                                 std::vector<double>(off_.begin() + 1, off_.end()));
    }

    friend bool operator==(const TridiagonalMatrix&, const TridiagonalMatrix&) = default;

private:
    std::vector<double> diag_;
    std::vector<double> off_;
    std::vector<double> off2_;
};

/// n x n leading block of the Jacobi matrix: diag b(1..n), off-diagonal a(1..n-1).
[[nodiscard]] inline TridiagonalMatrix truncate(const CoefficientSequence& seq, std::size_t n) {
    if (n < 1) throw PreconditionError("truncation size must be >= 1");
    std::vector<double> d(n);
    std::vector<double> e(n - 1);
    for (std::size_t i = 0; i < n; ++i) d[i] = seq.b(i + 1);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = seq.a(i + 1);
    return TridiagonalMatrix(std::move(d), std::move(e));
}

/// Number of eigenvalues strictly below t, from the pivot signs of the LDL^T
/// factorisation of T - t. Pivots smaller than eps * scale are replaced by
/// +-eps * scale (zero maps to the positive side).
[[nodiscard]] inline std::size_t sturm_count(const TridiagonalMatrix& T, double t) noexcept {
    const auto& d = T.diag();
    const auto& e2 = T.offdiag_squared();
    const double pivmin = std::numeric_limits<double>::epsilon() * T.scale();
    auto guard = [pivmin](double p) {
        if (std::abs(p) < pivmin) return p < 0.0 ? -pivmin : pivmin;
        return p;
    };
    std::size_t count = 0;
    double pivot = guard(d[0] - t);
    if (pivot < 0.0) ++count;
    for (std::size_t i = 1; i < d.size(); ++i) {
        pivot = guard((d[i] - t) - e2[i - 1] / pivot);
        if (pivot < 0.0) ++count;
    }
    return count;
}

namespace detail {

inline constexpr std::size_t kLanes = 4;

/// sturm_count at kLanes shifts at once; the independent pivot chains overlap.
inline void sturm_count_lanes(const TridiagonalMatrix& T, const double (&t)[kLanes],
                              std::size_t (&count)[kLanes]) noexcept {
    const auto& d = T.diag();
    const auto& e2 = T.offdiag_squared();
    const double pivmin = std::numeric_limits<double>::epsilon() * T.scale();
    auto guard = [pivmin](double p) {
        if (std::abs(p) < pivmin) return p < 0.0 ? -pivmin : pivmin;
        return p;
    };
    double pivot[kLanes];
    for (std::size_t l = 0; l < kLanes; ++l) {
        pivot[l] = guard(d[0] - t[l]);
        count[l] = pivot[l] < 0.0 ? 1 : 0;
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
        for (std::size_t l = 0; l < kLanes; ++l) {
            pivot[l] = guard((d[i] - t[l]) - e2[i - 1] / pivot[l]);
            count[l] += pivot[l] < 0.0 ? 1 : 0;
        }
    }
}

} // namespace detail

/// Sorted eigenvalues (zeros of p_n for a truncation of size n) with their
/// bisection bracket widths.
struct ZeroSet {
    std::size_t n = 0;
    std::vector<double> zeros;
    std::vector<double> widths;
    double tol = 0.0;  ///< largest achieved bracket width
};

/// 1e-12 * max(1, spectral radius bound).
[[nodiscard]] inline double default_tolerance(const TridiagonalMatrix& T) noexcept {
    const auto [lo, hi] = T.gershgorin();
    return 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

namespace detail {

/// Bisects for the eigenvalue of 0-based index k inside [lo, hi], which must
/// satisfy count(lo) <= k < count(hi).
inline std::pair<double, double> bisect_index(const TridiagonalMatrix& T, std::size_t k, double lo, double hi,
                                              double tol) noexcept {
    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(T, mid) > k) hi = mid;
        else lo = mid;
    }
    return {lo, hi};
}

/// Bisects kLanes consecutive indices in lockstep; same brackets as bisect_index.
inline void bisect_lanes(const TridiagonalMatrix& T, std::size_t first, std::size_t m, double lo0, double hi0,
                         double tol, double* zeros, double* widths) noexcept {
    double lo[kLanes], hi[kLanes], mid[kLanes];
    bool active[kLanes];
    std::size_t count[kLanes];
    for (std::size_t l = 0; l < kLanes; ++l) {
        lo[l] = lo0;
        hi[l] = hi0;
        active[l] = l < m;
    }
    for (;;) {
        bool any = false;
        for (std::size_t l = 0; l < kLanes; ++l) {
            if (active[l]) {
                mid[l] = lo[l] + 0.5 * (hi[l] - lo[l]);
                if (!(hi[l] - lo[l] > tol) || mid[l] <= lo[l] || mid[l] >= hi[l]) active[l] = false;
            }
            if (!active[l]) mid[l] = lo[l];
            any = any || active[l];
        }
        if (!any) break;
        sturm_count_lanes(T, mid, count);
        for (std::size_t l = 0; l < kLanes; ++l) {
            if (!active[l]) continue;
            if (count[l] > first + l) hi[l] = mid[l];
            else lo[l] = mid[l];
        }
    }
    for (std::size_t l = 0; l < m; ++l) {
        zeros[l] = lo[l] + 0.5 * (hi[l] - lo[l]);
        widths[l] = hi[l] - lo[l];
    }
}

inline ZeroSet bisect_range(const TridiagonalMatrix& T, std::size_t first, std::size_t last, double lo, double hi,
                            double tol, unsigned threads) {
    ZeroSet zs;
    zs.n = T.size();
    const std::size_t m = last - first;
    zs.zeros.resize(m);
    zs.widths.resize(m);
    const std::size_t groups = (m + kLanes - 1) / kLanes;
    parallel_for(groups, threads, [&](std::size_t g) {
        const std::size_t i = g * kLanes;
        bisect_lanes(T, first + i, std::min(kLanes, m - i), lo, hi, tol, zs.zeros.data() + i, zs.widths.data() + i);
    });
    for (double w : zs.widths) zs.tol = std::max(zs.tol, w);
    return zs;
}

} // namespace detail

/// All eigenvalues by Sturm bisection inside the Gershgorin enclosure.
[[nodiscard]] inline ZeroSet eigenvalues(const TridiagonalMatrix& T, double tol, unsigned threads = 1) {
    if (!(tol > 0.0)) throw PreconditionError("bisection tolerance must be positive");
    auto [lo, hi] = T.gershgorin();
    const double pad = std::numeric_limits<double>::epsilon() * T.scale() * 4.0;
    return detail::bisect_range(T, 0, T.size(), lo - pad, hi + pad, tol, threads);
}

[[nodiscard]] inline ZeroSet eigenvalues(const TridiagonalMatrix& T) { return eigenvalues(T, default_tolerance(T)); }

/// Eigenvalues lying in the open interval (lo, hi).
[[nodiscard]] inline ZeroSet eigenvalues_in(const TridiagonalMatrix& T, double lo, double hi, double tol,
                                            unsigned threads = 1) {
    if (!(lo < hi)) throw PreconditionError("eigenvalues_in: need lo < hi");
    if (!(tol > 0.0)) throw PreconditionError("bisection tolerance must be positive");
    const double lo_in = std::nextafter(lo, hi);
    const std::size_t first = sturm_count(T, lo_in);
    const std::size_t last = sturm_count(T, hi);
    if (last <= first) {
        ZeroSet empty;
        empty.n = T.size();
        return empty;
    }
    return detail::bisect_range(T, first, last, lo_in, hi, tol, threads);
}

/// Number of eigenvalues of T in the open interval (lo, hi).
[[nodiscard]] inline std::size_t count_zeros_in(const TridiagonalMatrix& T, double lo, double hi) {
    if (!(lo < hi)) throw PreconditionError("count_zeros_in: need lo < hi");
    const std::size_t below_hi = sturm_count(T, hi);
    const std::size_t upto_lo = sturm_count(T, std::nextafter(lo, hi));
    return below_hi > upto_lo ? below_hi - upto_lo : 0;
}

/// Number of zeros of p_n in (lo, hi).
[[nodiscard]] inline std::size_t count_zeros_in(const CoefficientSequence& seq, std::size_t n, double lo,
                                                double hi) {
    return count_zeros_in(truncate(seq, n), lo, hi);
}

/// log|v_k| (k = 0..n-1) of the eigenvector of T for eigenvalue lambda, up to
/// a common additive constant, from the twisted factorisation of T - lambda:
/// forward pivots D+ and backward pivots D- meet at the twist index r that
/// minimises |D+_r + D-_r - (d_r - lambda)|, and the components follow from
/// ratios propagated outward from r. Stable for eigenvectors that decay in
/// either direction, unlike the forward three-term recurrence.
[[nodiscard]] inline std::vector<double> eigenvector_log_magnitudes(const TridiagonalMatrix& T, double lambda) {
    const auto& d = T.diag();
    const auto& e = T.offdiag();
    const std::size_t n = d.size();
    const double pivmin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    auto guard = [pivmin](double p) {
        if (std::abs(p) < pivmin) return p < 0.0 ? -pivmin : pivmin;
        return p;
    };
    std::vector<double> fwd(n);
    std::vector<double> bwd(n);
    fwd[0] = guard(d[0] - lambda);
    for (std::size_t i = 1; i < n; ++i) fwd[i] = guard((d[i] - lambda) - e[i - 1] * (e[i - 1] / fwd[i - 1]));
    bwd[n - 1] = guard(d[n - 1] - lambda);
    for (std::size_t i = n - 1; i-- > 0;) bwd[i] = guard((d[i] - lambda) - e[i] * (e[i] / bwd[i + 1]));
    std::size_t r = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double gamma = std::abs(fwd[k] + bwd[k] - (d[k] - lambda));
        if (gamma < best) {
            best = gamma;
            r = k;
        }
    }
    std::vector<double> logv(n, 0.0);
    for (std::size_t i = r; i-- > 0;) logv[i] = logv[i + 1] + std::log(e[i] / std::abs(fwd[i]));
    for (std::size_t i = r; i + 1 < n; ++i) logv[i + 1] = logv[i] + std::log(e[i] / std::abs(bwd[i + 1]));
    return logv;
}

/// Squared first component of the unit eigenvector for eigenvalue lambda, which
/// equals 1 / sum_{j<n} p_j(lambda)^2 for the size-n truncation.
[[nodiscard]] inline double first_component_squared(const TridiagonalMatrix& T, double lambda) {
    const auto logv = eigenvector_log_magnitudes(T, lambda);
    const double top = *std::max_element(logv.begin(), logv.end());
    double acc = 0.0;
    for (double l : logv) acc += std::exp(2.0 * (l - top));
    return std::exp(2.0 * (logv[0] - top) - std::log(acc));
}

struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// N-point Gauss rule: nodes are the zeros of p_N; the weight at a node is
/// 1 / sum_{j<N} p_j(node)^2, evaluated as the squared first eigenvector
/// component through a twisted factorisation.
[[nodiscard]] inline Quadrature gauss_quadrature(const CoefficientSequence& seq, std::size_t N, unsigned threads = 1) {
    if (N < 1) throw PreconditionError("quadrature size must be >= 1");
    const auto T = truncate(seq, N);
    const double tol = 4.0 * std::numeric_limits<double>::epsilon() * T.scale();
    auto zs = eigenvalues(T, tol, threads);
    Quadrature q;
    q.nodes = std::move(zs.zeros);
    q.weights.resize(N);
    detail::parallel_for(N, threads, [&](std::size_t i) { q.weights[i] = first_component_squared(T, q.nodes[i]); });
    return q;
}

} // namespace gapzeros
