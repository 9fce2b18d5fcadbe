#pragma once

#include "gapzeros/errors.hpp"
#include "gapzeros/support.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace gapzeros {

class CoefficientSequence;

namespace family {

struct Constant {
    double a;
    double b;
};

/// a(2n-1) = a1, a(2n) = a2, b(n) = b.
struct Periodic2 {
    double a1;
    double a2;
    double b;
};

/// Period-(3,1) off-diagonal with the diagonal walking through the dyadic sequence.
struct Section4 {};

/// `base` with b(1) replaced.
struct RankOne {
    std::shared_ptr<const CoefficientSequence> base;
    double b1;
};

/// Finite lists; indices past the end repeat the last entry.
struct Explicit {
    std::vector<double> a;
    std::vector<double> b;
};

/// a(n) = base.a(n + shift), b(n) = base.b(n + shift).
struct Shifted {
    std::shared_ptr<const CoefficientSequence> base;
    std::size_t shift;
};

using Node = std::variant<Constant, Periodic2, Section4, RankOne, Explicit, Shifted>;

} // namespace family

/// k-th term (k >= 1) of the enumeration 0, then j/2^m for j = -(2^m-1)..(2^m-1)
/// in increasing j, for m = 1, 2, 3, ...
[[nodiscard]] inline double beta(std::uint64_t k) {
    if (k < 1) throw PreconditionError("beta index must be >= 1");
    if (k == 1) return 0.0;
    std::uint64_t m = k - 2;
    int level = 1;
    for (;;) {
        const std::uint64_t block = (std::uint64_t{2} << level) - 1;
        if (m < block) break;
        m -= block;
        ++level;
    }
    const auto half = static_cast<std::int64_t>((std::uint64_t{1} << level) - 1);
    const auto j = static_cast<std::int64_t>(m) - half;
    return std::ldexp(static_cast<double>(j), -level);
}

/// Block index n with 2n^2 <= k < 2(n+1)^2; 0 for k = 1.
[[nodiscard]] inline std::uint64_t section4_block(std::uint64_t k) {
    auto n = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(k) / 2.0));
    while (2 * n * n > k) --n;
    while (2 * (n + 1) * (n + 1) <= k) ++n;
    return n;
}

/// Jacobi parameters (a_n > 0, b_n real), n >= 1, of an orthogonality measure.
/// Immutable; copies share structure.
class CoefficientSequence {
public:
    explicit CoefficientSequence(family::Node node, std::optional<SupportModel> known = std::nullopt)
        : node_(std::move(node)), known_(std::move(known)) {}

    [[nodiscard]] double a(std::size_t n) const {
        check_index(n);
        return std::visit([n](const auto& f) { return a_of(f, n); }, node_);
    }

    [[nodiscard]] double b(std::size_t n) const {
        check_index(n);
        return std::visit([n](const auto& f) { return b_of(f, n); }, node_);
    }

    /// Support of the measure when known in closed form. Metadata only: certificate
    /// routines take their support model as an explicit argument.
    [[nodiscard]] const std::optional<SupportModel>& known_support() const noexcept { return known_; }

    [[nodiscard]] const family::Node& node() const noexcept { return node_; }

    [[nodiscard]] std::string kind() const {
        return std::visit(
            [](const auto& f) -> std::string {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, family::Constant>) return "constant";
                else if constexpr (std::is_same_v<F, family::Periodic2>) return "periodic2";
                else if constexpr (std::is_same_v<F, family::Section4>) return "section4";
                else if constexpr (std::is_same_v<F, family::RankOne>) return "rank_one";
                else if constexpr (std::is_same_v<F, family::Explicit>) return "explicit";
                else return "strip";
            },
            node_);
    }

private:
    static void check_index(std::size_t n) {
        if (n < 1) throw PreconditionError("coefficient index must be >= 1");
    }

    static double a_of(const family::Constant& f, std::size_t) { return f.a; }
    static double b_of(const family::Constant& f, std::size_t) { return f.b; }

    static double a_of(const family::Periodic2& f, std::size_t n) { return n % 2 == 1 ? f.a1 : f.a2; }
    static double b_of(const family::Periodic2& f, std::size_t) { return f.b; }

    static double a_of(const family::Section4&, std::size_t n) { return n % 2 == 1 ? 3.0 : 1.0; }
    static double b_of(const family::Section4&, std::size_t k) {
        return k == 1 ? beta(1) : beta(section4_block(k));
    }

    static double a_of(const family::RankOne& f, std::size_t n) { return f.base->a(n); }
    static double b_of(const family::RankOne& f, std::size_t n) { return n == 1 ? f.b1 : f.base->b(n); }

    static double a_of(const family::Explicit& f, std::size_t n) { return f.a[std::min(n, f.a.size()) - 1]; }
    static double b_of(const family::Explicit& f, std::size_t n) { return f.b[std::min(n, f.b.size()) - 1]; }

    static double a_of(const family::Shifted& f, std::size_t n) { return f.base->a(n + f.shift); }
    static double b_of(const family::Shifted& f, std::size_t n) { return f.base->b(n + f.shift); }

    family::Node node_;
    std::optional<SupportModel> known_;
};

/// Closed form of the two-band spectrum of the period-2 operator with zero diagonal.
[[nodiscard]] inline SupportModel periodic2_bands(double a1, double a2) {
    const double outer = a1 + a2;
    const double inner = std::abs(a1 - a2);
    if (inner == 0.0) return SupportModel::interval(-outer, outer);
    return SupportModel({{-outer, -inner}, {inner, outer}}, {});
}

namespace detail {

inline void require_positive(double a, const char* what) {
    if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionError(std::string(what) + " must be positive and finite");
}

inline void require_finite(double b, const char* what) {
    if (!std::isfinite(b)) throw PreconditionError(std::string(what) + " must be finite");
}

} // namespace detail

[[nodiscard]] inline CoefficientSequence make_constant(double a, double b) {
    detail::require_positive(a, "a");
    detail::require_finite(b, "b");
    return CoefficientSequence(family::Constant{a, b}, SupportModel::interval(b - 2.0 * a, b + 2.0 * a));
}

/// The half-line restriction carries an eigenvalue at b exactly when a1 < a2,
/// because then p_{2n}(b) = (-a1/a2)^n is square summable.
[[nodiscard]] inline CoefficientSequence make_periodic2(double a1, double a2, double b) {
    detail::require_positive(a1, "a1");
    detail::require_positive(a2, "a2");
    detail::require_finite(b, "b");
    SupportModel bands = periodic2_bands(a1, a2).shifted(b);
    if (a1 < a2) bands = SupportModel(bands.intervals(), {b});
    return CoefficientSequence(family::Periodic2{a1, a2, b}, std::move(bands));
}

[[nodiscard]] inline CoefficientSequence make_section4() {
    return CoefficientSequence(family::Section4{}, SupportModel({{-5.0, -1.0}, {1.0, 5.0}}, {}));
}

[[nodiscard]] inline CoefficientSequence make_explicit(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw PreconditionError("explicit sequence needs at least one a and one b");
    for (double v : a) detail::require_positive(v, "a");
    for (double v : b) detail::require_finite(v, "b");
    return CoefficientSequence(family::Explicit{std::move(a), std::move(b)});
}

/// Replaces b(1); the support of the new measure is not known in closed form.
[[nodiscard]] inline CoefficientSequence make_rank_one(const CoefficientSequence& base, double b1_new) {
    detail::require_finite(b1_new, "b1");
    if (b1_new == base.b(1)) return base;
    return CoefficientSequence(family::RankOne{std::make_shared<const CoefficientSequence>(base), b1_new});
}

/// Second-kind (once-stripped) sequence: a~(n) = a(n+1), b~(n) = b(n+1).
[[nodiscard]] inline CoefficientSequence strip(const CoefficientSequence& seq) {
    return std::visit(
        [&seq](const auto& f) -> CoefficientSequence {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Constant>) {
                return seq;
            } else if constexpr (std::is_same_v<F, family::Periodic2>) {
                return make_periodic2(f.a2, f.a1, f.b);
            } else if constexpr (std::is_same_v<F, family::RankOne>) {
                return strip(*f.base);
            } else if constexpr (std::is_same_v<F, family::Explicit>) {
                auto a = f.a;
                auto b = f.b;
                if (a.size() > 1) a.erase(a.begin());
                if (b.size() > 1) b.erase(b.begin());
                return CoefficientSequence(family::Explicit{std::move(a), std::move(b)});
            } else if constexpr (std::is_same_v<F, family::Shifted>) {
                return CoefficientSequence(family::Shifted{f.base, f.shift + 1});
            } else {
                return CoefficientSequence(family::Shifted{std::make_shared<const CoefficientSequence>(seq), 1});
            }
        },
        seq.node());
}

} // namespace gapzeros
