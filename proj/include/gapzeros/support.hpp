#pragma once

#include "gapzeros/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace gapzeros {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint closed intervals plus isolated points.
/// Used as a model of the support of the orthogonality measure.
class SupportModel {
public:
    SupportModel() = default;

    SupportModel(std::vector<Interval> intervals, std::vector<double> points)
        : intervals_(std::move(intervals)), points_(std::move(points)) {
        for (const auto& iv : intervals_) {
            if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi))
                throw PreconditionError("support interval must satisfy lo <= hi with finite ends");
        }
        for (double p : points_) {
            if (!std::isfinite(p)) throw PreconditionError("support point must be finite");
        }
        std::sort(intervals_.begin(), intervals_.end(),
                  [](const Interval& l, const Interval& r) { return l.lo < r.lo; });
        for (std::size_t i = 1; i < intervals_.size(); ++i) {
            if (intervals_[i].lo <= intervals_[i - 1].hi)
                throw PreconditionError("support intervals must be disjoint");
        }
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
        for (double p : points_) {
            for (const auto& iv : intervals_) {
                if (iv.contains(p))
                    throw PreconditionError("isolated support point lies inside an interval");
            }
        }
    }

    static SupportModel interval(double lo, double hi) { return SupportModel({{lo, hi}}, {}); }

    /// Merges the closed eps-neighbourhoods of `centers` into disjoint intervals.
    static SupportModel fattened(std::span<const double> centers, double eps) {
        if (!(eps > 0.0)) throw PreconditionError("fattening radius must be positive");
        std::vector<double> c(centers.begin(), centers.end());
        std::sort(c.begin(), c.end());
        std::vector<Interval> out;
        for (double x : c) {
            if (!out.empty() && x - eps <= out.back().hi) {
                out.back().hi = std::max(out.back().hi, x + eps);
            } else {
                out.push_back({x - eps, x + eps});
            }
        }
        return SupportModel(std::move(out), {});
    }

    [[nodiscard]] const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] bool empty() const noexcept { return intervals_.empty() && points_.empty(); }

    /// Euclidean distance from x to the union; +inf for an empty model.
    [[nodiscard]] double dist(double x) const noexcept {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& iv : intervals_) {
            if (iv.contains(x)) return 0.0;
            d = std::min(d, x < iv.lo ? iv.lo - x : x - iv.hi);
        }
        for (double p : points_) d = std::min(d, std::abs(x - p));
        return d;
    }

    [[nodiscard]] bool contains(double x) const noexcept { return dist(x) == 0.0; }

    /// Smallest and largest element of the union.
    [[nodiscard]] std::pair<double, double> hull() const {
        if (empty()) throw PreconditionError("hull of an empty support model");
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& iv : intervals_) {
            lo = std::min(lo, iv.lo);
            hi = std::max(hi, iv.hi);
        }
        for (double p : points_) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        return {lo, hi};
    }

    /// Bounded open gaps between consecutive components, ignoring isolated points.
    [[nodiscard]] std::vector<Interval> interval_gaps() const {
        std::vector<Interval> g;
        for (std::size_t i = 1; i < intervals_.size(); ++i)
            g.push_back({intervals_[i - 1].hi, intervals_[i].lo});
        return g;
    }

    /// Translates every component by `shift`.
    [[nodiscard]] SupportModel shifted(double shift) const {
        auto iv = intervals_;
        for (auto& i : iv) {
            i.lo += shift;
            i.hi += shift;
        }
        auto pts = points_;
        for (auto& p : pts) p += shift;
        return SupportModel(std::move(iv), std::move(pts));
    }

    friend bool operator==(const SupportModel&, const SupportModel&) = default;

private:
    std::vector<Interval> intervals_;
    std::vector<double> points_;
};

} // namespace gapzeros
