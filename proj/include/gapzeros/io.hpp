#pragma once

// Text and JSON encodings: family specs, support specs, and the record types.
// All numbers are written with 17 significant digits via std::to_chars, so
// output is locale independent and round-trips.

#include "gapzeros/coeffs.hpp"
#include "gapzeros/errors.hpp"
#include "gapzeros/gapdense.hpp"
#include "gapzeros/polyeval.hpp"
#include "gapzeros/support.hpp"
#include "gapzeros/theorems.hpp"
#include "gapzeros/tridiag.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace gapzeros::io {

using nlohmann::json;

[[nodiscard]] inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

[[nodiscard]] inline double parse_real(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw SpecError("not a number: '" + std::string(s) + "'");
    return v;
}

[[nodiscard]] inline std::vector<double> parse_real_list(std::string_view s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        out.push_back(parse_real(s.substr(start, end - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coefficient sequences
// ---------------------------------------------------------------------------

[[nodiscard]] inline json to_json(const CoefficientSequence& seq) {
    return std::visit(
        [](const auto& f) -> json {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, family::Constant>) {
                return {{"kind", "constant"}, {"a", f.a}, {"b", f.b}};
            } else if constexpr (std::is_same_v<F, family::Periodic2>) {
                return {{"kind", "periodic2"}, {"a1", f.a1}, {"a2", f.a2}, {"b", f.b}};
            } else if constexpr (std::is_same_v<F, family::Section4>) {
                return {{"kind", "section4"}};
            } else if constexpr (std::is_same_v<F, family::RankOne>) {
                return {{"kind", "rank_one"}, {"base", to_json(*f.base)}, {"b1", f.b1}};
            } else if constexpr (std::is_same_v<F, family::Explicit>) {
                return {{"kind", "explicit"}, {"a", f.a}, {"b", f.b}};
            } else {
                return {{"kind", "strip"}, {"base", to_json(*f.base)}, {"shift", f.shift}};
            }
        },
        seq.node());
}

namespace detail {

inline void require_fields(const json& j, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
        bool known = key == "kind";
        for (auto a : allowed) known = known || key == a;
        if (!known) throw SpecError("unknown field '" + key + "' in family spec");
    }
    for (auto a : allowed) {
        if (!j.contains(std::string(a))) throw SpecError("missing field '" + std::string(a) + "' in family spec");
    }
}

inline double number_field(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw SpecError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

inline std::vector<double> number_list(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_array()) throw SpecError(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw SpecError(std::string("field '") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

} // namespace detail

/// Strict decoding; unknown or missing fields raise SpecError.
[[nodiscard]] inline CoefficientSequence family_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw SpecError("family spec must be an object with a string 'kind'");
    const auto kind = j.at("kind").get<std::string>();
    try {
        if (kind == "constant") {
            detail::require_fields(j, {"a", "b"});
            return make_constant(detail::number_field(j, "a"), detail::number_field(j, "b"));
        }
        if (kind == "periodic2") {
            detail::require_fields(j, {"a1", "a2", "b"});
            return make_periodic2(detail::number_field(j, "a1"), detail::number_field(j, "a2"),
                                  detail::number_field(j, "b"));
        }
        if (kind == "section4") {
            detail::require_fields(j, {});
            return make_section4();
        }
        if (kind == "rank_one") {
            detail::require_fields(j, {"base", "b1"});
            return make_rank_one(family_from_json(j.at("base")), detail::number_field(j, "b1"));
        }
        if (kind == "explicit") {
            detail::require_fields(j, {"a", "b"});
            return make_explicit(detail::number_list(j, "a"), detail::number_list(j, "b"));
        }
        if (kind == "strip") {
            detail::require_fields(j, {"base", "shift"});
            const auto& s = j.at("shift");
            if (!s.is_number_unsigned()) throw SpecError("field 'shift' must be a non-negative integer");
            auto seq = family_from_json(j.at("base"));
            for (auto k = s.get<std::size_t>(); k > 0; --k) seq = strip(seq);
            return seq;
        }
    } catch (const PreconditionError& e) {
        throw SpecError(std::string("invalid ") + kind + " parameters: " + e.what());
    }
    throw SpecError("unknown family kind '" + kind + "'");
}

/// Mini-language mirroring the JSON kinds:
///   constant:A,B   periodic2:A1,A2,B   section4   rank_one:B1,<family>
///   explicit:a=..,..;b=..,..   strip:<family>
/// A leading '{' selects JSON.
[[nodiscard]] inline CoefficientSequence parse_family(std::string_view spec) {
    if (!spec.empty() && spec.front() == '{') {
        json j;
        try {
            j = json::parse(spec);
        } catch (const json::parse_error& e) {
            throw SpecError(std::string("malformed family JSON: ") + e.what());
        }
        return family_from_json(j);
    }
    const auto colon = spec.find(':');
    const auto kind = spec.substr(0, colon);
    const auto args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    const bool has_args = colon != std::string_view::npos;
    try {
        if (kind == "section4") {
            if (has_args) throw SpecError("section4 takes no parameters");
            return make_section4();
        }
        if (!has_args) throw SpecError("family '" + std::string(kind) + "' needs parameters after ':'");
        if (kind == "constant") {
            const auto v = parse_real_list(args);
            if (v.size() != 2) throw SpecError("constant expects A,B");
            return make_constant(v[0], v[1]);
        }
        if (kind == "periodic2") {
            const auto v = parse_real_list(args);
            if (v.size() != 3) throw SpecError("periodic2 expects A1,A2,B");
            return make_periodic2(v[0], v[1], v[2]);
        }
        if (kind == "rank_one") {
            const auto comma = args.find(',');
            if (comma == std::string_view::npos) throw SpecError("rank_one expects B1,<family>");
            return make_rank_one(parse_family(args.substr(comma + 1)), parse_real(args.substr(0, comma)));
        }
        if (kind == "strip") return strip(parse_family(args));
        if (kind == "explicit") {
            const auto semi = args.find(';');
            if (semi == std::string_view::npos) throw SpecError("explicit expects a=...;b=...");
            const auto as = args.substr(0, semi);
            const auto bs = args.substr(semi + 1);
            if (as.substr(0, 2) != "a=" || bs.substr(0, 2) != "b=") throw SpecError("explicit expects a=...;b=...");
            return make_explicit(parse_real_list(as.substr(2)), parse_real_list(bs.substr(2)));
        }
    } catch (const PreconditionError& e) {
        throw SpecError("invalid " + std::string(kind) + " parameters: " + e.what());
    }
    throw SpecError("unknown family kind '" + std::string(kind) + "'");
}

// ---------------------------------------------------------------------------
// Support models: "[lo,hi],[lo,hi],p" (bare numbers are isolated points)
// ---------------------------------------------------------------------------

[[nodiscard]] inline SupportModel parse_support(std::string_view s) {
    std::vector<Interval> intervals;
    std::vector<double> points;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && (s[i] == ' ' || s[i] == ',')) ++i;
    };
    skip();
    while (i < s.size()) {
        if (s[i] == '[') {
            const auto close = s.find(']', i);
            if (close == std::string_view::npos) throw SpecError("unterminated interval in support spec");
            const auto v = parse_real_list(s.substr(i + 1, close - i - 1));
            if (v.size() != 2) throw SpecError("support interval needs exactly two ends");
            intervals.push_back({v[0], v[1]});
            i = close + 1;
        } else {
            auto end = s.find(',', i);
            if (end == std::string_view::npos) end = s.size();
            points.push_back(parse_real(s.substr(i, end - i)));
            i = end;
        }
        skip();
    }
    if (intervals.empty() && points.empty()) throw SpecError("empty support spec");
    try {
        return SupportModel(std::move(intervals), std::move(points));
    } catch (const PreconditionError& e) {
        throw SpecError(std::string("invalid support spec: ") + e.what());
    }
}

[[nodiscard]] inline json to_json(const SupportModel& m) {
    json iv = json::array();
    for (const auto& i : m.intervals()) iv.push_back({i.lo, i.hi});
    return {{"intervals", iv}, {"points", m.points()}};
}

[[nodiscard]] inline std::string format_support(const SupportModel& m) {
    std::string out;
    for (const auto& i : m.intervals()) {
        if (!out.empty()) out += ',';
        out += '[' + format_real(i.lo) + ',' + format_real(i.hi) + ']';
    }
    for (double p : m.points()) {
        if (!out.empty()) out += ',';
        out += format_real(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

inline void write_zeros_csv(std::ostream& os, const ZeroSet& zs) {
    os << "index,zero,bracket_width\n";
    for (std::size_t i = 0; i < zs.zeros.size(); ++i)
        os << i << ',' << format_real(zs.zeros[i]) << ',' << format_real(zs.widths[i]) << '\n';
}

[[nodiscard]] inline json to_json(const ZeroSet& zs) {
    return {{"n", zs.n}, {"tol", zs.tol}, {"zeros", zs.zeros}, {"bracket_widths", zs.widths}};
}

[[nodiscard]] inline json to_json(const GapCertificate& c) {
    return {{"x0", c.x0},
            {"d", c.d},
            {"n", c.n},
            {"delta_n", c.delta_n},
            {"zeros_n", c.zeros_n},
            {"zeros_n1", c.zeros_n1},
            {"zero_free_degree", c.zero_free_degree()},
            {"verified", c.verified}};
}

[[nodiscard]] inline std::string verdict(const GapCertificate& c) {
    std::string degree = c.zero_free_degree();
    if (degree == "n") degree = "p_" + std::to_string(c.n);
    else if (degree == "n+1") degree = "p_" + std::to_string(c.n + 1);
    else if (degree == "both") degree = "p_" + std::to_string(c.n) + " and p_" + std::to_string(c.n + 1);
    std::string out = c.verified ? "VERIFIED" : "VIOLATED";
    out += " n=" + std::to_string(c.n) + " x0=" + format_real(c.x0) + " d=" + format_real(c.d) +
           " delta=" + format_real(c.delta_n) + ": ";
    out += c.verified ? degree + " zero-free on (x0-delta, x0+delta)"
                      : "both p_" + std::to_string(c.n) + " and p_" + std::to_string(c.n + 1) + " have zeros";
    return out;
}

[[nodiscard]] inline json to_json(const IsolatedCertificate& c) {
    return {{"x0", c.x0},
            {"d0", c.d0},
            {"n", c.n},
            {"delta_n", c.delta_n},
            {"zeros_n", c.zeros_n},
            {"zeros_n1", c.zeros_n1},
            {"low_zero_degree", c.low_zero_degree},
            {"zero_count", c.zero_count},
            {"q_level_checked", c.q_level_checked},
            {"q_level_zero_free", c.q_level_zero_free},
            {"status", to_string(c.status)},
            {"verified", c.verified()}};
}

[[nodiscard]] inline std::string verdict(const IsolatedCertificate& c) {
    std::string out;
    switch (c.status) {
    case CertificateStatus::verified: out = "VERIFIED"; break;
    case CertificateStatus::failed: out = "VIOLATED"; break;
    case CertificateStatus::inconclusive: out = "INCONCLUSIVE"; break;
    }
    out += " n=" + std::to_string(c.n) + " x0=" + format_real(c.x0) + " d0=" + format_real(c.d0);
    if (c.status == CertificateStatus::inconclusive) return out + ": x0 lies in the estimated second-kind support";
    out += " delta=" + format_real(c.delta_n) + ": p_" + std::to_string(c.low_zero_degree) + " has " +
           std::to_string(c.zero_count) + " zero(s) on (x0-delta, x0+delta)";
    return out;
}

inline constexpr std::string_view kExperimentCsvHeader =
    "n,j,beta_n,nearest_zero,distance,bound,residual_sq,residual_bound,pass";

inline void write_experiment_csv(std::ostream& os, const std::vector<ExperimentRecord>& recs) {
    os << kExperimentCsvHeader << '\n';
    for (const auto& r : recs) {
        os << r.n << ',' << r.j << ',' << format_real(r.beta_n) << ',' << format_real(r.nearest_zero) << ','
           << format_real(r.distance) << ',' << format_real(r.bound) << ',' << format_real(r.residual_sq) << ','
           << format_real(r.residual_bound) << ',' << (r.pass ? "true" : "false") << '\n';
    }
}

[[nodiscard]] inline json to_json(const ExperimentRecord& r) {
    return {{"n", r.n},
            {"j", r.j},
            {"beta_n", r.beta_n},
            {"nearest_zero", r.nearest_zero},
            {"distance", r.distance},
            {"bound", r.bound},
            {"residual_sq", r.residual_sq},
            {"residual_bound", r.residual_bound},
            {"pass", r.pass}};
}

inline void write_cloud_csv(std::ostream& os, const std::vector<CloudPoint>& cloud) {
    os << "j,zero\n";
    for (const auto& c : cloud) os << c.j << ',' << format_real(c.zero) << '\n';
}

[[nodiscard]] inline json to_json(const CloudPoint& c) { return {{"j", c.j}, {"zero", c.zero}}; }

template <class T>
[[nodiscard]] json to_json_array(const std::vector<T>& items) {
    json arr = json::array();
    for (const auto& it : items) arr.push_back(to_json(it));
    return arr;
}

} // namespace gapzeros::io
