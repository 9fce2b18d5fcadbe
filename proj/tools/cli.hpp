#pragma once

#include "gapzeros/gapzeros.hpp"
#include "gapzeros/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <complex>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gapzeros::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,
    kPrecondition = 3,
    kViolation = 4,
};

inline const std::vector<std::string> kSubcommands{"eval", "zeros", "count", "certify", "gapdense", "quadrature",
                                                   "mcheck"};

/// JSON config files for CLI11. Top-level keys are global flags; an object under
/// a subcommand name holds that subcommand's flags. Any other object value (a
/// JSON family spec) is passed through as its serialized text.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_configurable() && !opt->get_lnames().empty()) {
                const auto& name = opt->get_lnames().front();
                if (opt->count() > 0) j[name] = opt->as<std::string>();
                else if (default_also && !opt->get_default_str().empty()) j[name] = opt->get_default_str();
            }
        }
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static void flatten(const nlohmann::json& j, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, value] : j.items()) {
            const bool section = parents.empty() && value.is_object() &&
                                 std::find(kSubcommands.begin(), kSubcommands.end(), key) != kSubcommands.end();
            if (section) {
                auto p = parents;
                p.push_back(key);
                flatten(value, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_string()) item.inputs = {value.get<std::string>()};
            else if (value.is_boolean()) item.inputs = {value.get<bool>() ? "true" : "false"};
            else if (value.is_number_float()) item.inputs = {io::format_real(value.get<double>())};
            else item.inputs = {value.dump()};
            out.push_back(std::move(item));
        }
    }
};

struct GlobalOptions {
    std::string format = "csv";
    std::string out_path;
    double tol = 0.0;  ///< 0 selects 1e-12 * max(1, spectral radius bound)
    unsigned threads = 1;
};

/// "k" or "a..b" (inclusive).
inline std::pair<std::size_t, std::size_t> parse_degree_range(const std::string& s) {
    auto to_index = [](const std::string& t) -> std::size_t {
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw SpecError("degree range must be N or A..B with non-negative integers");
        return std::stoull(t);
    };
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const auto k = to_index(s);
        return {k, k};
    }
    const auto a = to_index(s.substr(0, dots));
    const auto b = to_index(s.substr(dots + 2));
    if (a > b) throw SpecError("degree range A..B needs A <= B");
    return {a, b};
}

inline double resolve_tol(const GlobalOptions& g, const TridiagonalMatrix& T) {
    return g.tol > 0.0 ? g.tol : default_tolerance(T);
}

inline int cmd_eval(const GlobalOptions& g, std::ostream& os, const std::string& family, double x, std::size_t n) {
    const auto seq = io::parse_family(family);
    const auto p = eval_p(seq, x, n);
    if (g.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t j = 0; j <= n; ++j) {
            nlohmann::json row{{"j", j}, {"sign", p[j].sign}, {"log_abs", p[j].log_mag}};
            row["value"] = p[j].representable() ? nlohmann::json(p[j].value()) : nlohmann::json(nullptr);
            arr.push_back(row);
        }
        os << arr.dump(2) << '\n';
        return kOk;
    }
    if (g.format == "csv") os << "j,sign,log_abs,value\n";
    for (std::size_t j = 0; j <= n; ++j) {
        const std::string value = p[j].representable() ? io::format_real(p[j].value()) : "";
        if (g.format == "csv") {
            os << j << ',' << p[j].sign << ',' << io::format_real(p[j].log_mag) << ',' << value << '\n';
        } else {
            os << "p_" << j << '(' << io::format_real(x) << ") = "
               << (value.empty() ? (p[j].sign < 0 ? "-exp(" : "exp(") + io::format_real(p[j].log_mag) + ")" : value)
               << '\n';
        }
    }
    return kOk;
}

inline int cmd_zeros(const GlobalOptions& g, std::ostream& os, const std::string& family, std::size_t n) {
    const auto T = truncate(io::parse_family(family), n);
    const auto zs = eigenvalues(T, resolve_tol(g, T), g.threads);
    if (g.format == "json") os << io::to_json(zs).dump(2) << '\n';
    else if (g.format == "csv") io::write_zeros_csv(os, zs);
    else
        for (std::size_t i = 0; i < zs.zeros.size(); ++i)
            os << "zero " << i << ": " << io::format_real(zs.zeros[i]) << " (+/- "
               << io::format_real(0.5 * zs.widths[i]) << ")\n";
    return kOk;
}

inline int cmd_count(const GlobalOptions& g, std::ostream& os, const std::string& family, std::size_t n, double lo,
                     double hi) {
    const auto seq = io::parse_family(family);
    const auto c = count_zeros_in(seq, n, lo, hi);
    if (g.format == "json")
        os << nlohmann::json{{"n", n}, {"lo", lo}, {"hi", hi}, {"count", c}}.dump(2) << '\n';
    else if (g.format == "csv")
        os << "n,lo,hi,count\n" << n << ',' << io::format_real(lo) << ',' << io::format_real(hi) << ',' << c << '\n';
    else
        os << "p_" << n << " has " << c << " zero(s) in (" << io::format_real(lo) << ", " << io::format_real(hi)
           << ")\n";
    return kOk;
}

struct CertifyArgs {
    std::string family;
    std::optional<double> x0;
    std::string support;
    std::string degrees = "0..100";
    bool isolated = false;
    std::size_t truncation = kDefaultNuTruncation;
    double eps = kDefaultNuFattening;
};

inline int cmd_certify(const GlobalOptions& g, std::ostream& os, std::ostream& err, const CertifyArgs& a) {
    const auto seq = io::parse_family(a.family);
    const auto [first, last] = parse_degree_range(a.degrees);
    bool violated = false;
    nlohmann::json arr = nlohmann::json::array();
    if (g.format == "csv") {
        os << (a.isolated ? "n,x0,d0,delta_n,zeros_n,zeros_n1,low_zero_degree,zero_count,status\n"
                          : "n,x0,d,delta_n,zeros_n,zeros_n1,zero_free_degree,verified\n");
    }
    if (!a.isolated) {
        if (!a.x0) throw PreconditionError("certify: --x0 is required unless --isolated");
        if (a.support.empty()) throw PreconditionError("certify: --support is required unless --isolated");
        SupportModel support;
        if (a.support == "known") {
            if (!seq.known_support()) throw PreconditionError("certify: family has no known support");
            support = *seq.known_support();
        } else {
            support = io::parse_support(a.support);
        }
        for (std::size_t n = first; n <= last; ++n) {
            const auto c = certify_theorem1(seq, support, *a.x0, n);
            violated = violated || !c.verified;
            if (g.format == "json") arr.push_back(io::to_json(c));
            else if (g.format == "csv")
                os << c.n << ',' << io::format_real(c.x0) << ',' << io::format_real(c.d) << ','
                   << io::format_real(c.delta_n) << ',' << c.zeros_n << ',' << c.zeros_n1 << ','
                   << c.zero_free_degree() << ',' << (c.verified ? "true" : "false") << '\n';
            else os << io::verdict(c) << '\n';
        }
    } else {
        const auto isolated = estimate_isolated_points(seq, a.truncation, a.eps, g.threads);
        double x0 = 0.0;
        if (a.x0) {
            const auto hit = std::find_if(isolated.begin(), isolated.end(),
                                          [&](double p) { return std::abs(p - *a.x0) <= a.eps; });
            if (hit == isolated.end())
                throw PreconditionError("certify: x0 is not an isolated point of the estimated support");
            x0 = *a.x0;
        } else {
            if (isolated.size() != 1)
                throw PreconditionError("certify: --x0 needed, the estimated support has " +
                                        std::to_string(isolated.size()) + " isolated points");
            x0 = isolated.front();
        }
        const auto nu = estimate_nu_support(seq, a.truncation, a.eps, g.threads);
        for (std::size_t n = first; n <= last; ++n) {
            const auto c = certify_theorem2(seq, nu, x0, n);
            violated = violated || c.status == CertificateStatus::failed;
            if (g.format == "json") arr.push_back(io::to_json(c));
            else if (g.format == "csv")
                os << c.n << ',' << io::format_real(c.x0) << ',' << io::format_real(c.d0) << ','
                   << io::format_real(c.delta_n) << ',' << c.zeros_n << ',' << c.zeros_n1 << ',' << c.low_zero_degree
                   << ',' << c.zero_count << ',' << to_string(c.status) << '\n';
            else os << io::verdict(c) << '\n';
        }
    }
    if (g.format == "json") os << arr.dump(2) << '\n';
    if (violated) {
        err << "certify: a certificate failed; the support model is wrong or the computation is defective\n";
        return kViolation;
    }
    return kOk;
}

inline int cmd_gapdense(const GlobalOptions& g, std::ostream& os, std::ostream& err, std::size_t n_max,
                        std::optional<std::size_t> cloud) {
    const double tol = g.tol > 0.0 ? g.tol : 1e-12;
    if (cloud) {
        const auto pts = gap_zero_cloud(*cloud, tol);
        if (g.format == "json") os << io::to_json_array(pts).dump(2) << '\n';
        else if (g.format == "csv") io::write_cloud_csv(os, pts);
        else
            for (const auto& p : pts) os << "p_" << p.j << " zero " << io::format_real(p.zero) << '\n';
        return kOk;
    }
    const auto recs = run_gap_experiment(n_max, tol, g.threads);
    if (g.format == "json") os << io::to_json_array(recs).dump(2) << '\n';
    else if (g.format == "csv") io::write_experiment_csv(os, recs);
    else
        for (const auto& r : recs)
            os << (r.pass ? "PASS" : "FAIL") << " n=" << r.n << " j=" << r.j << " beta=" << io::format_real(r.beta_n)
               << " zero=" << io::format_real(r.nearest_zero) << " distance=" << io::format_real(r.distance)
               << " <= " << io::format_real(r.bound) << '\n';
    const bool all_pass = std::all_of(recs.begin(), recs.end(), [](const auto& r) { return r.pass; });
    if (!all_pass) {
        err << "gapdense: a record exceeded its bound\n";
        return kViolation;
    }
    return kOk;
}

inline int cmd_quadrature(const GlobalOptions& g, std::ostream& os, const std::string& family, std::size_t N) {
    const auto q = gauss_quadrature(io::parse_family(family), N, g.threads);
    if (g.format == "json") {
        os << nlohmann::json{{"nodes", q.nodes}, {"weights", q.weights}}.dump(2) << '\n';
        return kOk;
    }
    if (g.format == "csv") os << "index,node,weight\n";
    for (std::size_t i = 0; i < N; ++i) {
        if (g.format == "csv") os << i << ',' << io::format_real(q.nodes[i]) << ',' << io::format_real(q.weights[i]) << '\n';
        else os << "node " << io::format_real(q.nodes[i]) << " weight " << io::format_real(q.weights[i]) << '\n';
    }
    return kOk;
}

inline int cmd_mcheck(const GlobalOptions& g, std::ostream& os, const std::string& family, double re, double im,
                      std::size_t N) {
    const auto seq = io::parse_family(family);
    const std::complex<double> z(re, im);
    const auto m_mu = m_function(seq, z, N);
    const auto m_nu = m_function(strip(seq), z, N);
    const double residual = check_eq32(seq, z, N);
    if (g.format == "json") {
        os << nlohmann::json{{"re", re},
                             {"im", im},
                             {"N", N},
                             {"m_mu", {m_mu.real(), m_mu.imag()}},
                             {"m_nu", {m_nu.real(), m_nu.imag()}},
                             {"residual", residual}}
                  .dump(2)
           << '\n';
    } else if (g.format == "csv") {
        os << "re,im,N,m_mu_re,m_mu_im,m_nu_re,m_nu_im,residual\n"
           << io::format_real(re) << ',' << io::format_real(im) << ',' << N << ',' << io::format_real(m_mu.real())
           << ',' << io::format_real(m_mu.imag()) << ',' << io::format_real(m_nu.real()) << ','
           << io::format_real(m_nu.imag()) << ',' << io::format_real(residual) << '\n';
    } else {
        os << "m_mu = " << io::format_real(m_mu.real()) << " + " << io::format_real(m_mu.imag()) << "i\n"
           << "m_nu = " << io::format_real(m_nu.real()) << " + " << io::format_real(m_nu.imag()) << "i\n"
           << "residual = " << io::format_real(residual) << '\n';
    }
    return kOk;
}

inline const CLI::Range kPositiveIndex(std::size_t{1}, std::size_t{100000000}, "POSITIVE");

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zeros of orthonormal polynomials from Jacobi recurrence coefficients"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with the same keys as the flags");
    app.allow_config_extras(CLI::config_extras_mode::error);

    GlobalOptions g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    app.add_option("--out", g.out_path, "Write output to this file instead of stdout");
    app.add_option("--tol", g.tol, "Bisection width; 0 selects 1e-12 * max(1, spectral radius bound)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads for eigenvalue sweeps")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();

    std::string family;
    double x = 0.0;
    std::size_t n = 0;

    auto* eval = app.add_subcommand("eval", "Evaluate p_0..p_n at x (sign, log|p|, value)");
    eval->add_option("--family", family, "Family spec, e.g. constant:1,0 or JSON")->required();
    eval->add_option("--x", x, "Evaluation point")->required();
    eval->add_option("--n", n, "Highest degree")->required();

    auto* zeros = app.add_subcommand("zeros", "Zeros of p_n (eigenvalues of the n x n truncation)");
    zeros->add_option("--family", family)->required();
    zeros->add_option("--n", n, "Degree, >= 1")->required()->check(kPositiveIndex);

    double lo = 0.0;
    double hi = 0.0;
    auto* count = app.add_subcommand("count", "Number of zeros of p_n in the open interval (lo, hi)");
    count->add_option("--family", family)->required();
    count->add_option("--n", n)->required()->check(kPositiveIndex);
    count->add_option("--lo", lo)->required();
    count->add_option("--hi", hi)->required();

    CertifyArgs cert;
    double x0_value = 0.0;
    auto* certify = app.add_subcommand("certify", "Zero-free (or single-zero) certificates around x0");
    certify->add_option("--family", cert.family)->required();
    auto* x0_opt = certify->add_option("--x0", x0_value, "Centre point; with --isolated defaults to the estimate");
    certify->add_option("--support", cert.support, "Support model '[lo,hi],...,point' or 'known'");
    certify->add_option("--n", cert.degrees, "Degree or inclusive range A..B")->capture_default_str();
    certify->add_flag("--isolated", cert.isolated, "Isolated-point certificate via second-kind polynomials");
    certify->add_option("--truncation", cert.truncation, "Truncation size for support estimates")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
        ->capture_default_str();
    certify->add_option("--eps", cert.eps, "Fattening radius for support estimates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::size_t n_max = 5;
    std::size_t cloud = 0;
    auto* gapdense = app.add_subcommand("gapdense", "Dense-zeros-in-the-gap experiment");
    gapdense->add_option("--n-max", n_max, "Largest block index")->check(kPositiveIndex)->capture_default_str();
    auto* cloud_opt =
        gapdense->add_option("--cloud", cloud, "Emit gap zeros of p_1..p_J instead")->check(kPositiveIndex);

    auto* quadrature = app.add_subcommand("quadrature", "N-point Gauss rule of the measure");
    quadrature->add_option("--family", family)->required();
    quadrature->add_option("--n", n, "Number of nodes")->required()->check(kPositiveIndex);

    double re = 0.0;
    double im = 2.0;
    n = 0;
    std::size_t depth = 500;
    auto* mcheck = app.add_subcommand("mcheck", "Stieltjes transforms of mu and nu and the residual of their relation");
    mcheck->add_option("--family", family)->required();
    mcheck->add_option("--re", re)->capture_default_str();
    mcheck->add_option("--im", im)->capture_default_str();
    mcheck->add_option("--depth", depth, "Continued-fraction depth N")->check(kPositiveIndex)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    std::ofstream file;
    std::ostream* os = &out;
    if (!g.out_path.empty()) {
        file.open(g.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << g.out_path << "'\n";
            return kUsage;
        }
        os = &file;
    }
    os->imbue(std::locale::classic());

    try {
        if (*eval) return cmd_eval(g, *os, family, x, n);
        if (*zeros) return cmd_zeros(g, *os, family, n);
        if (*count) return cmd_count(g, *os, family, n, lo, hi);
        if (*certify) {
            if (x0_opt->count() > 0) cert.x0 = x0_value;
            return cmd_certify(g, *os, err, cert);
        }
        if (*gapdense) {
            std::optional<std::size_t> c;
            if (cloud_opt->count() > 0) c = cloud;
            return cmd_gapdense(g, *os, err, n_max, c);
        }
        if (*quadrature) return cmd_quadrature(g, *os, family, n);
        if (*mcheck) return cmd_mcheck(g, *os, family, re, im, depth);
    } catch (const SpecError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "precondition violated: " << e.what() << '\n';
        return kPrecondition;
    } catch (const TheoremViolation& e) {
        err << "theorem violation: " << e.what() << '\n';
        return kViolation;
    } catch (const OverflowError& e) {
        err << "overflow: " << e.what() << '\n';
        return kPrecondition;
    }
    return kUsage;
}

} // namespace gapzeros::cli
