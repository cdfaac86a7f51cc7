// qtrace command line: periodic edge weights, intertwiner trace tables,
// convergence studies, term-cloud export, and the verification suite.

#include "qtrace/asymptotics.hpp"
#include "qtrace/edge_weights.hpp"
#include "qtrace/skein_trace.hpp"
#include "qtrace/verification.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

namespace ew = qtrace::weights;
namespace sk = qtrace::skein;
namespace as = qtrace::asymptotics;
namespace vf = qtrace::verification;
using qtrace::Complex;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;

Complex parse_complex(const std::string& s) {
    std::istringstream is(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(is >> re)) throw qtrace::DomainError("cannot parse complex number '" + s + "'");
    if (is >> comma) {
        if (comma != ',' || !(is >> im))
            throw qtrace::DomainError("cannot parse complex number '" + s + "'");
    }
    return {re, im};
}

struct Range {
    long lo = 0, hi = 0, stride = 0;
};

Range parse_range(const std::string& s) {
    Range r;
    if (std::sscanf(s.c_str(), "%ld:%ld:%ld", &r.lo, &r.hi, &r.stride) != 3 || r.stride <= 0)
        throw qtrace::DomainError("range must be lo:hi:stride with positive stride, got '" + s + "'");
    return r;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw qtrace::DomainError("cannot open output file '" + path + "'");
    return file;
}

struct LiftSource {
    std::string b0_text = "hyperbolic";
    std::string sign_text = "+";
    long theta_branch = 0;
    std::vector<long> branches{0, 0};
    std::string lift_file;

    void add_options(CLI::App* cmd, bool with_file) {
        cmd->add_option("--b0", b0_text,
                        "b0 weight as 're,im', or preset 'hyperbolic' / 'example-lr'");
        cmd->add_option("--sign", sign_text, "quadratic-root branch, + or -")
            ->check(CLI::IsMember({"+", "-"}));
        cmd->add_option("--theta-branch", theta_branch,
                        "add 2 pi i times this integer to the principal theta_v");
        cmd->add_option("--branches", branches, "branch integers for A0 and B0")
            ->expected(2);
        if (with_file)
            cmd->add_option("--lift", lift_file, "read the weight system/lift from a JSON file");
    }

    std::pair<ew::PeriodicWeightSystem, ew::LogLift> resolve() const {
        if (!lift_file.empty()) {
            std::ifstream is(lift_file);
            if (!is) throw qtrace::DomainError("cannot open lift file '" + lift_file + "'");
            std::ostringstream ss;
            ss << is.rdbuf();
            return ew::from_json(ss.str());
        }
        if (b0_text == "example-lr") {
            const ew::LogLift lift = ew::example_lr_lift();
            const ew::PeriodicWeightSystem sys =
                ew::solve_periodic(std::exp(lift.B[0]), ew::Sign::Plus);
            return {sys, lift};
        }
        const Complex b0 = (b0_text == "hyperbolic") ? ew::hyperbolic_b0() : parse_complex(b0_text);
        const ew::Sign sign = (sign_text == "+") ? ew::Sign::Plus : ew::Sign::Minus;
        const ew::PeriodicWeightSystem sys = ew::solve_periodic(b0, sign);
        const auto& t0 = sys.triples[0];
        const Complex theta = std::log(t0.a) + std::log(t0.b) + std::log(t0.c) +
                              qtrace::kTwoPi * qtrace::kI * static_cast<double>(theta_branch);
        const ew::LogLift lift = ew::lift_logarithms(sys, theta, {branches[0], branches[1]});
        return {sys, lift};
    }
};

int cmd_weights(const LiftSource& src, const std::string& out_path) {
    auto [sys, lift] = src.resolve();
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    os << ew::to_json(sys, lift) << "\n";
    return kExitOk;
}

int cmd_trace(const LiftSource& src, std::optional<long> n_single, const std::string& range_text,
              const std::string& format, const std::string& out_path, bool allow_large) {
    auto [sys, lift] = src.resolve();
    (void)sys;
    std::vector<long> ns;
    if (n_single) ns.push_back(*n_single);
    if (!range_text.empty()) {
        const Range r = parse_range(range_text);
        for (long n = r.lo; n <= r.hi; n += r.stride) ns.push_back(n);
    }
    if (ns.empty()) throw qtrace::DomainError("trace: give --n or --n-range");
    for (long n : ns)
        if (n % 2 == 0 || n < 1)
            throw qtrace::DomainError("trace: n must be odd and positive, got " + std::to_string(n));

    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    if (format == "json") {
        os << "[\n";
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const auto t = sk::trace_lr(lift, ns[i], allow_large);
            os << sk::trace_to_json(t) << (i + 1 < ns.size() ? ",\n" : "\n");
        }
        os << "]\n";
        return kExitOk;
    }
    os << "n,congruence,modulus,log_modulus_over_n,predicted,ratio\n";
    for (long n : ns) {
        const auto t = sk::trace_lr(lift, n, allow_large);
        const double pred_log = as::predicted_trace_log(lift, n);
        os << n << ',' << t.congruence << ',' << fmt17(t.modulus) << ','
           << fmt17(t.log_modulus_over_n) << ',' << fmt17(std::exp(pred_log)) << ','
           << fmt17(std::exp(t.log_modulus - pred_log)) << "\n";
    }
    return kExitOk;
}

int cmd_converge(const LiftSource& src, const std::string& range_text, int cls,
                 const std::string& out_path, bool allow_large) {
    auto [sys, lift] = src.resolve();
    (void)sys;
    const Range r = parse_range(range_text);
    if (r.stride % 2 != 0)
        throw qtrace::DomainError("converge: stride must be even to keep n odd");
    if (cls != 0 && r.stride % 4 != 0)
        throw qtrace::DomainError(
            "converge: a fixed congruence class needs a stride divisible by 4");
    std::vector<long> ns;
    for (long n = r.lo; n <= r.hi; n += r.stride) {
        if (n % 2 == 0) throw qtrace::DomainError("converge: even n in range");
        if (cls != 0 && n % 4 != cls) continue;
        ns.push_back(n);
    }
    if (ns.empty()) throw qtrace::DomainError("converge: empty range");

    const double target = as::volume_figure_eight() / (4.0 * qtrace::kPi);
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    os << "n,congruence,log_modulus_over_n,deviation_from_vol_over_4pi,K_estimate\n";
    for (long n : ns) {
        const auto t = sk::trace_lr(lift, n, allow_large);
        const double K = std::exp(t.log_modulus - static_cast<double>(n) * target);
        os << n << ',' << t.congruence << ',' << fmt17(t.log_modulus_over_n) << ','
           << fmt17(t.log_modulus_over_n - target) << ',' << fmt17(K) << "\n";
    }
    return kExitOk;
}

int cmd_cloud(const LiftSource& src, const std::string& source, long n, const std::string& u_text,
              const std::string& v_text, long k_hat, const std::string& word, bool reduced,
              bool gnuplot, const std::string& out_path, bool allow_large) {
    sk::TermCloud cloud;
    if (source == "sigma") {
        if (u_text.empty()) throw qtrace::DomainError("cloud: sigma source needs --u");
        const Complex U = parse_complex(u_text);
        sk::QdlParams p = v_text.empty() ? sk::QdlParams::from_U(U, n)
                                         : sk::QdlParams(U, parse_complex(v_text), n);
        cloud = sk::sigma_cloud(p, k_hat, allow_large);
    } else if (source == "lr") {
        auto [sys, lift] = src.resolve();
        (void)sys;
        cloud = sk::trace_double_cloud(lift, n);
    } else if (source == "word") {
        if (word.empty()) throw qtrace::DomainError("cloud: word source needs --word");
        ew::WordLift wl;
        if (word == "LLR" && src.lift_file.empty() && src.b0_text == "hyperbolic") {
            wl = ew::example_llr_lift(); // worked LLR example
        } else {
            auto [sys, lift] = src.resolve();
            wl = ew::lift_word(sys.triples[0], word, lift.A[0], lift.B[0], lift.C[0]);
        }
        cloud = sk::word_cloud(wl, n);
    } else {
        throw qtrace::DomainError("cloud: source must be sigma, lr, or word");
    }
    if (reduced) cloud = sk::collapse_last_index(cloud);
    std::ofstream file;
    std::ostream& os = open_output(file, out_path);
    sk::write_csv(cloud, os, gnuplot);
    return kExitOk;
}

int cmd_verify(const std::string& only, const std::string& report_path,
               const std::string& scratch, double quad_tol) {
    vf::Options opt;
    opt.scratch_dir = scratch;
    opt.keep_files = !scratch.empty();
    opt.quad_tol = quad_tol;
    const auto results = vf::run_all(opt, only);
    if (results.empty()) throw qtrace::DomainError("verify: no criterion matches '" + only + "'");
    for (const auto& r : results) {
        std::printf("%-4s criterion %2d: %-28s (%.2fs) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.pass ? "" : r.details.c_str());
    }
    if (!report_path.empty()) {
        std::ofstream os(report_path);
        os << vf::report_json(results) << "\n";
    } else {
        std::cout << vf::report_json(results) << "\n";
    }
    return vf::all_passed(results) ? kExitOk : kExitVerifyFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum trace invariants of the LR torus sweep"};
    app.require_subcommand(1);

    LiftSource src;
    std::string out_path, format = "csv", range_text;
    std::optional<long> n_single;
    bool allow_large = false;

    auto* weights = app.add_subcommand("weights", "solve a periodic edge weight system");
    src.add_options(weights, false);
    weights->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* trace = app.add_subcommand("trace", "trace modulus of the intertwiner");
    LiftSource trace_src;
    trace_src.add_options(trace, true);
    std::string trace_out, trace_format = "csv", trace_range;
    std::optional<long> trace_n;
    trace->add_option("--n", trace_n, "single odd level");
    trace->add_option("--n-range", trace_range, "levels lo:hi:stride");
    trace->add_option("--format", trace_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    trace->add_option("-o,--output", trace_out, "output path (default stdout)");
    trace->add_flag("--allow-large", allow_large, "override the default level cap");

    auto* converge = app.add_subcommand("converge", "volume-convergence table");
    LiftSource conv_src;
    conv_src.add_options(converge, true);
    std::string conv_range, conv_out;
    int conv_class = 0;
    converge->add_option("--n-range", conv_range, "levels lo:hi:stride")->required();
    converge->add_option("--class", conv_class, "restrict to a congruence class mod 4 (1 or 3)")
        ->check(CLI::IsMember({1, 3}));
    converge->add_option("-o,--output", conv_out, "output path (default stdout)");
    converge->add_flag("--allow-large", allow_large, "override the default level cap");

    auto* cloud = app.add_subcommand("cloud", "term-cloud CSV export");
    LiftSource cloud_src;
    cloud_src.add_options(cloud, true);
    std::string cloud_source = "sigma", cloud_u, cloud_v, cloud_word, cloud_out, preset;
    long cloud_n = 101, cloud_k = 0;
    bool reduced = false, gnuplot = false;
    cloud->add_option("--source", cloud_source, "sigma, lr, or word");
    cloud->add_option("--n", cloud_n, "odd level");
    cloud->add_option("--u", cloud_u, "U parameter 're,im' (sigma source)");
    cloud->add_option("--v", cloud_v, "V parameter 're,im'; default principal log(1+e^U)");
    cloud->add_option("--khat", cloud_k, "integer k-hat of the sigma exponent");
    cloud->add_option("--word", cloud_word, "L/R word for the word source (length <= 3)");
    cloud->add_option("--preset", preset, "fig1 | fig2-lr | fig2-llr")
        ->check(CLI::IsMember({"fig1", "fig2-lr", "fig2-llr"}));
    cloud->add_flag("--reduced", reduced, "sum out the last index before writing");
    cloud->add_flag("--gnuplot", gnuplot, "emit a gnuplot-compatible header comment");
    cloud->add_option("-o,--output", cloud_out, "output path (default stdout)");
    cloud->add_flag("--allow-large", allow_large, "override the default level cap");

    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    std::string only, report_path, scratch;
    double quad_tol = 1e-12;
    verify->add_option("--only", only, "run only criteria whose name contains this text");
    verify->add_option("--report", report_path, "write the JSON report here instead of stdout");
    verify->add_option("--scratch", scratch, "directory for generated figure CSVs (kept)");
    verify->add_option("--quad-tol", quad_tol, "quadrature tolerance override for the bridge suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the message/usage
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (weights->parsed()) return cmd_weights(src, out_path);
        if (trace->parsed())
            return cmd_trace(trace_src, trace_n, trace_range, trace_format, trace_out, allow_large);
        if (converge->parsed())
            return cmd_converge(conv_src, conv_range, conv_class, conv_out, allow_large);
        if (cloud->parsed()) {
            if (preset == "fig1") {
                cloud_source = "sigma";
                cloud_n = 4001;
                cloud_u = "-2.58581,6.05389";
                cloud_v.clear();
                cloud_k = 5;
            } else if (preset == "fig2-lr") {
                cloud_source = "lr";
                cloud_n = 801;
                cloud_src.b0_text = "example-lr";
            } else if (preset == "fig2-llr") {
                cloud_source = "word";
                cloud_n = 111;
                cloud_word = "LLR";
            }
            return cmd_cloud(cloud_src, cloud_source, cloud_n, cloud_u, cloud_v, cloud_k,
                             cloud_word, reduced, gnuplot, cloud_out, allow_large);
        }
        if (verify->parsed()) return cmd_verify(only, report_path, scratch, quad_tol);
    } catch (const qtrace::OverflowGuard& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const qtrace::ResourceGuard& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const qtrace::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
