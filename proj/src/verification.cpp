#include "qtrace/verification.hpp"

#include "qtrace/asymptotics.hpp"
#include "qtrace/skein_trace.hpp"
#include "qtrace/special_functions.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace qtrace::verification {

namespace {

namespace sf = qtrace::special;
namespace ew = qtrace::weights;
namespace sk = qtrace::skein;
namespace as = qtrace::asymptotics;

using Clock = std::chrono::steady_clock;

struct Check {
    bool pass = true;
    std::ostringstream details;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            details << "FAILED: " << what << "; ";
        }
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Fig. 1 single-sum example parameters.
const Complex kFig1U{-2.58581, 6.05389};

Complex sample_A(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(-6.0, 6.0);
    for (;;) {
        Complex A{re(rng), im(rng)};
        if (std::abs(std::exp(A) + 1.0) > 1e-3) return A;
    }
}

ew::LogLift sample_lift(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mod(0.3, 4.0), arg(-kPi, kPi);
    std::uniform_int_distribution<int> coin(0, 1), branch(-2, 2);
    for (;;) {
        Complex b0 = std::polar(mod(rng), arg(rng));
        if (std::abs(b0) < 0.2 || std::abs(b0 + 1.0) < 0.1) continue;
        try {
            auto sys = ew::solve_periodic(b0, coin(rng) ? ew::Sign::Plus : ew::Sign::Minus);
            const auto& t0 = sys.triples[0];
            Complex theta = std::log(t0.a) + std::log(t0.b) + std::log(t0.c) +
                            kTwoPi * kI * static_cast<double>(branch(rng));
            return ew::lift_logarithms(sys, theta, {branch(rng), branch(rng)});
        } catch (const Error&) {
            continue; // resample degenerate draws
        }
    }
}

double sigma_ratio(Complex U, Complex V, long k_hat, long n, Mutation mut) {
    sk::QdlParams p(U, V, n);
    const auto s = sk::sigma_sum_log(p, k_hat);
    const double lam6 = sf::lobachevsky(kPi / 6.0);
    const double pred_log = std::log(c_n_modulus_mutated(U, V, k_hat, static_cast<int>(n % 4), mut)) +
                            0.5 * std::log(static_cast<double>(n)) +
                            static_cast<double>(n) * lam6 / kTwoPi;
    return std::exp(s.log_modulus - pred_log);
}

// ---------------------------------------------------------------------------

CriterionResult c1_volume(const Options&) {
    Check c;
    const double vol = as::volume_figure_eight();
    c.require(std::abs(vol - 2.029883) <= 1e-5, "volume != 2.029883 +/- 1e-5");
    c.require(std::abs(vol - 4.0 * sf::lobachevsky(kPi / 6.0)) <= 1e-13,
              "volume != 4 L(pi/6) +/- 1e-13");
    c.require(vol > 0.0, "volume not positive");
    const auto t0 = Clock::now();
    double sink = 0.0;
    for (int i = 0; i < 1000; ++i) sink += as::volume_figure_eight();
    const double per_call =
        std::chrono::duration<double>(Clock::now() - t0).count() / 1000.0;
    c.require(per_call < 1e-3, "volume evaluation slower than 1 ms");
    c.details << "vol=" << fmt(vol) << " per_call_s=" << fmt(per_call) << " sink=" << fmt(sink / 1000);
    return {1, "volume reproduction", c.pass, 0.0, c.details.str()};
}

CriterionResult c2_dilog_identity(const Options&) {
    Check c;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double theta = 0.05 + (kPi - 0.1) * i / 99.0;
        const Complex lhs = sf::dilog(std::exp(2.0 * kI * theta));
        const Complex rhs = kPi * kPi / 6.0 - theta * (kPi - theta) +
                            2.0 * kI * sf::lobachevsky(theta);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    c.require(worst <= 1e-10, "dilog/Lobachevsky identity residual " + fmt(worst));
    c.details << "worst=" << fmt(worst);
    return {2, "dilogarithm identity", c.pass, 0.0, c.details.str()};
}

CriterionResult c3_bridge(const Options& opt) {
    Check c;
    std::mt19937_64 rng(20240803);
    const Complex U{0.4, 0.3};
    sf::QuadratureOptions qopt;
    qopt.abs_tol = opt.quad_tol;
    double worst = 0.0;
    for (long n : {51L, 101L}) {
        sk::QdlParams p = sk::QdlParams::from_U(U, n);
        std::uniform_int_distribution<long> jdist(1, n - 1);
        for (int k = 0; k < 10; ++k) {
            const long j = jdist(rng);
            const double r = sk::qdl_vs_continuous(p, j, qopt);
            worst = std::max(worst, r);
            c.require(r < 1e-6, "bridge residual " + fmt(r) + " at n=" + std::to_string(n) +
                                    " j=" + std::to_string(j));
        }
    }
    c.details << "worst=" << fmt(worst);
    return {3, "discrete/continuous bridge", c.pass, 0.0, c.details.str()};
}

CriterionResult c4_factorization(const Options&) {
    Check c;
    std::mt19937_64 rng(411);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const ew::LogLift lift = sample_lift(rng);
        for (long n = 1; n <= 15; n += 2) {
            const double factored = std::exp(sk::trace_lr(lift, n).log_modulus);
            const double brute = trace_lr_double_sum_reference(lift, n);
            const double rel = std::abs(factored - brute) / std::max(brute, 1e-300);
            worst = std::max(worst, rel);
            c.require(rel <= 1e-12, "factorization mismatch " + fmt(rel) + " at n=" +
                                        std::to_string(n));
        }
    }
    c.details << "worst_rel=" << fmt(worst);
    return {4, "double-sum factorization", c.pass, 0.0, c.details.str()};
}

CriterionResult c5_dq_identities(const Options&) {
    Check c;
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<long> mdist(1, 50);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Complex A = sample_A(rng);
        const long n = (trial % 2 == 0) ? 4 * mdist(rng) + 1 : 4 * mdist(rng) + 3;
        const double direct = sk::dq_direct(sk::QdlParams::from_U(kTwoPi * kI - A, n));
        const double rearr = sk::dq_rearranged(A, n);
        worst = std::max(worst, std::abs(direct - rearr));
        c.require(std::abs(direct - rearr) <= 1e-10,
                  "dq_direct vs dq_rearranged " + fmt(std::abs(direct - rearr)));
    }
    for (double a : {-1.3, 0.4, 2.0}) {
        const double v = sk::dq_direct(sk::QdlParams::from_U(kTwoPi * kI - Complex(a, 0.0), 201));
        c.require(std::abs(v) <= 1e-12, "real A gives nonzero log |D^q|: " + fmt(v));
        c.require(std::abs(sk::dq_rearranged(Complex(a, 0.0), 199)) <= 1e-12,
                  "real A gives nonzero rearranged value");
    }
    c.details << "worst=" << fmt(worst);
    return {5, "dq-identities", c.pass, 0.0, c.details.str()};
}

CriterionResult c6_dq_limits(const Options&) {
    Check c;
    const Complex A{0.0, 2.0};
    for (int cls : {1, 3}) {
        const double lim = as::d_n_limit(A, cls);
        double prev = std::numeric_limits<double>::infinity();
        for (long n : (cls == 1 ? std::array<long, 3>{101, 401, 1601}
                                : std::array<long, 3>{103, 403, 1603})) {
            const double v = std::exp(sk::dq_direct(sk::QdlParams::from_U(kTwoPi * kI - A, n)));
            const double dev = std::abs(v - lim);
            c.require(dev < prev, "deviation not decreasing at n=" + std::to_string(n));
            c.details << "cls" << cls << " n=" << n << " dev=" << fmt(dev) << "; ";
            prev = dev;
        }
    }
    return {6, "dq-limits", c.pass, 0.0, c.details.str()};
}

CriterionResult c7_partial_limits(const Options&) {
    Check c;
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Complex A = sample_A(rng);
        const double l1 = as::dq_partial_limits(A, as::DqPart::FirstSum1Mod4, 1).limit +
                          as::dq_partial_limits(A, as::DqPart::SecondSum1Mod4, 1).limit;
        const double l3 = as::dq_partial_limits(A, as::DqPart::Isolated3Mod4, 1).limit +
                          as::dq_partial_limits(A, as::DqPart::FirstSum3Mod4, 1).limit +
                          as::dq_partial_limits(A, as::DqPart::SecondSum3Mod4, 1).limit;
        worst = std::max(worst, std::abs(l1 - std::log(as::d_n_limit(A, 1))));
        worst = std::max(worst, std::abs(l3 - std::log(as::d_n_limit(A, 3))));
    }
    c.require(worst <= 1e-12, "partial-limit ledger identity residual " + fmt(worst));
    const double integral = as::t_cot_integral();
    const double target = std::log(2.0) / (8.0 * kPi);
    c.require(std::abs(integral - target) <= 1e-10,
              "auxiliary integral off by " + fmt(std::abs(integral - target)));
    // convergence of the finite-m sums toward their limits
    const Complex A0{1.0, 2.0};
    double prev = std::numeric_limits<double>::infinity();
    for (long m : {100L, 400L, 1600L}) {
        const auto pv = as::dq_partial_limits(A0, as::DqPart::FirstSum1Mod4, m);
        const double dev = std::abs(pv.finite_m - pv.limit);
        c.require(dev < prev, "finite-m deviation not shrinking at m=" + std::to_string(m));
        prev = dev;
    }
    c.details << "worst_identity=" << fmt(worst) << " integral=" << fmt(integral);
    return {7, "dq-partial-limits", c.pass, 0.0, c.details.str()};
}

CriterionResult c8_sigma_asymptotics(const Options& opt) {
    Check c;
    const Complex V = std::log(1.0 + std::exp(kFig1U));
    for (long k_hat : {5L, 4L}) {
        double prev = std::numeric_limits<double>::infinity();
        double final_dev = 0.0;
        for (long n : {65L, 257L, 1025L, 4097L}) { // fixed class 1 mod 8
            const double ratio = sigma_ratio(kFig1U, V, k_hat, n, opt.mutation);
            const double dev = std::abs(ratio - 1.0);
            c.require(dev < prev,
                      "deviation not decreasing at n=" + std::to_string(n) + " k=" +
                          std::to_string(k_hat) + " (" + fmt(dev) + " >= " + fmt(prev) + ")");
            prev = dev;
            final_dev = dev;
            c.details << "k=" << k_hat << " n=" << n << " ratio=" << fmt(ratio) << "; ";
        }
        c.require(final_dev <= 0.10, "final deviation " + fmt(final_dev) + " above 10%");
    }
    return {8, "Sigma_n asymptotics", c.pass, 0.0, c.details.str()};
}

CriterionResult c9_volume_conjecture(const Options&) {
    Check c;
    const ew::LogLift lift = ew::hyperbolic_lift();
    const double target = as::volume_figure_eight() / (4.0 * kPi);
    double K[2] = {0.0, 0.0};
    for (int cls = 0; cls < 2; ++cls) {
        double prev_dev = std::numeric_limits<double>::infinity();
        double prev_K = 0.0;
        bool first = true;
        for (long n = 401 + 2 * cls; n <= 2803; n += 400) {
            const auto t = sk::trace_lr(lift, n);
            const double dev = std::abs(t.log_modulus_over_n - target);
            c.require(dev < prev_dev, "volume deviation not decreasing at n=" + std::to_string(n));
            prev_dev = dev;
            const double Kn = std::exp(t.log_modulus - static_cast<double>(n) * target);
            if (!first)
                c.require(std::abs(Kn / prev_K - 1.0) <= 0.05,
                          "K estimate unstable at n=" + std::to_string(n));
            prev_K = Kn;
            first = false;
            K[cls] = Kn;
        }
        c.details << "K" << (cls == 0 ? 1 : 3) << "=" << fmt(K[cls]) << "; ";
    }
    c.require(std::abs(K[0] - K[1]) > 0.1, "dual convergence constants not distinct");
    return {9, "volume conjecture", c.pass, 0.0, c.details.str()};
}

CriterionResult c10_theorem_end_to_end(const Options& opt) {
    Check c;
    const ew::LogLift lift = ew::hyperbolic_lift();
    for (int cls = 0; cls < 2; ++cls) {
        double prev = std::numeric_limits<double>::infinity();
        double final_ratio = 0.0;
        for (long n : {101L, 401L, 1601L, 6401L}) {
            const long nn = n + 2 * cls;
            const auto t = sk::trace_lr(lift, nn);
            const double ratio =
                std::exp(t.log_modulus - predicted_trace_log_mutated(lift, nn, opt.mutation));
            const double dev = std::abs(ratio - 1.0);
            c.require(dev < prev, "ratio deviation not decreasing at n=" + std::to_string(nn));
            prev = dev;
            final_ratio = ratio;
            c.details << "n=" << nn << " ratio=" << fmt(ratio) << "; ";
        }
        // calibrated sanity band (measured final deviation is ~2.4e-4)
        c.require(final_ratio > 0.8 && final_ratio < 1.25,
                  "final ratio " + fmt(final_ratio) + " outside [0.8, 1.25]");
    }
    return {10, "prediction end-to-end", c.pass, 0.0, c.details.str()};
}

CriterionResult c11_laplace(const Options&) {
    Check c;
    const long n = 10000;
    auto f = [](double t) { return -(t - 1.0) * (t - 1.0); };
    auto one = [](double) { return Complex{1.0, 0.0}; };
    const auto plain = as::laplace_sum_reference(f, one, one, 0.0, 2.0, n, false);
    const double r = std::abs(plain.sum / plain.estimate);
    c.require(r >= 0.99 && r <= 1.01, "plain-sum ratio " + fmt(r) + " outside [0.99, 1.01]");
    const auto alt = as::laplace_sum_reference(f, one, one, 0.0, 2.0, n, true);
    const double supp = std::abs(alt.sum) / std::sqrt(static_cast<double>(n));
    c.require(supp < 0.01, "alternating suppression " + fmt(supp) + " >= 0.01");
    auto gt = [](double t) { return Complex{t, 0.0}; };
    const auto lin = as::laplace_sum_reference(f, gt, gt, 0.0, 2.0, n, false);
    const double rl = std::abs(lin.sum / lin.estimate);
    c.require(rl >= 0.99 && rl <= 1.01, "g=t ratio " + fmt(rl) + " outside [0.99, 1.01]");
    c.details << "plain=" << fmt(r) << " alt=" << fmt(supp) << " g=t " << fmt(rl);
    return {11, "Laplace-sum reference", c.pass, 0.0, c.details.str()};
}

CriterionResult c12_figures(const Options& opt) {
    Check c;
    namespace fs = std::filesystem;
    const fs::path dir =
        opt.scratch_dir.empty() ? fs::temp_directory_path() / "qtrace_figures" : fs::path(opt.scratch_dir);
    fs::create_directories(dir);

    // single-sum cloud: maximal-modulus term sits in a petal center
    {
        sk::QdlParams p = sk::QdlParams::from_U(kFig1U, 4001);
        const auto cloud = sk::sigma_cloud(p, 5);
        std::size_t jstar = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < cloud.values.size(); ++i) {
            const double m = std::abs(cloud.values[i]);
            if (m > best) {
                best = m;
                jstar = i;
            }
        }
        const double t = kTwoPi * static_cast<double>(cloud.indices[jstar][0]) / 4001.0;
        const double dist = std::min(std::abs(t - kPi / 3.0), std::abs(t - 4.0 * kPi / 3.0));
        c.require(dist < 0.05, "argmax petal distance " + fmt(dist));
        c.details << "argmax_j=" << cloud.indices[jstar][0] << " dist=" << fmt(dist) << "; ";
    }
    // LR double-sum cloud at n = 801
    {
        const auto cloud = sk::trace_double_cloud(ew::example_lr_lift(), 801);
        c.require(cloud.values.size() == 801u * 801u, "LR cloud size mismatch");
        std::ofstream os(dir / "lr_801.csv");
        sk::write_csv(cloud, os);
        c.require(os.good(), "LR cloud CSV write failed");
    }
    // LLR triple-sum cloud at n = 111, full and collapsed
    {
        const auto lift = ew::example_llr_lift();
        const auto cloud = sk::word_cloud(lift, 111);
        c.require(cloud.values.size() == 111u * 111u * 111u, "LLR cloud size mismatch");
        {
            std::ofstream os(dir / "llr_111.csv");
            sk::write_csv(cloud, os);
            c.require(os.good(), "LLR cloud CSV write failed");
        }
        const auto collapsed = sk::collapse_last_index(cloud);
        c.require(collapsed.values.size() == 111u * 111u, "collapsed LLR cloud size mismatch");
        std::ofstream os(dir / "llr_111_reduced.csv");
        sk::write_csv(collapsed, os);
        c.require(os.good(), "collapsed LLR cloud CSV write failed");
    }
    c.details << "dir=" << dir.string();
    if (!opt.keep_files && opt.scratch_dir.empty()) fs::remove_all(dir);
    return {12, "figure reproduction", c.pass, 0.0, c.details.str()};
}

CriterionResult c13_mutation(const Options& opt) {
    Check c;
    for (Mutation mut : {Mutation::FlipDnImA, Mutation::FlipCnParity}) {
        Options mo = opt;
        mo.mutation = mut;
        const bool c8 = run_criterion(8, mo).pass;
        const bool c10 = run_criterion(10, mo).pass;
        const char* name = (mut == Mutation::FlipDnImA) ? "FlipDnImA" : "FlipCnParity";
        c.require(!c8 || !c10, std::string("mutation ") + name + " not detected");
        c.details << name << ": c8=" << (c8 ? "pass" : "fail")
                  << " c10=" << (c10 ? "pass" : "fail") << "; ";
    }
    return {13, "mutation sensitivity", c.pass, 0.0, c.details.str()};
}

} // namespace

double trace_lr_double_sum_reference(const weights::LogLift& lift, long n) {
    const Complex U1 = kTwoPi * kI - lift.A[1];
    const Complex U2 = kTwoPi * kI - lift.A[2];
    sk::QdlParams p1(U1, lift.V[1], n), p2(U2, lift.V[2], n);
    auto qdl = [&](const sk::QdlParams& p, long i) {
        Complex prod{1.0, 0.0};
        const Complex u = p.u();
        const long r = static_cast<long>(mod_nonneg(i, n));
        for (long j = 1; j <= r; ++j) prod *= (1.0 + u * unit_root(-2 * j, n));
        return prod * std::exp(-static_cast<double>(r) * p.V / static_cast<double>(n));
    };
    const long coeff2 = (lift.l_hat - lift.m_hat + lift.n_hat) / 2;
    Complex S{0.0, 0.0};
    for (long i1 = 1; i1 <= n; ++i1)
        for (long i2 = 1; i2 <= n; ++i2) {
            const std::int64_t e = 2 * i1 * i1 + 2 * i2 * i2 -
                                   static_cast<std::int64_t>(lift.l_hat) * i1 +
                                   static_cast<std::int64_t>(coeff2) * i2;
            S += qdl(p1, 2 * i1) * qdl(p2, 2 * i2) * unit_root(e, n);
        }
    const double d1 = sk::dq_direct(p1), d2 = sk::dq_direct(p2);
    return std::abs(S) / (static_cast<double>(n) * std::exp(d1) * std::exp(d2));
}

double c_n_modulus_mutated(Complex U, Complex V, long k_hat, int n_mod_4, Mutation mut) {
    const long k = (mut == Mutation::FlipCnParity) ? k_hat + 1 : k_hat;
    return as::c_n_modulus(U, V, k, n_mod_4);
}

double predicted_trace_log_mutated(const weights::LogLift& lift, long n, Mutation mut) {
    const Complex U1 = kTwoPi * kI - lift.A[1];
    const Complex U2 = kTwoPi * kI - lift.A[2];
    const int cls = static_cast<int>(n % 4);
    const double c1 = c_n_modulus_mutated(U1, lift.V[1], lift.l_hat, cls, mut);
    const double c2 = c_n_modulus_mutated(U2, lift.V[2], lift.m_hat, cls, mut);
    // flipping the sign of Im A is the same as evaluating at conj(A)
    const Complex A1 = (mut == Mutation::FlipDnImA) ? std::conj(lift.A[1]) : lift.A[1];
    const Complex A2 = (mut == Mutation::FlipDnImA) ? std::conj(lift.A[2]) : lift.A[2];
    const double d1 = as::d_n_limit(A1, cls), d2 = as::d_n_limit(A2, cls);
    return std::log(c1) + std::log(c2) - std::log(d1) - std::log(d2) +
           static_cast<double>(n) * as::growth_rate_per_level();
}

CriterionResult run_criterion(int id, const Options& opt) {
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1: r = c1_volume(opt); break;
        case 2: r = c2_dilog_identity(opt); break;
        case 3: r = c3_bridge(opt); break;
        case 4: r = c4_factorization(opt); break;
        case 5: r = c5_dq_identities(opt); break;
        case 6: r = c6_dq_limits(opt); break;
        case 7: r = c7_partial_limits(opt); break;
        case 8: r = c8_sigma_asymptotics(opt); break;
        case 9: r = c9_volume_conjecture(opt); break;
        case 10: r = c10_theorem_end_to_end(opt); break;
        case 11: r = c11_laplace(opt); break;
        case 12: r = c12_figures(opt); break;
        case 13: r = c13_mutation(opt); break;
        default: throw DomainError("unknown criterion id " + std::to_string(id));
        }
    } catch (const std::exception& e) {
        r.id = id;
        r.name = "criterion " + std::to_string(id);
        r.pass = false;
        r.details = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    // runtime budgets in seconds; 0 = no budget stated.  The
    // criterion-1 millisecond bound is enforced per call inside c1_volume,
    // so its whole-run budget here is 1 s.
    static constexpr double kBudget[kCriterionCount + 1] = {0.0, 1.0, 1.0,  30.0, 1.0,
                                                            5.0, 10.0, 5.0, 0.0,  60.0,
                                                            0.0, 1.0,  30.0, 0.0};
    if (r.pass && kBudget[id] > 0.0 && r.seconds > kBudget[id]) {
        r.pass = false;
        r.details += " [runtime " + fmt(r.seconds) + "s over budget " + fmt(kBudget[id]) + "s]";
    }
    return r;
}

namespace {
constexpr const char* kCriterionNames[kCriterionCount + 1] = {
    "",
    "volume reproduction",
    "dilogarithm identity",
    "discrete/continuous bridge",
    "double-sum factorization",
    "dq-identities",
    "dq-limits",
    "dq-partial-limits",
    "Sigma_n asymptotics",
    "volume conjecture",
    "prediction end-to-end",
    "Laplace-sum reference",
    "figure reproduction",
    "mutation sensitivity",
};
} // namespace

std::vector<CriterionResult> run_all(const Options& opt, const std::string& only) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (!only.empty() && std::string(kCriterionNames[id]).find(only) == std::string::npos)
            continue;
        out.push_back(run_criterion(id, opt));
    }
    return out;
}

bool all_passed(const std::vector<CriterionResult>& rs) {
    for (const auto& r : rs)
        if (!r.pass) return false;
    return true;
}

std::string report_json(const std::vector<CriterionResult>& rs) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rs)
        j.push_back({{"id", r.id},
                     {"name", r.name},
                     {"pass", r.pass},
                     {"seconds", r.seconds},
                     {"details", r.details}});
    return j.dump(2);
}

} // namespace qtrace::verification
