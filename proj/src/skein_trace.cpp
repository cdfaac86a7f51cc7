#include "qtrace/skein_trace.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace qtrace::skein {

namespace {

void require_odd_positive(long n, const char* who) {
    if (n < 1 || n % 2 == 0)
        throw DomainError(std::string(who) + ": level n must be an odd positive integer");
}

void require_under_cap(long n, bool allow_large, const char* who) {
    if (!allow_large && n > kDefaultLevelCap)
        throw OverflowGuard(std::string(who) + ": n exceeds the default cap " +
                            std::to_string(kDefaultLevelCap) + " (override to proceed)");
}

double growth_exponent(long n) {
    // log of the largest term magnitude of Sigma_n
    static const double lam6 = special::lobachevsky(kPi / 6.0);
    return static_cast<double>(n) * lam6 / kTwoPi;
}

// omega = -e^{i pi/n} is the square root of q with omega^n = 1; its power
// omega^m reduces to exp(i pi ((m (n+1)) mod 2n) / n) by exact integer
// arithmetic.
Complex omega_pow(std::int64_t m, long n) {
    std::int64_t r = mod_nonneg(m, 2 * n);
    r = mod_nonneg(r * (n + 1), 2 * n);
    return std::polar(1.0, kPi * static_cast<double>(r) / static_cast<double>(n));
}

struct ScaledSum {
    double max_log;   // M = max log-magnitude over the terms
    Complex scaled;   // sum of terms / e^M
    double scaled_l1; // sum of |terms| / e^M
};

ScaledSum sum_scaled(const std::vector<double>& log_mag, const std::vector<Complex>& phase) {
    double M = -std::numeric_limits<double>::infinity();
    for (double lm : log_mag) M = std::max(M, lm);
    std::vector<Complex> terms(log_mag.size());
    double l1 = 0.0;
    for (std::size_t i = 0; i < log_mag.size(); ++i) {
        double w = std::exp(log_mag[i] - M);
        terms[i] = w * phase[i];
        l1 += w;
    }
    return {M, pairwise_compensated_sum(terms), l1};
}

} // namespace

QdlParams::QdlParams(Complex U_, Complex V_, long n_) : U(U_), V(V_), n(n_) {
    require_odd_positive(n, "QdlParams");
    const Complex eU = std::exp(U);
    const Complex eV = std::exp(V);
    if (std::abs(eU + 1.0) < 1e-12)
        throw DomainError("QdlParams: e^U = -1 makes 1 + u^n vanish");
    if (std::abs(eV - (1.0 + eU)) > 1e-8 * std::max(1.0, std::abs(eV)))
        throw DomainError("QdlParams: e^V != 1 + e^U");
}

QdlParams QdlParams::from_U(Complex U_, long n_) {
    return {U_, std::log(1.0 + std::exp(U_)), n_};
}

std::vector<LogComplex> qdl_table(const QdlParams& p) {
    const long n = p.n;
    const Complex u = p.u();
    const Complex v = p.v();
    std::vector<LogComplex> out(static_cast<std::size_t>(n));
    out[0] = LogComplex::one();
    LogComplex cur = LogComplex::one();
    for (long j = 1; j < n; ++j) {
        const Complex f = (1.0 + u * unit_root(-2 * j, n)) / v;
        cur *= f;
        out[static_cast<std::size_t>(j)] = cur;
    }
    return out;
}

Complex qdl_discrete(const QdlParams& p, long j) {
    const long n = p.n;
    const long r = static_cast<long>(mod_nonneg(j, n));
    const Complex u = p.u();
    const Complex v = p.v();
    LogComplex cur = LogComplex::one();
    for (long k = 1; k <= r; ++k) cur *= (1.0 + u * unit_root(-2 * k, n)) / v;
    return cur.value();
}

double qdl_vs_continuous(const QdlParams& p, long j, const special::QuadratureOptions& opt) {
    const double n = static_cast<double>(p.n);
    const special::Hbar h(2.0 / n);
    const Complex base = kPi / 2.0 - kPi / n + p.U / (2.0 * n * kI);
    const Complex shifted = base - kTwoPi * static_cast<double>(j) / n;
    const Complex ratio = std::exp(-static_cast<double>(j) * p.V / n) *
                          special::big_qdl(shifted, h, opt) / special::big_qdl(base, h, opt);
    return std::abs(qdl_discrete(p, j) - ratio);
}

LogSum sigma_sum_log(const QdlParams& p, long k_hat, bool allow_large) {
    const long n = p.n;
    require_under_cap(n, allow_large, "sigma_sum");
    const auto table = qdl_table(p);

    std::vector<double> lm(static_cast<std::size_t>(n));
    std::vector<Complex> ph(static_cast<std::size_t>(n));

    // i-indexed form: QDL(2i) q^{2 i^2 - k i}, i = 1..n
    for (long i = 1; i <= n; ++i) {
        const auto jj = static_cast<std::size_t>(mod_nonneg(2 * i, n));
        const std::int64_t e = mod_nonneg(2 * static_cast<std::int64_t>(i) * i -
                                              static_cast<std::int64_t>(k_hat) * i,
                                          n);
        lm[static_cast<std::size_t>(i - 1)] = table[jj].log_mag;
        ph[static_cast<std::size_t>(i - 1)] = table[jj].phase * unit_root(e, n);
    }
    const ScaledSum si = sum_scaled(lm, ph);

    // omega-rewritten j-indexed form: QDL(j) omega^{j^2 - k j}, j = 1..n
    for (long j = 1; j <= n; ++j) {
        const auto jj = static_cast<std::size_t>(mod_nonneg(j, n));
        const std::int64_t m =
            static_cast<std::int64_t>(j) * j - static_cast<std::int64_t>(k_hat) * j;
        lm[static_cast<std::size_t>(j - 1)] = table[jj].log_mag;
        ph[static_cast<std::size_t>(j - 1)] = table[jj].phase * omega_pow(m, n);
    }
    const ScaledSum sj = sum_scaled(lm, ph);

    // The two index forms are the same sum; disagreement beyond rounding
    // means a broken table or exponent reduction.
    const double tol = 1e-9 * std::max(sj.scaled_l1, 1.0) + 1e-13;
    if (std::abs(si.scaled * std::exp(si.max_log - sj.max_log) - sj.scaled) > tol)
        throw ResidualFailure("sigma_sum: index forms disagree beyond rounding");

    const double mag = std::abs(si.scaled);
    if (mag == 0.0) return {-std::numeric_limits<double>::infinity(), {1.0, 0.0}};
    return {si.max_log + std::log(mag), si.scaled / mag};
}

Complex sigma_sum(const QdlParams& p, long k_hat) {
    if (growth_exponent(p.n) > 700.0)
        throw OverflowGuard("sigma_sum: term magnitudes exceed the double range; "
                            "use sigma_sum_log");
    return sigma_sum_log(p, k_hat).value();
}

double dq_direct(const QdlParams& p) {
    const long n = p.n;
    const Complex u = p.u();
    const Complex eU = std::exp(p.U); // u^n exactly
    const double denom = std::abs(1.0 + eU);
    if (denom < 1e-12) throw DomainError("dq_direct: 1 + u^n vanishes");
    double acc = -0.5 * static_cast<double>(n + 1) * std::log(denom);
    for (long j = 1; j <= n; ++j)
        acc += static_cast<double>(n - j + 1) * std::log(std::abs(1.0 + u * unit_root(-2 * j, n)));
    return acc / static_cast<double>(n);
}

double dq_rearranged(Complex A, long n) {
    require_odd_positive(n, "dq_rearranged");
    if (std::abs(std::exp(A) + 1.0) < 1e-10)
        throw DomainError("dq_rearranged: e^A = -1 is singular");
    const Complex Ab = std::conj(A);
    const double dn = static_cast<double>(n);
    auto E = [&](Complex w) { return std::abs(std::exp(w / dn) - 1.0); };

    double acc = 0.0;
    if (n % 4 == 1) {
        const long m = (n - 1) / 4;
        for (long j = 1; j <= m; ++j) {
            const Complex four_j = 4.0 * kPi * kI * static_cast<double>(j);
            const double e1 = E(-A + four_j - kPi * kI);
            const double e1b = E(-Ab + four_j - kPi * kI);
            const double e3 = E(-A + four_j - 3.0 * kPi * kI);
            const double e3b = E(-Ab + four_j - 3.0 * kPi * kI);
            acc += static_cast<double>(2 * j - 1) / dn * std::log(e1 / e1b);
            acc += static_cast<double>(m - j + 1) / dn * std::log(e1 * e3b / (e1b * e3));
        }
    } else {
        const long m = (n - 3) / 4;
        acc += static_cast<double>(m + 1) / dn *
               std::log(E(-A + kPi * kI) / E(-Ab + kPi * kI));
        for (long j = 1; j <= m; ++j) {
            const Complex four_j = 4.0 * kPi * kI * static_cast<double>(j);
            const double ep = E(-A + four_j + kPi * kI);
            const double epb = E(-Ab + four_j + kPi * kI);
            const double em = E(-A + four_j - kPi * kI);
            const double emb = E(-Ab + four_j - kPi * kI);
            acc += static_cast<double>(2 * j) / dn * std::log(ep / epb);
            acc += static_cast<double>(m - j + 1) / dn * std::log(ep * emb / (epb * em));
        }
    }
    return acc;
}

namespace {

struct LrParams {
    QdlParams p1, p2;
    long k1, k2;
};

LrParams lr_params(const weights::LogLift& lift, long n) {
    const Complex U1 = kTwoPi * kI - lift.A[1];
    const Complex U2 = kTwoPi * kI - lift.A[2];
    return {QdlParams(U1, lift.V[1], n), QdlParams(U2, lift.V[2], n),
            lift.l_hat, lift.m_hat};
}

} // namespace

TraceResult trace_lr(const weights::LogLift& lift, long n, bool allow_large) {
    require_odd_positive(n, "trace_lr");
    require_under_cap(n, allow_large, "trace_lr");
    const LrParams lp = lr_params(lift, n);

    TraceResult t;
    t.n = n;
    t.congruence = static_cast<int>(n % 4);
    t.components.s1 = sigma_sum_log(lp.p1, lp.k1, allow_large);
    t.components.s2 = sigma_sum_log(lp.p2, lp.k2, allow_large);
    t.components.dq1_log_over_n = dq_direct(lp.p1);
    t.components.dq2_log_over_n = dq_direct(lp.p2);
    t.log_modulus = -std::log(static_cast<double>(n)) + t.components.s1.log_modulus +
                    t.components.s2.log_modulus - t.components.dq1_log_over_n -
                    t.components.dq2_log_over_n;
    t.log_modulus_over_n = t.log_modulus / static_cast<double>(n);
    t.modulus = std::exp(t.log_modulus);
    return t;
}

std::string trace_to_json(const TraceResult& t) {
    nlohmann::json j;
    j["n"] = t.n;
    j["congruence"] = t.congruence;
    j["modulus"] = std::isfinite(t.modulus) ? nlohmann::json(t.modulus) : nlohmann::json();
    j["log_modulus"] = t.log_modulus;
    j["log_modulus_over_n"] = t.log_modulus_over_n;
    auto comp = [](const LogSum& s) {
        return nlohmann::json{{"log_modulus", s.log_modulus},
                              {"phase", {s.unit.real(), s.unit.imag()}}};
    };
    j["components"]["s1"] = comp(t.components.s1);
    j["components"]["s2"] = comp(t.components.s2);
    j["components"]["dq1_log_over_n"] = t.components.dq1_log_over_n;
    j["components"]["dq2_log_over_n"] = t.components.dq2_log_over_n;
    return j.dump(2);
}

// --- term clouds -------------------------------------------------------------

TermCloud sigma_cloud(const QdlParams& p, long k_hat, bool allow_large) {
    const long n = p.n;
    require_under_cap(n, allow_large, "sigma_cloud");
    if (growth_exponent(n) > 700.0)
        throw OverflowGuard("sigma_cloud: term magnitudes exceed the double range");
    const auto table = qdl_table(p);
    TermCloud cloud;
    cloud.arity = 1;
    cloud.n = n;
    cloud.indices.reserve(static_cast<std::size_t>(n));
    cloud.values.reserve(static_cast<std::size_t>(n));
    for (long j = 1; j <= n; ++j) {
        const auto jj = static_cast<std::size_t>(mod_nonneg(j, n));
        const std::int64_t m =
            static_cast<std::int64_t>(j) * j - static_cast<std::int64_t>(k_hat) * j;
        cloud.indices.push_back({j, 0, 0});
        cloud.values.push_back(table[jj].value() * omega_pow(m, n));
    }
    return cloud;
}

namespace {

// Per-factor term arrays T_k(i) = QDL_k(2i) q^{2 i^2 - w_k i}, i = 1..n.
std::vector<Complex> factor_terms(const QdlParams& p, long w) {
    const long n = p.n;
    const auto table = qdl_table(p);
    std::vector<Complex> out(static_cast<std::size_t>(n));
    for (long i = 1; i <= n; ++i) {
        const auto jj = static_cast<std::size_t>(mod_nonneg(2 * i, n));
        const std::int64_t e =
            mod_nonneg(2 * static_cast<std::int64_t>(i) * i - static_cast<std::int64_t>(w) * i, n);
        out[static_cast<std::size_t>(i - 1)] = table[jj].value() * unit_root(e, n);
    }
    return out;
}

} // namespace

TermCloud trace_double_cloud(const weights::LogLift& lift, long n) {
    require_odd_positive(n, "trace_double_cloud");
    if (n > 2047)
        throw ResourceGuard("trace_double_cloud: n^2 terms exceed the memory guard (n <= 2047)");
    const LrParams lp = lr_params(lift, n);
    // raw double-sum exponent: -l i1 + ((l - m + n)/2) i2
    const long w2 = -(lift.l_hat - lift.m_hat + lift.n_hat) / 2;
    const auto T1 = factor_terms(lp.p1, lift.l_hat);
    const auto T2 = factor_terms(lp.p2, w2);

    TermCloud cloud;
    cloud.arity = 2;
    cloud.n = n;
    cloud.indices.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    cloud.values.reserve(cloud.indices.capacity());
    for (long i1 = 1; i1 <= n; ++i1)
        for (long i2 = 1; i2 <= n; ++i2) {
            cloud.indices.push_back({i1, i2, 0});
            cloud.values.push_back(T1[static_cast<std::size_t>(i1 - 1)] *
                                   T2[static_cast<std::size_t>(i2 - 1)]);
        }
    return cloud;
}

TermCloud word_cloud(const weights::WordLift& lift, long n) {
    require_odd_positive(n, "word_cloud");
    const std::size_t len = lift.word.size();
    if (len < 1 || len > 3)
        throw DomainError("word_cloud: words of length 1..3 are supported");
    if (len == 3 && n > 301)
        throw ResourceGuard("word_cloud: n^3 terms exceed the memory guard (n <= 301)");
    if (len == 2 && n > 2047)
        throw ResourceGuard("word_cloud: n^2 terms exceed the memory guard (n <= 2047)");

    const std::array<long, 3> windings{lift.l_hat, lift.m_hat, lift.n_hat};
    std::vector<std::vector<Complex>> T;
    for (std::size_t k = 1; k <= len; ++k) {
        const Complex Uk = kTwoPi * kI - lift.A[k];
        QdlParams pk(Uk, lift.V[k], n);
        T.push_back(factor_terms(pk, windings[k - 1]));
    }

    TermCloud cloud;
    cloud.arity = static_cast<int>(len);
    cloud.n = n;
    std::size_t total = 1;
    for (std::size_t k = 0; k < len; ++k) total *= static_cast<std::size_t>(n);
    cloud.indices.reserve(total);
    cloud.values.reserve(total);

    std::array<long, 3> idx{1, 1, 1};
    for (std::size_t flat = 0; flat < total; ++flat) {
        Complex v = T[0][static_cast<std::size_t>(idx[0] - 1)];
        for (std::size_t k = 1; k < len; ++k) v *= T[k][static_cast<std::size_t>(idx[k] - 1)];
        cloud.indices.push_back(idx);
        cloud.values.push_back(v);
        // odometer over (i1, ..., i_len), last index fastest
        for (std::size_t k = len; k-- > 0;) {
            if (++idx[k] <= n) break;
            idx[k] = 1;
        }
    }
    return cloud;
}

TermCloud collapse_last_index(const TermCloud& cloud) {
    if (cloud.arity < 2) throw DomainError("collapse_last_index: nothing to collapse");
    TermCloud out;
    out.arity = cloud.arity - 1;
    out.n = cloud.n;
    const auto n = static_cast<std::size_t>(cloud.n);
    out.indices.reserve(cloud.indices.size() / n);
    out.values.reserve(cloud.values.size() / n);
    for (std::size_t i = 0; i < cloud.values.size(); i += n) {
        auto idx = cloud.indices[i];
        idx[static_cast<std::size_t>(out.arity)] = 0;
        out.indices.push_back(idx);
        out.values.push_back(
            compensated_sum(std::span<const Complex>(cloud.values).subspan(i, n)));
    }
    return out;
}

void write_csv(const TermCloud& cloud, std::ostream& os, bool gnuplot_header) {
    if (gnuplot_header) {
        os << "# term cloud, n=" << cloud.n << ", " << cloud.values.size() << " terms\n";
        os << "# plot with: plot 'file.csv' using "
           << (cloud.arity == 1 ? "2:3" : cloud.arity == 2 ? "3:4" : "4:5")
           << " with dots\n";
    }
    os << "index1";
    for (int k = 2; k <= cloud.arity; ++k) os << ",index" << k;
    os << ",re,im\n";
    char buf[64];
    auto put = [&](double x) {
        auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
        os.write(buf, res.ptr - buf);
    };
    for (std::size_t i = 0; i < cloud.values.size(); ++i) {
        os << cloud.indices[i][0];
        for (int k = 1; k < cloud.arity; ++k) os << ',' << cloud.indices[i][static_cast<std::size_t>(k)];
        os << ',';
        put(cloud.values[i].real());
        os << ',';
        put(cloud.values[i].imag());
        os << '\n';
    }
}

} // namespace qtrace::skein
