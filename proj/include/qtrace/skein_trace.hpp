#ifndef QTRACE_SKEIN_TRACE_HPP
#define QTRACE_SKEIN_TRACE_HPP

#include "qtrace/edge_weights.hpp"
#include "qtrace/errors.hpp"
#include "qtrace/numeric.hpp"
#include "qtrace/special_functions.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace qtrace::skein {

/// Level cap beyond which double-precision cancellation in the petal sums
/// is no longer provably below the leading term; override explicitly.
inline constexpr long kDefaultLevelCap = 8191;

/// Parameters (U, V, n) of the discrete quantum dilogarithm, inducing
/// q = e^{2 pi i/n}, u = e^{U/n}, v = e^{V/n} with v^n = 1 + u^n.
struct QdlParams {
    Complex U, V;
    long n;

    QdlParams(Complex U_, Complex V_, long n_);

    /// V chosen as the principal logarithm of 1 + e^U.
    static QdlParams from_U(Complex U_, long n_);

    Complex q() const { return unit_root(1, n); }
    Complex u() const { return std::exp(U / static_cast<double>(n)); }
    Complex v() const { return std::exp(V / static_cast<double>(n)); }
};

/// QDL^q(u, v | j) = v^{-j} prod_{k<=j} (1 + u q^{-2k}), j reduced mod n.
Complex qdl_discrete(const QdlParams& p, long j);

/// Table of QDL values for j = 0..n-1 in log-magnitude/phase form.
std::vector<LogComplex> qdl_table(const QdlParams& p);

/// Residual of the discrete value against the big continuous quantum
/// dilogarithm ratio at hbar = 2/n.
double qdl_vs_continuous(const QdlParams& p, long j,
                         const special::QuadratureOptions& opt = {});

/// A sum carried as log-magnitude plus unit phase.
struct LogSum {
    double log_modulus;
    Complex unit;
    Complex value() const { return std::exp(log_modulus) * unit; }
};

/// Sigma = sum_{i=1}^n QDL(u,v|2i) q^{2i^2 - k i}.  Evaluated in both the
/// i-indexed and the omega-rewritten j-indexed forms, which are checked
/// against each other before returning.
LogSum sigma_sum_log(const QdlParams& p, long k_hat, bool allow_large = false);

/// Same, returned as a plain complex number; throws OverflowGuard when the
/// term magnitudes exceed the double range (use sigma_sum_log then).
Complex sigma_sum(const QdlParams& p, long k_hat);

/// (1/n) log |D^q(u)| through the closed-form product.
double dq_direct(const QdlParams& p);

/// (1/n) log |D^q(u)| through the paired-product rearrangement in terms of
/// A = 2 pi i - U, split by the congruence class of n mod 4.
double dq_rearranged(Complex A, long n);

struct TraceComponents {
    LogSum s1, s2;                       // the two single sums
    double dq1_log_over_n, dq2_log_over_n; // (1/n) log |D^q(u_k)|
};

struct TraceResult {
    long n;
    int congruence; // n mod 4
    double log_modulus;
    double log_modulus_over_n;
    double modulus; // exp(log_modulus); +inf once past the double range
    TraceComponents components;
};

/// |Trace| of the intertwiner for the LR sweep in the factored form
/// (1/n) |D1|^{-1/n} |D2|^{-1/n} |S1| |S2|; only the modulus is defined.
TraceResult trace_lr(const weights::LogLift& lift, long n, bool allow_large = false);

std::string trace_to_json(const TraceResult& t);

// --- term clouds -------------------------------------------------------------

struct TermCloud {
    int arity = 1; // number of index columns
    long n = 0;
    std::vector<std::array<long, 3>> indices;
    std::vector<Complex> values;

    Complex sum() const { return pairwise_compensated_sum(values); }
};

/// Terms QDL(u,v|j) omega^{j^2 - k j}, j = 1..n (the single-sum cloud).
TermCloud sigma_cloud(const QdlParams& p, long k_hat, bool allow_large = false);

/// Terms of the LR double sum, n^2 entries.
TermCloud trace_double_cloud(const weights::LogLift& lift, long n);

/// Product-form cloud for a general L/R word lift (data only): terms
/// prod_k QDL_k(2 i_k) q^{2 i_k^2 - w_k i_k} with w = (l,m,n) windings.
/// Triple clouds are capped at n <= 301.
TermCloud word_cloud(const weights::WordLift& lift, long n);

/// Sum the word cloud over its last index, halving the arity.
TermCloud collapse_last_index(const TermCloud& cloud);

void write_csv(const TermCloud& cloud, std::ostream& os, bool gnuplot_header = false);

} // namespace qtrace::skein

#endif
