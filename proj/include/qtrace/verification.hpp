#ifndef QTRACE_VERIFICATION_HPP
#define QTRACE_VERIFICATION_HPP

#include "qtrace/edge_weights.hpp"
#include "qtrace/numeric.hpp"

#include <string>
#include <vector>

namespace qtrace::verification {

/// Deliberate defects injectable into the predicted-value side of the
/// convergence criteria, to prove the checks are alive.
enum class Mutation { None, FlipDnImA, FlipCnParity };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string details;
};

struct Options {
    std::string scratch_dir; // where figure CSVs are written; empty = std temp
    Mutation mutation = Mutation::None;
    bool keep_files = false;  // keep the figure CSVs instead of deleting them
    double quad_tol = 1e-12;  // quadrature tolerance for the bridge criterion
};

inline constexpr int kCriterionCount = 13;

/// Run one numbered criterion (1..13).  Exceptions are caught and turned
/// into failures with the message in `details`.
CriterionResult run_criterion(int id, const Options& opt = {});

/// Run every criterion, or the subset whose name contains `only`.
std::vector<CriterionResult> run_all(const Options& opt = {}, const std::string& only = "");

bool all_passed(const std::vector<CriterionResult>& rs);

std::string report_json(const std::vector<CriterionResult>& rs);

/// Brute-force double-sum evaluation of |Trace| straight from the
/// unfactored formula; reference oracle for the factorization criterion
/// (plain complex arithmetic, small n only).
double trace_lr_double_sum_reference(const weights::LogLift& lift, long n);

/// Predicted trace modulus with an optional injected mutation.
double predicted_trace_log_mutated(const weights::LogLift& lift, long n, Mutation mut);

/// Predicted |Sigma_n| coefficient modulus with an optional mutation.
double c_n_modulus_mutated(Complex U, Complex V, long k_hat, int n_mod_4, Mutation mut);

} // namespace qtrace::verification

#endif
