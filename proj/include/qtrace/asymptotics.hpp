#ifndef QTRACE_ASYMPTOTICS_HPP
#define QTRACE_ASYMPTOTICS_HPP

#include "qtrace/edge_weights.hpp"
#include "qtrace/numeric.hpp"

#include <functional>

namespace qtrace::asymptotics {

/// Leading coefficient c_n(U, V, k) of Sigma_n ~ c_n sqrt(n) e^{n L(pi/6)/(2 pi)}.
/// Two-case formula: n-independent for odd k; for even k it carries
/// e^{-n pi i/4} and (1 - i^n e^{U/2}) and so depends on n mod 8 (its
/// modulus only on n mod 4).
Complex c_n_constant(Complex U, Complex V, long k_hat, int n_mod_8);

/// |c_n| directly from the closed modulus expressions.
double c_n_modulus(Complex U, Complex V, long k_hat, int n_mod_4);

/// Limit of |D^q(q e^{-A/n})|^{1/n} along n = n_mod_4 (1 or 3) mod 4.
double d_n_limit(Complex A, int n_mod_4);

/// Hyperbolic volume of the LR mapping torus, 6 L(pi/3) = 4 L(pi/6).
double volume_figure_eight();

/// Per-level growth rate L(pi/6)/pi of the predicted trace modulus.
double growth_rate_per_level();

/// Predicted |Trace| from the closed-form constants:
/// |c_n(U1,V1,l)| |c_n(U2,V2,m)| / (d_n(A1) d_n(A2)) e^{n L(pi/6)/pi}.
double predicted_trace_log(const weights::LogLift& lift, long n);
double predicted_trace(const weights::LogLift& lift, long n);

/// All class-resolved constants of the prediction for reporting.
struct AsymptoticPrediction {
    double c1_mod, c2_mod; // |c_n| for the two sums
    double d1, d2;         // d_n limits
    double growth_rate;    // L(pi/6)/pi
    double log_prefactor;  // log(c1 c2/(d1 d2))
};
AsymptoticPrediction prediction_constants(const weights::LogLift& lift, int n_mod_4);

// --- reference estimates --------------------------------------------------------

struct LaplaceSumResult {
    Complex sum;       // sum g_n(2 pi j/n) e^{n f(2 pi j/n)}, optionally alternating
    Complex estimate;  // g_inf(x0) sqrt(n) e^{n f(x0)} / sqrt(-2 pi f''(x0))
    double x0;
    double f2;         // f''(x0)
};

/// Discrete Laplace sum over the grid 2 pi j/n in [a, b] against the
/// closed-form leading estimate.  The maximum of f must be interior;
/// otherwise a DomainError is thrown.
LaplaceSumResult laplace_sum_reference(const std::function<double(double)>& f,
                                       const std::function<Complex(double)>& g_n,
                                       const std::function<Complex(double)>& g_inf,
                                       double a, double b, long n, bool alternating);

enum class DqPart {
    FirstSum1Mod4,
    FirstSum3Mod4,
    SecondSum1Mod4,
    SecondSum3Mod4,
    Isolated3Mod4,
};

struct DqPartValue {
    double finite_m; // the finite-m sum exactly as the log-formula groups it
    double limit;    // its closed-form limit
};

/// Finite-m partial sums of log |D^q|^{1/n} and their limits, one proof
/// step each.
DqPartValue dq_partial_limits(Complex A, DqPart which, long m);

/// Quadrature value of the auxiliary integral int_0^{1/4} t cot(2 pi t) dt
/// (equals log(2)/(8 pi); the integrand extends continuously by 1/(2 pi)
/// at t = 0).
double t_cot_integral();

} // namespace qtrace::asymptotics

#endif
