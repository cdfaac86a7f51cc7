#ifndef QTRACE_EDGE_WEIGHTS_HPP
#define QTRACE_EDGE_WEIGHTS_HPP

#include "qtrace/errors.hpp"
#include "qtrace/numeric.hpp"

#include <array>
#include <string>
#include <vector>

namespace qtrace::weights {

enum class Sign { Plus, Minus };

/// One column (a_k, b_k, c_k) of an edge weight system; entries in C*.
struct WeightTriple {
    Complex a, b, c;
};

/// The fixed point (t0, t1, t2 = t0) of the LR sweep, together with the
/// residual of the closed-form solution under the recursion.
struct PeriodicWeightSystem {
    std::array<WeightTriple, 3> triples;
    Sign sign_branch = Sign::Plus;
    double residual = 0.0;
};

/// Chosen logarithms of a periodic system: e^{A_k} = a_k etc., with
/// A0 + B0 + C0 = theta_v and the winding integers closing the period.
struct LogLift {
    std::array<Complex, 3> A, B, C, V;
    Complex theta_v;
    long l_hat = 0, m_hat = 0, n_hat = 0;
    double exp_residual = 0.0; // worst relative residual of e^{X_k} = x_k
};

/// L move: (a,b,c) -> (b^{-1}, (1+b)^2 a, (1+b)^{-2} b^2 c).
WeightTriple evolve_L(const WeightTriple& t);

/// R move: (a,b,c) -> (c^{-1}, (1+c)^2 b, (1+c)^{-2} c^2 a).
WeightTriple evolve_R(const WeightTriple& t);

/// Apply a word of L/R moves left to right.
WeightTriple evolve_word(const WeightTriple& t, const std::string& word);

/// Closed-form periodic solution of the LR sweep for a given b0, one of
/// the two quadratic roots per sign.  Throws DomainError for b0 in {0,-1}
/// and ResidualFailure if the closed form fails the recursion check.
PeriodicWeightSystem solve_periodic(Complex b0, Sign sign);

/// Choose logarithms for a periodic system: A0, B0 from the principal
/// branch shifted by the caller's integers, C0 := theta_v - A0 - B0, V_k
/// principal, the rest by the linear recursions.  Winding integers are
/// recovered by rounding and validated to residual < 1e-6.
LogLift lift_logarithms(const PeriodicWeightSystem& sys, Complex theta_v,
                        std::array<long, 2> base_branches);

/// Generic-word variant of the lift used by the term-cloud command; the
/// triple must be (approximately) periodic under the word.  Returns the
/// per-step logarithm data; windings validated as above.
struct WordLift {
    std::string word;
    std::vector<Complex> A, B, C, V; // index 0..k, V[0] unused
    long l_hat = 0, m_hat = 0, n_hat = 0;
};
WordLift lift_word(const WeightTriple& t0, const std::string& word,
                   Complex A0, Complex B0, Complex C0);

/// Least-squares Newton refinement of a word-periodic triple from a seed;
/// used to sharpen printed 6-digit values to machine precision.
WeightTriple refine_periodic(const WeightTriple& seed, const std::string& word,
                             double tol = 1e-13, int max_iter = 60);

double periodicity_residual(const WeightTriple& t, const std::string& word);

// --- presets -------------------------------------------------------------

/// b0 of the character induced by the hyperbolic metric of the mapping
/// torus (use with Sign::Plus; then a0 = e^{-2 pi i/3}).
Complex hyperbolic_b0();

/// The hyperbolic lift: solve_periodic(hyperbolic_b0(), +), theta_v = 0,
/// base branches (0,0); all winding integers vanish.
LogLift hyperbolic_lift();

/// The worked LR example lift (n = 801 in the term-cloud figure):
/// sign +, base branches (5,0), theta_v = A0+B0+C0; windings (5,-5,0).
LogLift example_lr_lift();

/// Machine-precision LLR-periodic triple and its lift, refined from the
/// worked triple-sum example; windings (3,0,-3).
WordLift example_llr_lift();

// --- serialization ---------------------------------------------------------

std::string to_json(const PeriodicWeightSystem& sys, const LogLift& lift);
std::pair<PeriodicWeightSystem, LogLift> from_json(const std::string& text);

} // namespace qtrace::weights

#endif
