#ifndef QTRACE_SPECIAL_FUNCTIONS_HPP
#define QTRACE_SPECIAL_FUNCTIONS_HPP

#include "qtrace/errors.hpp"
#include "qtrace/numeric.hpp"

namespace qtrace::special {

/// Deformation parameter of the continuous quantum dilogarithms.
/// The discrete/continuous bridge always uses hbar = 2/n.
struct Hbar {
    double value;
    explicit Hbar(double v) : value(v) {
        if (!(v > 0.0)) throw DomainError("Hbar must be positive");
    }
};

/// Lobachevsky function  L(theta) = -Int_0^theta log|2 sin t| dt.
///
/// Reduced by pi-periodicity and oddness to [0, pi/2], then evaluated by
/// the zeta-coefficient expansion of -log(2 sin t); total function, no
/// error paths.
double lobachevsky(double theta);

/// Principal classical dilogarithm; power series for small |z|, standard
/// inversion/reflection/Landen-type identities elsewhere. z = 1 returns
/// pi^2/6 (the limit from inside); real z > 1 is on the cut and throws.
Complex dilog(Complex z);

inline double dilog_one() { return kPi * kPi / 6.0; }

struct QuadratureOptions {
    double abs_tol = 1e-12;    // absolute tolerance per contour segment
    int max_depth = 15;        // adaptive bisection depth
    double semicircle_radius = 0.5;
    double pole_guard = 1e-9;  // minimum distance to a pole of the extension
};

/// Small continuous quantum dilogarithm: the contour integral over the
/// real line with an upper semicircle bypassing the pole at 0, valid for
/// -pi*hbar/2 < Re z < pi + pi*hbar/2.  Throws StripViolation outside and
/// QuadratureFailure if the tolerance cannot be reached.
Complex small_qdl(Complex z, Hbar hbar, const QuadratureOptions& opt = {});

/// Big continuous quantum dilogarithm exp(small_qdl(z)/(2*pi*i*hbar)),
/// extended to the plane by its pi- and pi*hbar-step functional equations
/// (pi-steps first).  Throws PoleProximity within opt.pole_guard of a pole.
Complex big_qdl(Complex z, Hbar hbar, const QuadratureOptions& opt = {});

} // namespace qtrace::special

#endif
