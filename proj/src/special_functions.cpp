#include "qtrace/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <cmath>

namespace qtrace::special {

namespace {

// ---------------------------------------------------------------------------
// Lobachevsky
// ---------------------------------------------------------------------------

// -log(2 sin t) = -log(2t) + sum_k zeta(2k)/(k pi^{2k}) t^{2k}, so on
// [0, pi/2] the antiderivative is a series in (t/pi)^2 with ratio <= 1/4.
constexpr int kZetaTerms = 40;

const std::array<double, kZetaTerms>& zeta_even_table() {
    static const std::array<double, kZetaTerms> table = [] {
        std::array<double, kZetaTerms> t{};
        for (int k = 1; k <= kZetaTerms; ++k)
            t[static_cast<std::size_t>(k - 1)] = std::riemann_zeta(2.0 * k);
        return t;
    }();
    return table;
}

double lobachevsky_core(double t) {
    // 0 <= t <= pi/2
    if (t == 0.0) return 0.0;
    const auto& zt = zeta_even_table();
    double s = t - t * std::log(2.0 * t);
    const double x2 = (t / kPi) * (t / kPi);
    double p = x2;
    for (int k = 1; k <= kZetaTerms; ++k) {
        double term = zt[static_cast<std::size_t>(k - 1)] / (k * (2.0 * k + 1.0)) * t * p;
        s += term;
        if (term < 1e-17 * std::abs(s)) break;
        p *= x2;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Dilogarithm
// ---------------------------------------------------------------------------

// Power series sum z^k/k^2, adequate for |z| <= 0.6.
Complex dilog_series(Complex z) {
    Complex sum = 0.0, p = z;
    for (int k = 1; k < 200; ++k) {
        Complex term = p / static_cast<double>(k * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        p *= z;
    }
    return sum;
}

// Coefficients B_{2k}/(2k+1)! of the expansion in u = -log(1-z).
constexpr std::array<double, 22> kBernCoeff = {
    2.7777777777777777778e-02, -2.7777777777777777778e-04,
    4.7241118669690098262e-06, -9.1857730746619635509e-08,
    1.8978869988970999072e-09, -4.0647616451442255268e-11,
    8.9216910204564525552e-13, -1.9939295860721075687e-14,
    4.5189800296199181917e-16, -1.0356517612181247014e-17,
    2.3952186210261867457e-19, -5.5817858743250093363e-21,
    1.3091507554183212858e-22, -3.0874198024267402932e-24,
    7.3159756527022034204e-26, -1.7408456572340007410e-27,
    4.1576356446138997196e-29, -9.9621484882846221032e-31,
    2.3940344248961653005e-32, -5.7683473553673900843e-34,
    1.3931794796470079778e-35, -3.3721219654850894705e-37,
};

// Valid on {|z| <= 1, Re z <= 0.5} where |log(1-z)| < 2*pi comfortably.
Complex dilog_bernoulli(Complex z) {
    const Complex u = -std::log(1.0 - z);
    const Complex u2 = u * u;
    Complex sum = u - u2 / 4.0;
    Complex p = u * u2; // u^{2k+1}
    for (std::size_t k = 0; k < kBernCoeff.size(); ++k) {
        Complex term = kBernCoeff[k] * p;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        p *= u2;
    }
    return sum;
}

Complex dilog_unit_disk(Complex z) {
    // |z| <= 1, with Re z <= 0.5 guaranteed by the caller.
    if (std::abs(z) <= 0.6) return dilog_series(z);
    return dilog_bernoulli(z);
}

// ---------------------------------------------------------------------------
// Quantum dilogarithm contour integral
// ---------------------------------------------------------------------------

struct Strip {
    double lo, hi; // -pi*h/2 < Re z < pi + pi*h/2
};

Strip strip_of(double h) { return {-kPi * h / 2.0, kPi + kPi * h / 2.0}; }

Complex qdl_integrand(Complex t, Complex z, double h) {
    Complex num = std::exp((2.0 * z - kPi) * t);
    Complex den = 4.0 * t * std::sinh(kPi * t) * std::sinh(kPi * h * t);
    return num / den;
}

template <typename F>
Complex integrate_segment(F&& f, double a, double b, const QuadratureOptions& opt) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    Complex v = gauss_kronrod<double, 31>::integrate(f, a, b, opt.max_depth, opt.abs_tol, &err);
    if (!is_finite(v) || err > 1e4 * opt.abs_tol * std::max(1.0, std::abs(v)))
        throw QuadratureFailure("quantum dilogarithm quadrature did not converge");
    return v;
}

Complex small_qdl_strip(Complex z, double h, const QuadratureOptions& opt) {
    const double r = opt.semicircle_radius;
    // Exponential decay rates of the integrand toward +/- infinity.
    const double rate_pos = 2.0 * kPi + kPi * h - 2.0 * z.real();
    const double rate_neg = 2.0 * z.real() + kPi * h;
    // Truncate where the tail bound drops below tolerance; the prefactor
    // of the tail is O(1/h) through the sinh(pi h t) factor.
    auto cutoff = [&](double rate) {
        double T = (std::log(1.0 / opt.abs_tol) + std::log(1.0 / h) + 12.0) / rate;
        return std::max(T, 4.0);
    };
    const double Tp = cutoff(rate_pos);
    const double Tn = cutoff(rate_neg);

    auto on_axis = [&](double t) { return qdl_integrand(Complex(t, 0.0), z, h); };
    Complex total = integrate_segment(on_axis, -Tn, -r, opt);
    total += integrate_segment(on_axis, r, Tp, opt);

    // Upper semicircle t = r e^{i phi}, phi from pi down to 0.
    auto on_arc = [&](double phi) {
        Complex t = std::polar(r, phi);
        return -qdl_integrand(t, z, h) * kI * t;
    };
    total += integrate_segment(on_arc, 0.0, kPi, opt);

    return 2.0 * kPi * kI * h * total;
}

} // namespace

double lobachevsky(double theta) {
    if (!std::isfinite(theta)) throw DomainError("lobachevsky: non-finite argument");
    // Reduce mod pi into (-pi/2, pi/2].
    double t = std::remainder(theta, kPi);
    double sign = 1.0;
    if (t < 0.0) {
        t = -t;
        sign = -1.0;
    }
    if (t > kPi / 2.0) t = kPi / 2.0; // remainder() already keeps |t| <= pi/2
    return sign * lobachevsky_core(t);
}

Complex dilog(Complex z) {
    if (!is_finite(z)) throw DomainError("dilog: non-finite argument");
    if (z.imag() == 0.0 && z.real() >= 1.0) {
        if (z.real() == 1.0) return {dilog_one(), 0.0};
        throw DomainError("dilog: argument on the branch cut [1, inf)");
    }
    if (z == Complex(0.0, 0.0)) return {0.0, 0.0};

    Complex result = 0.0;
    double outer = 1.0;
    Complex w = z;
    if (std::abs(w) > 1.0) {
        // li2(z) = -pi^2/6 - log^2(-z)/2 - li2(1/z)
        Complex lg = std::log(-w);
        result += -kPi * kPi / 6.0 - 0.5 * lg * lg;
        w = 1.0 / w;
        outer = -1.0;
    }
    if (w.real() > 0.5) {
        // li2(w) = pi^2/6 - log(w) log(1-w) - li2(1-w)
        Complex corr = kPi * kPi / 6.0 - std::log(w) * std::log(1.0 - w);
        result += outer * corr;
        w = 1.0 - w;
        outer = -outer;
    }
    return result + outer * dilog_unit_disk(w);
}

Complex small_qdl(Complex z, Hbar hbar, const QuadratureOptions& opt) {
    if (!is_finite(z)) throw DomainError("small_qdl: non-finite argument");
    const Strip s = strip_of(hbar.value);
    if (!(z.real() > s.lo && z.real() < s.hi))
        throw StripViolation("small_qdl: Re z outside (-pi*hbar/2, pi + pi*hbar/2)");
    return small_qdl_strip(z, hbar.value, opt);
}

Complex big_qdl(Complex z, Hbar hbar, const QuadratureOptions& opt) {
    if (!is_finite(z)) throw DomainError("big_qdl: non-finite argument");
    const double h = hbar.value;

    // Poles of the extension sit at pi + pi*h/2 + a*pi + b*pi*h, a,b >= 0.
    if (std::abs(z.imag()) < opt.pole_guard &&
        z.real() >= kPi + kPi * h / 2.0 - opt.pole_guard) {
        double x = z.real() - (kPi + kPi * h / 2.0);
        // distance to the lattice {a*pi + b*pi*h : a,b >= 0}
        for (double a = 0.0; a * kPi <= x + kPi; a += 1.0) {
            double rem = x - a * kPi;
            double b = std::round(rem / (kPi * h));
            if (b >= 0.0 && std::hypot(rem - b * kPi * h, z.imag()) < opt.pole_guard)
                throw PoleProximity("big_qdl: argument within guard distance of a pole");
        }
    }

    // Reduce Re z into [0, pi) by pi-steps; the strip is wider than pi so
    // the reduced point is always valid for the contour integral.
    const double steps = std::floor(z.real() / kPi);
    const Complex z0 = z - steps * kPi;

    const Complex expo = small_qdl_strip(z0, h, opt) / (kTwoPi * kI * h);
    LogComplex acc{expo.real(), std::polar(1.0, expo.imag())};

    const auto a = static_cast<long>(steps);
    if (a > 0) {
        // Li2(w + pi) = (1 + e^{2iw/h})^{-1} Li2(w), walked from z0 up to z.
        for (long k = 0; k < a; ++k) {
            Complex f = 1.0 + std::exp(2.0 * kI * (z0 + static_cast<double>(k) * kPi) / h);
            if (std::abs(f) < opt.pole_guard)
                throw PoleProximity("big_qdl: functional-equation factor vanishes (pole)");
            acc /= f;
        }
    } else if (a < 0) {
        // Li2(w) = (1 + e^{2iw/h}) Li2(w + pi), walked from z0 down to z.
        for (long k = 1; k <= -a; ++k) {
            Complex f = 1.0 + std::exp(2.0 * kI * (z0 - static_cast<double>(k) * kPi) / h);
            if (f == Complex(0.0, 0.0)) return {0.0, 0.0}; // exact zero of the extension
            acc *= f;
        }
    }
    return acc.value();
}

} // namespace qtrace::special
