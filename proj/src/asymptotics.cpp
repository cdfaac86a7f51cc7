#include "qtrace/asymptotics.hpp"

#include "qtrace/errors.hpp"
#include "qtrace/special_functions.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace qtrace::asymptotics {

namespace {

int normalize_mod(int v, int m, const char* who) {
    if (v < 0 || v >= m || v % 2 == 0)
        throw DomainError(std::string(who) + ": congruence class must be odd and reduced");
    return v;
}

Complex i_pow(int n_mod_4) { return n_mod_4 % 4 == 1 ? kI : -kI; }

} // namespace

Complex c_n_constant(Complex U, Complex V, long k_hat, int n_mod_8) {
    normalize_mod(n_mod_8, 8, "c_n_constant");
    const Complex pref =
        std::pow(3.0, -0.25) * std::exp((U - kTwoPi * kI) / (4.0 * kPi * kI) * std::log(2.0));
    // (1 - i sqrt 3)/2 = 1 + e^{-2 i pi/3}, principal log = -i pi/3
    const Complex petal =
        std::exp((kTwoPi * kI - U) / (4.0 * kPi * kI) * Complex(0.0, -kPi / 3.0));
    if (k_hat % 2 != 0) {
        return pref * std::exp(-static_cast<double>(k_hat) * kI * kPi / 6.0) *
               std::exp(-V / 6.0) * petal;
    }
    const Complex in = i_pow(n_mod_8 % 4);
    return pref * std::exp(-static_cast<double>(n_mod_8) * kI * kPi / 4.0) *
           std::exp(-2.0 * static_cast<double>(k_hat) * kI * kPi / 3.0) *
           std::exp(-2.0 * V / 3.0) * (1.0 - in * std::exp(U / 2.0)) * petal;
}

double c_n_modulus(Complex U, Complex V, long k_hat, int n_mod_4) {
    normalize_mod(n_mod_4, 4, "c_n_modulus");
    const double base = std::pow(3.0, -0.25) *
                        std::pow(2.0, (U.imag() - kTwoPi) / (4.0 * kPi)) *
                        std::exp(U.real() / 12.0);
    if (k_hat % 2 != 0) return base * std::exp(-V.real() / 6.0);
    return base * std::exp(-2.0 * V.real() / 3.0) *
           std::abs(1.0 - i_pow(n_mod_4) * std::exp(U / 2.0));
}

double d_n_limit(Complex A, int n_mod_4) {
    normalize_mod(n_mod_4, 4, "d_n_limit");
    const Complex num = (A - kPi * kI) / 4.0;
    const Complex den = (A + kPi * kI) / 4.0;
    Complex ratio;
    if (n_mod_4 == 1) {
        ratio = std::cosh(num) / std::cosh(den);
        if (std::abs(std::cosh(den)) < 1e-14)
            throw DomainError("d_n_limit: cosh denominator vanishes");
    } else {
        if (std::abs(std::sinh(den)) < 1e-14)
            throw DomainError("d_n_limit: sinh denominator vanishes");
        ratio = std::sinh(num) / std::sinh(den);
    }
    return std::pow(2.0, -A.imag() / (4.0 * kPi)) * std::pow(std::abs(ratio), 0.25);
}

double volume_figure_eight() { return 6.0 * special::lobachevsky(kPi / 3.0); }

double growth_rate_per_level() { return special::lobachevsky(kPi / 6.0) / kPi; }

AsymptoticPrediction prediction_constants(const weights::LogLift& lift, int n_mod_4) {
    const Complex U1 = kTwoPi * kI - lift.A[1];
    const Complex U2 = kTwoPi * kI - lift.A[2];
    AsymptoticPrediction p;
    p.c1_mod = c_n_modulus(U1, lift.V[1], lift.l_hat, n_mod_4);
    p.c2_mod = c_n_modulus(U2, lift.V[2], lift.m_hat, n_mod_4);
    p.d1 = d_n_limit(lift.A[1], n_mod_4);
    p.d2 = d_n_limit(lift.A[2], n_mod_4);
    p.growth_rate = growth_rate_per_level();
    p.log_prefactor = std::log(p.c1_mod) + std::log(p.c2_mod) - std::log(p.d1) - std::log(p.d2);
    return p;
}

double predicted_trace_log(const weights::LogLift& lift, long n) {
    if (n % 2 == 0) throw DomainError("predicted_trace: n must be odd");
    const AsymptoticPrediction p = prediction_constants(lift, static_cast<int>(n % 4));
    return p.log_prefactor + static_cast<double>(n) * p.growth_rate;
}

double predicted_trace(const weights::LogLift& lift, long n) {
    return std::exp(predicted_trace_log(lift, n));
}

LaplaceSumResult laplace_sum_reference(const std::function<double(double)>& f,
                                       const std::function<Complex(double)>& g_n,
                                       const std::function<Complex(double)>& g_inf,
                                       double a, double b, long n, bool alternating) {
    if (!(a < b) || n < 1) throw DomainError("laplace_sum_reference: bad interval or n");

    // locate the maximum of f: coarse grid, then golden-section refinement
    const int grid = 4096;
    double x0 = a, best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double x = a + (b - a) * i / grid;
        double v = f(x);
        if (v > best) {
            best = v;
            x0 = x;
        }
    }
    const double cell = (b - a) / grid;
    if (x0 - a < 1.5 * cell || b - x0 < 1.5 * cell)
        throw DomainError("laplace_sum_reference: maximum of f lies on the boundary");
    {
        double lo = x0 - cell, hi = x0 + cell;
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = f(x1), f2v = f(x2);
        for (int it = 0; it < 200 && hi - lo > 1e-13 * (b - a); ++it) {
            if (f1 < f2v) {
                lo = x1;
                x1 = x2;
                f1 = f2v;
                x2 = lo + gr * (hi - lo);
                f2v = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2v = f1;
                x1 = hi - gr * (hi - lo);
                f1 = f(x1);
            }
        }
        x0 = (lo + hi) / 2.0;
    }

    const double h = std::max(1e-5 * (b - a), 1e-7);
    const double f2 = (f(x0 + h) - 2.0 * f(x0) + f(x0 - h)) / (h * h);
    if (!(f2 < 0.0))
        throw DomainError("laplace_sum_reference: f''(x0) must be negative");

    const double fx0 = f(x0);
    const long j_lo = static_cast<long>(std::ceil(a * n / kTwoPi - 1e-12));
    const long j_hi = static_cast<long>(std::floor(b * n / kTwoPi + 1e-12));
    std::vector<Complex> terms;
    terms.reserve(static_cast<std::size_t>(std::max<long>(0, j_hi - j_lo + 1)));
    for (long j = j_lo; j <= j_hi; ++j) {
        const double x = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        // scale by e^{-n fx0} so the terms stay representable
        Complex t = g_n(x) * std::exp(static_cast<double>(n) * (f(x) - fx0));
        if (alternating && (j % 2 != 0)) t = -t;
        terms.push_back(t);
    }
    LaplaceSumResult r;
    r.x0 = x0;
    r.f2 = f2;
    const double scale = std::exp(static_cast<double>(n) * fx0);
    r.sum = pairwise_compensated_sum(terms) * scale;
    r.estimate = g_inf(x0) / std::sqrt(-kTwoPi * f2) * std::sqrt(static_cast<double>(n)) * scale;
    return r;
}

DqPartValue dq_partial_limits(Complex A, DqPart which, long m) {
    if (m < 1) throw DomainError("dq_partial_limits: m must be >= 1");
    if (std::abs(std::exp(A) + 1.0) < 1e-10)
        throw DomainError("dq_partial_limits: e^A = -1 is singular");
    const Complex Ab = std::conj(A);
    const double log2 = std::log(2.0);

    auto E = [](Complex w, double dn) { return std::abs(std::exp(w / dn) - 1.0); };

    DqPartValue out{0.0, 0.0};
    switch (which) {
    case DqPart::FirstSum1Mod4: {
        const double dn = static_cast<double>(4 * m + 1);
        for (long j = 1; j <= m; ++j) {
            const Complex fj = 4.0 * kPi * kI * static_cast<double>(j) - kPi * kI;
            out.finite_m += static_cast<double>(2 * j - 1) / dn *
                            std::log(E(-A + fj, dn) / E(-Ab + fj, dn));
        }
        out.limit = -log2 / (4.0 * kPi) * A.imag();
        break;
    }
    case DqPart::FirstSum3Mod4: {
        const double dn = static_cast<double>(4 * m + 3);
        for (long j = 1; j <= m; ++j) {
            const Complex fj = 4.0 * kPi * kI * static_cast<double>(j) + kPi * kI;
            out.finite_m += static_cast<double>(2 * j) / dn *
                            std::log(E(-A + fj, dn) / E(-Ab + fj, dn));
        }
        out.limit = -log2 / (4.0 * kPi) * A.imag();
        break;
    }
    case DqPart::SecondSum1Mod4: {
        const double dn = static_cast<double>(4 * m + 1);
        for (long j = 1; j <= m; ++j) {
            const Complex fj = 4.0 * kPi * kI * static_cast<double>(j);
            const double num = E(-A + fj - kPi * kI, dn) * E(-Ab + fj - 3.0 * kPi * kI, dn);
            const double den = E(-Ab + fj - kPi * kI, dn) * E(-A + fj - 3.0 * kPi * kI, dn);
            out.finite_m += static_cast<double>(m - j + 1) / dn * std::log(num / den);
        }
        out.limit =
            0.25 * std::log(std::abs(std::cosh((A - kPi * kI) / 4.0) /
                                     std::cosh((A + kPi * kI) / 4.0)));
        break;
    }
    case DqPart::SecondSum3Mod4: {
        const double dn = static_cast<double>(4 * m + 3);
        for (long j = 1; j <= m; ++j) {
            const Complex fj = 4.0 * kPi * kI * static_cast<double>(j);
            const double num = E(-A + fj + kPi * kI, dn) * E(-Ab + fj - kPi * kI, dn);
            const double den = E(-Ab + fj + kPi * kI, dn) * E(-A + fj - kPi * kI, dn);
            out.finite_m += static_cast<double>(m - j + 1) / dn * std::log(num / den);
        }
        out.limit = 0.25 * std::log(std::abs((A + kPi * kI) * std::sinh((A - kPi * kI) / 4.0) /
                                             ((A - kPi * kI) * std::sinh((A + kPi * kI) / 4.0))));
        break;
    }
    case DqPart::Isolated3Mod4: {
        const double dn = static_cast<double>(4 * m + 3);
        out.finite_m = static_cast<double>(m + 1) / dn *
                       std::log(E(-A + kPi * kI, dn) / E(-Ab + kPi * kI, dn));
        out.limit = 0.25 * std::log(std::abs(A - kPi * kI) / std::abs(Ab - kPi * kI));
        break;
    }
    }
    return out;
}

double t_cot_integral() {
    // t cot(2 pi t) with the continuous extension 1/(2 pi) at t = 0
    auto f = [](double t) {
        if (t < 1e-8) return 1.0 / kTwoPi;
        return t * std::cos(kTwoPi * t) / std::sin(kTwoPi * t);
    };
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 0.25, 12,
                                                                             1e-13, &err);
    if (err > 1e-11) throw QuadratureFailure("t_cot_integral: quadrature did not converge");
    return v;
}

} // namespace qtrace::asymptotics
