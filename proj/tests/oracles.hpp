// Test-only reference implementations, kept independent of the library
// code paths they check.
#ifndef QTRACE_TESTS_ORACLES_HPP
#define QTRACE_TESTS_ORACLES_HPP

#include "qtrace/numeric.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace oracles {

using qtrace::Complex;
using qtrace::kI;
using qtrace::kPi;
using qtrace::kTwoPi;

// Fourier (Clausen) series: L(theta) = 1/2 sum_k sin(2 k theta)/k^2.
// Plain partial sum; tail after K terms is O(1/(K^2 |sin theta|)).
inline double lobachevsky_fourier(double theta, long K = 2000000) {
    double s = 0.0;
    // summed in reverse so the small tail terms accumulate first
    for (long k = K; k >= 1; --k)
        s += std::sin(2.0 * static_cast<double>(k) * theta) /
             (static_cast<double>(k) * static_cast<double>(k));
    return 0.5 * s;
}

// Fixed-subdivision composite 20-point Gauss-Legendre rule; a different
// node family from the adaptive Gauss-Kronrod used by the library.
inline constexpr std::array<double, 20> kGl20Nodes = {
    -0.9931285991850949, -0.9639719272779138, -0.9122344282513258, -0.8391169718222188,
    -0.7463319064601508, -0.636053680726515,  -0.5108670019508271, -0.37370608871541955,
    -0.2277858511416451, -0.07652652113349734, 0.07652652113349734, 0.2277858511416451,
    0.37370608871541955, 0.5108670019508271,  0.636053680726515,   0.7463319064601508,
    0.8391169718222188,  0.9122344282513258,  0.9639719272779138,  0.9931285991850949};
inline constexpr std::array<double, 20> kGl20Weights = {
    0.017614007139153273, 0.04060142980038622, 0.06267204833410944, 0.08327674157670467,
    0.10193011981724026,  0.11819453196151825, 0.13168863844917653, 0.14209610931838187,
    0.14917298647260366,  0.15275338713072578, 0.15275338713072578, 0.14917298647260366,
    0.14209610931838187,  0.13168863844917653, 0.11819453196151825, 0.10193011981724026,
    0.08327674157670467,  0.06267204833410944, 0.04060142980038622, 0.017614007139153273};

inline Complex gl20_composite(const std::function<Complex(double)>& f, double a, double b,
                              int panels) {
    Complex total{0.0, 0.0};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < kGl20Nodes.size(); ++i)
            acc += kGl20Weights[i] * f(mid + 0.5 * h * kGl20Nodes[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

// Contour integral of the small quantum dilogarithm on the GL20 composite
// rule (semicircle of radius r plus truncated rays).
inline Complex small_qdl_gl20(Complex z, double h, double r = 0.5, double T = 60.0,
                              int panels_per_unit = 4) {
    auto integrand = [&](Complex t) {
        return std::exp((2.0 * z - kPi) * t) /
               (4.0 * t * std::sinh(kPi * t) * std::sinh(kPi * h * t));
    };
    auto on_axis = [&](double t) { return integrand(Complex(t, 0.0)); };
    auto on_arc = [&](double phi) {
        const Complex t = std::polar(r, phi);
        return -integrand(t) * kI * t;
    };
    const int rays = static_cast<int>((T - r) * panels_per_unit) + 1;
    Complex total = gl20_composite(on_axis, -T, -r, rays);
    total += gl20_composite(on_axis, r, T, rays);
    total += gl20_composite(on_arc, 0.0, kPi, 8);
    return kTwoPi * kI * h * total;
}

// QDL^q(u, v | j) as a literal product, plain complex arithmetic.
inline Complex qdl_product(Complex U, Complex V, long n, long j) {
    const Complex u = std::exp(U / static_cast<double>(n));
    const long r = ((j % n) + n) % n;
    Complex prod{1.0, 0.0};
    for (long k = 1; k <= r; ++k)
        prod *= 1.0 + u * std::polar(1.0, -2.0 * kTwoPi * static_cast<double>(k) /
                                              static_cast<double>(n));
    return prod * std::exp(-static_cast<double>(r) * V / static_cast<double>(n));
}

// Sigma_n as a literal i-indexed sum.
inline Complex sigma_brute(Complex U, Complex V, long n, long k_hat) {
    Complex s{0.0, 0.0};
    for (long i = 1; i <= n; ++i) {
        const std::int64_t e = 2 * i * i - k_hat * i;
        s += qdl_product(U, V, n, 2 * i) *
             std::polar(1.0, kTwoPi * static_cast<double>(((e % n) + n) % n) /
                                 static_cast<double>(n));
    }
    return s;
}

// |D^q(u)| as a literal product of QDL values, in the log domain.
inline double dq_product_log_over_n(Complex U, Complex V, long n) {
    double acc = 0.0;
    for (long i = 1; i <= n; ++i) acc += std::log(std::abs(qdl_product(U, V, n, i)));
    return acc / static_cast<double>(n);
}

} // namespace oracles

#endif
