#ifndef QTRACE_NUMERIC_HPP
#define QTRACE_NUMERIC_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace qtrace {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// A nonzero complex number stored as log-magnitude plus a unit phase,
/// so that long products of exponentially large or small factors never
/// leave the double range.
struct LogComplex {
    double log_mag = 0.0;   // log |z|
    Complex phase{1.0, 0.0}; // z / |z|, kept at unit modulus

    static LogComplex one() { return {}; }

    static LogComplex from(Complex z) {
        double m = std::abs(z);
        if (m == 0.0) return {-std::numeric_limits<double>::infinity(), {1.0, 0.0}};
        return {std::log(m), z / m};
    }

    // May overflow/underflow to inf/0 by design; callers that need the
    // magnitude in a safe form use log_mag directly.
    Complex value() const { return std::exp(log_mag) * phase; }

    LogComplex& operator*=(Complex f) {
        double m = std::abs(f);
        log_mag += std::log(m);
        phase *= f / m;
        renormalize();
        return *this;
    }

    LogComplex& operator*=(const LogComplex& o) {
        log_mag += o.log_mag;
        phase *= o.phase;
        renormalize();
        return *this;
    }

    LogComplex& operator/=(Complex f) {
        double m = std::abs(f);
        log_mag -= std::log(m);
        phase *= std::conj(f) / m;
        renormalize();
        return *this;
    }

    void renormalize() { phase /= std::abs(phase); }
};

/// Neumaier-compensated sum over a fixed index order; deterministic.
inline Complex compensated_sum(std::span<const Complex> terms) {
    double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;
    for (const Complex& z : terms) {
        double tr = sr + z.real();
        if (std::abs(sr) >= std::abs(z.real()))
            cr += (sr - tr) + z.real();
        else
            cr += (z.real() - tr) + sr;
        sr = tr;
        double ti = si + z.imag();
        if (std::abs(si) >= std::abs(z.imag()))
            ci += (si - ti) + z.imag();
        else
            ci += (z.imag() - ti) + si;
        si = ti;
    }
    return {sr + cr, si + ci};
}

/// Pairwise reduction over compensated blocks. Deterministic for a fixed
/// block size; used for the oscillatory term sums where opposite petals
/// cancel.
inline Complex pairwise_compensated_sum(std::span<const Complex> terms,
                                        std::size_t block = 4096) {
    if (terms.size() <= block) return compensated_sum(terms);
    std::vector<Complex> partial;
    partial.reserve(terms.size() / block + 1);
    for (std::size_t i = 0; i < terms.size(); i += block) {
        std::size_t len = std::min(block, terms.size() - i);
        partial.push_back(compensated_sum(terms.subspan(i, len)));
    }
    while (partial.size() > 1) {
        std::vector<Complex> next;
        next.reserve((partial.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < partial.size(); i += 2)
            next.push_back(partial[i] + partial[i + 1]);
        if (partial.size() % 2) next.push_back(partial.back());
        partial.swap(next);
    }
    return partial.empty() ? Complex{0.0, 0.0} : partial[0];
}

/// exp(2*pi*i * k / n) for integer k, with the angle reduced exactly in
/// integer arithmetic first.
inline Complex unit_root(std::int64_t k, std::int64_t n) {
    std::int64_t r = k % n;
    if (r < 0) r += n;
    return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(n));
}

inline std::int64_t mod_nonneg(std::int64_t x, std::int64_t m) {
    std::int64_t r = x % m;
    return r < 0 ? r + m : r;
}

} // namespace qtrace

#endif
