#include "qtrace/special_functions.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace qtrace;
using namespace qtrace::special;

TEST_CASE("lobachevsky special values") {
    CHECK(lobachevsky(0.0) == 0.0);
    CHECK(std::abs(lobachevsky(kPi / 2.0)) < 1e-15);
    // value frozen from the Fourier-series oracle; consistent with the
    // volume 6 L(pi/3) = 2.02988...
    CHECK(lobachevsky(kPi / 3.0) == doctest::Approx(0.33831386880321793).epsilon(1e-12));
    CHECK(6.0 * lobachevsky(kPi / 3.0) == doctest::Approx(2.0298832128193).epsilon(1e-10));
    CHECK(lobachevsky(-0.7) == doctest::Approx(-lobachevsky(0.7)).epsilon(1e-15));
}

TEST_CASE("lobachevsky matches the Fourier series oracle") {
    for (double theta : {0.3, kPi / 3.0, 1.2, 2.0, 2.9}) {
        const double ref = oracles::lobachevsky_fourier(theta);
        CHECK(lobachevsky(theta) == doctest::Approx(ref).epsilon(5e-12));
    }
}

TEST_CASE("lobachevsky is odd and pi-periodic") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
        const double t = dist(rng);
        CHECK(std::abs(lobachevsky(t + kPi) - lobachevsky(t)) < 1e-13);
        CHECK(std::abs(lobachevsky(-t) + lobachevsky(t)) < 1e-13);
    }
}

TEST_CASE("dilog special values") {
    CHECK(dilog({0.0, 0.0}) == Complex{0.0, 0.0});
    CHECK(dilog({1.0, 0.0}).real() == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-15));
    CHECK(dilog({-1.0, 0.0}).real() == doctest::Approx(-kPi * kPi / 12.0).epsilon(1e-14));
    CHECK(std::abs(dilog({-1.0, 0.0}).imag()) < 1e-15);
    CHECK_THROWS_AS(dilog({1.5, 0.0}), DomainError);
    CHECK_THROWS_AS(dilog({2.0, 0.0}), DomainError);
}

TEST_CASE("dilog on the unit circle matches the Lobachevsky identity") {
    const double theta = kPi / 3.0;
    const Complex v = dilog(std::exp(2.0 * kI * theta));
    const Complex expect = kPi * kPi / 6.0 - theta * (kPi - theta) +
                           2.0 * kI * lobachevsky(theta);
    CHECK(std::abs(v - expect) < 1e-12);
}

TEST_CASE("dilog transform regions agree with the plain series") {
    // points where both the direct series and a transformed route apply
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> arg(-kPi, kPi);
    for (int i = 0; i < 50; ++i) {
        const Complex z = std::polar(0.55, arg(rng));
        Complex direct{0.0, 0.0}, p = z;
        for (int k = 1; k <= 300; ++k) {
            direct += p / static_cast<double>(k * k);
            p *= z;
        }
        CHECK(std::abs(dilog(z) - direct) < 1e-13);
    }
    // inversion consistency: li2(z) + li2(1/z) = -pi^2/6 - log^2(-z)/2
    for (int i = 0; i < 50; ++i) {
        const Complex z = std::polar(3.0, arg(rng));
        if (std::abs(z.imag()) < 1e-3) continue;
        const Complex lhs = dilog(z) + dilog(1.0 / z);
        const Complex lg = std::log(-z);
        CHECK(std::abs(lhs - (-kPi * kPi / 6.0 - 0.5 * lg * lg)) < 1e-12);
    }
}

TEST_CASE("small_qdl approaches the classical dilogarithm as hbar -> 0") {
    // li2^h(z) = li2(e^{2iz}) + O(h^2)
    const Complex target = dilog({-1.0, 0.0});
    const Complex v = small_qdl({kPi / 2.0, 0.0}, Hbar(0.02));
    CHECK(std::abs(v - target) < 5.0 * 0.02 * 0.02);

    // Richardson-style: the h^2 coefficient stabilizes
    const Complex t3 = dilog(std::exp(2.0 * kI * (kPi / 3.0)));
    const double e1 = std::abs(small_qdl({kPi / 3.0, 0.0}, Hbar(0.01)) - t3) / (0.01 * 0.01);
    const double e2 = std::abs(small_qdl({kPi / 3.0, 0.0}, Hbar(0.005)) - t3) / (0.005 * 0.005);
    CHECK(std::abs(e1 / e2 - 1.0) < 0.25);
}

TEST_CASE("small_qdl ratio h^2 coefficient bounded over decreasing hbar") {
    const Complex z{kPi / 2.0, 0.0};
    const Complex target = dilog(std::exp(2.0 * kI * z));
    double prev = -1.0;
    for (double h : {0.04, 0.02, 0.01}) {
        const double c = std::abs(small_qdl(z, Hbar(h)) - target) / (h * h);
        if (prev > 0.0) CHECK(std::abs(c / prev - 1.0) < 0.30);
        prev = c;
    }
}

TEST_CASE("small_qdl agrees with an independent quadrature") {
    // composite Gauss-Legendre 20 on the same contour (different node family)
    const Complex z{kPi / 2.0, 0.3};
    const double h = 0.02;
    const Complex mine = small_qdl(z, Hbar(h));
    const Complex ref = oracles::small_qdl_gl20(z, h, 0.5, 40.0, 6);
    CHECK(std::abs(mine - ref) < 1e-10);
}

TEST_CASE("small_qdl strip violation") {
    CHECK_THROWS_AS(small_qdl({-1.0, 0.0}, Hbar(0.1)), StripViolation);
    CHECK_THROWS_AS(small_qdl({kPi + 1.0, 0.0}, Hbar(0.1)), StripViolation);
}

TEST_CASE("big_qdl functional equations at quadrature-pure points") {
    // both sides inside the strip, so the equations are checked between
    // independent contour integrals
    {
        const double h = 0.1;
        const Complex z{kPi / 2.0, 0.0};
        const Complex lhs = big_qdl(z + kPi * h, Hbar(h)) *
                            (1.0 - std::exp(2.0 * kI * z + kI * kPi * h));
        const Complex rhs = big_qdl(z, Hbar(h));
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
    }
    {
        const double h = 0.2;
        const Complex z{0.4, 0.1};
        const Complex lhs = big_qdl(z + kPi, Hbar(h)) * (1.0 + std::exp(2.0 * kI * z / h));
        const Complex rhs = big_qdl(z, Hbar(h));
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(rhs));
    }
}

TEST_CASE("big_qdl functional equations at random strip points") {
    std::mt19937_64 rng(2024);
    for (double h : {0.5, 0.1, 0.02}) {
        std::uniform_real_distribution<double> re(0.05, kPi - kPi * h / 2.0 - 0.05);
        std::uniform_real_distribution<double> im(-0.5, 0.5);
        for (int i = 0; i < 17; ++i) {
            const Complex z{re(rng), im(rng)};
            const Complex lhs = big_qdl(z + kPi * h, Hbar(h)) *
                                (1.0 - std::exp(2.0 * kI * z + kI * kPi * h));
            const Complex rhs = big_qdl(z, Hbar(h));
            CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
            const Complex lhs2 = big_qdl(z + kPi, Hbar(h)) * (1.0 + std::exp(2.0 * kI * z / h));
            CHECK(std::abs(lhs2 - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("big_qdl vanishes at the first zero") {
    const double h = 0.1;
    const Complex z{-kPi * h / 2.0 + 1e-9, 0.0};
    CHECK(std::abs(big_qdl(z, Hbar(h))) < 1e-8);
}

TEST_CASE("big_qdl pole guard") {
    const double h = 0.1;
    const Complex pole{kPi + kPi * h / 2.0, 0.0};
    CHECK_THROWS_AS(big_qdl(pole, Hbar(h)), PoleProximity);
    CHECK_THROWS_AS(big_qdl(pole + Complex{1e-10, 0.0}, Hbar(h)), PoleProximity);
}
