#include "qtrace/asymptotics.hpp"

#include "qtrace/skein_trace.hpp"
#include "qtrace/special_functions.hpp"

#include <doctest.h>

#include <random>

using namespace qtrace;
using namespace qtrace::asymptotics;

TEST_CASE("volume constants") {
    const double vol = volume_figure_eight();
    CHECK(vol == doctest::Approx(2.029883).epsilon(1e-5));
    CHECK(std::abs(vol - 4.0 * special::lobachevsky(kPi / 6.0)) < 1e-13);
    CHECK(vol > 0.0);
}

TEST_CASE("c_n cases and congruence structure") {
    const Complex U{1.0, 2.0};
    const Complex V = std::log(1.0 + std::exp(U));
    SUBCASE("odd k is independent of the class") {
        const Complex ref = c_n_constant(U, V, 3, 1);
        for (int n8 : {3, 5, 7}) CHECK(std::abs(c_n_constant(U, V, 3, n8) - ref) < 1e-15);
    }
    SUBCASE("even k modulus depends only on n mod 4") {
        CHECK(std::abs(std::abs(c_n_constant(U, V, 2, 1)) - std::abs(c_n_constant(U, V, 2, 5))) <
              1e-15);
        CHECK(std::abs(std::abs(c_n_constant(U, V, 2, 3)) - std::abs(c_n_constant(U, V, 2, 7))) <
              1e-15);
        CHECK(std::abs(c_n_constant(U, V, 2, 1)) != doctest::Approx(std::abs(c_n_constant(U, V, 2, 3))));
    }
    SUBCASE("modulus formula matches the complex value") {
        for (long k : {3L, 2L})
            for (int n8 : {1, 3, 5, 7})
                CHECK(std::abs(c_n_constant(U, V, k, n8)) ==
                      doctest::Approx(c_n_modulus(U, V, k, n8 % 4)).epsilon(1e-14));
    }
    SUBCASE("bad class values") {
        CHECK_THROWS_AS(c_n_constant(U, V, 1, 2), DomainError);
        CHECK_THROWS_AS(c_n_modulus(U, V, 1, 0), DomainError);
    }
}

TEST_CASE("d_n limit values") {
    CHECK(d_n_limit({1.5, 0.0}, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d_n_limit({-0.3, 0.0}, 3) == doctest::Approx(1.0).epsilon(1e-14));

    // sequence convergence of the direct product toward the limit
    const Complex A{0.0, 2.0};
    for (int cls : {1, 3}) {
        const double lim = d_n_limit(A, cls);
        double prev = 1e9;
        for (long n : {101L, 401L}) {
            const long nn = cls == 1 ? n : n + 2;
            const double v =
                std::exp(skein::dq_direct(skein::QdlParams::from_U(kTwoPi * kI - A, nn)));
            CHECK(std::abs(v - lim) < prev);
            prev = std::abs(v - lim);
        }
    }
}

TEST_CASE("predicted trace growth structure") {
    const auto lift = weights::hyperbolic_lift();
    // per-level growth factor is exactly e^{4 L(pi/6)/pi} within a class
    const double g = predicted_trace_log(lift, 405) - predicted_trace_log(lift, 401);
    CHECK(g == doctest::Approx(4.0 * special::lobachevsky(kPi / 6.0) / kPi).epsilon(1e-13));
    // log-modulus over n converges to vol/(4 pi)
    const double v = predicted_trace_log(lift, 100001) / 100001.0;
    CHECK(v == doctest::Approx(volume_figure_eight() / (4.0 * kPi)).epsilon(1e-4));
}

TEST_CASE("laplace reference on the Gaussian example") {
    auto f = [](double t) { return -(t - 1.0) * (t - 1.0); };
    auto one = [](double) { return Complex{1.0, 0.0}; };
    const auto r = laplace_sum_reference(f, one, one, 0.0, 2.0, 10000, false);
    CHECK(std::abs(r.sum / r.estimate) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(r.x0 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.f2 == doctest::Approx(-2.0).epsilon(1e-4));

    const auto alt = laplace_sum_reference(f, one, one, 0.0, 2.0, 10000, true);
    CHECK(std::abs(alt.sum) / std::sqrt(10000.0) < 0.01);

    auto gt = [](double t) { return Complex{t, 0.0}; };
    const auto lin = laplace_sum_reference(f, gt, gt, 0.0, 2.0, 10000, false);
    CHECK(std::abs(lin.sum / lin.estimate) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("laplace boundary maximum is rejected") {
    auto f = [](double t) { return t; };
    auto one = [](double) { return Complex{1.0, 0.0}; };
    CHECK_THROWS_AS(laplace_sum_reference(f, one, one, 0.0, 1.0, 100, false), DomainError);
}

TEST_CASE("dq partial limits compose to the d_n limit") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(-5.0, 5.0);
    for (int t = 0; t < 50; ++t) {
        const Complex A{re(rng), im(rng)};
        if (std::abs(std::exp(A) + 1.0) < 1e-3) continue;
        const double cls1 = dq_partial_limits(A, DqPart::FirstSum1Mod4, 1).limit +
                            dq_partial_limits(A, DqPart::SecondSum1Mod4, 1).limit;
        CHECK(cls1 == doctest::Approx(std::log(d_n_limit(A, 1))).epsilon(1e-12));
        const double cls3 = dq_partial_limits(A, DqPart::Isolated3Mod4, 1).limit +
                            dq_partial_limits(A, DqPart::FirstSum3Mod4, 1).limit +
                            dq_partial_limits(A, DqPart::SecondSum3Mod4, 1).limit;
        CHECK(cls3 == doctest::Approx(std::log(d_n_limit(A, 3))).epsilon(1e-12));
    }
}

TEST_CASE("dq partial sums converge to their limits") {
    const Complex A{1.0, 2.0};
    SUBCASE("real A makes every limit vanish") {
        for (auto part : {DqPart::FirstSum1Mod4, DqPart::FirstSum3Mod4, DqPart::SecondSum1Mod4,
                          DqPart::SecondSum3Mod4, DqPart::Isolated3Mod4})
            CHECK(dq_partial_limits({1.2, 0.0}, part, 10).limit == doctest::Approx(0.0));
    }
    SUBCASE("first sum, class 1") {
        double prev = 1e9;
        for (long m : {100L, 400L, 1600L}) {
            const auto v = dq_partial_limits(A, DqPart::FirstSum1Mod4, m);
            CHECK(v.limit == doctest::Approx(-std::log(2.0) / (4.0 * kPi) * 2.0).epsilon(1e-14));
            const double dev = std::abs(v.finite_m - v.limit);
            CHECK(dev < prev);
            prev = dev;
        }
    }
    SUBCASE("second sums and the isolated term") {
        for (auto part : {DqPart::SecondSum1Mod4, DqPart::SecondSum3Mod4, DqPart::Isolated3Mod4}) {
            double prev = 1e9;
            for (long m : {100L, 400L, 1600L}) {
                const auto v = dq_partial_limits(A, part, m);
                const double dev = std::abs(v.finite_m - v.limit);
                CHECK(dev < prev);
                prev = dev;
            }
        }
    }
}

TEST_CASE("Euler product partials converge to cosh") {
    // partial products of (1 + (pi i - A)^2/(16 pi^2 (j-1/2)^2)) -> cosh((A-pi i)/4)
    const Complex A{0.8, -1.1};
    const Complex target = std::cosh((A - kPi * kI) / 4.0);
    auto partial = [&](long J) {
        Complex p{1.0, 0.0};
        for (long j = 1; j <= J; ++j) {
            const double d = (static_cast<double>(j) - 0.5);
            p *= 1.0 + (kPi * kI - A) * (kPi * kI - A) / (16.0 * kPi * kPi * d * d);
        }
        return p;
    };
    const double e1 = std::abs(partial(1000) - target);
    const double e2 = std::abs(partial(2000) - target);
    CHECK(e1 < 2e-3);
    CHECK(e2 < 0.6 * e1); // ~C/J decay
}

TEST_CASE("auxiliary cot integral") {
    CHECK(t_cot_integral() == doctest::Approx(std::log(2.0) / (8.0 * kPi)).epsilon(1e-10));
}

TEST_CASE("sigma ratio converges to |c_n| for both parities") {
    const Complex U{-2.58581, 6.05389};
    const Complex V = std::log(1.0 + std::exp(U));
    const double lam6 = special::lobachevsky(kPi / 6.0);
    for (long k : {5L, 4L}) {
        double prev = 1e9;
        for (long n : {257L, 1025L}) {
            skein::QdlParams p(U, V, n);
            const auto s = skein::sigma_sum_log(p, k);
            const double pred = std::log(c_n_modulus(U, V, k, static_cast<int>(n % 4))) +
                                0.5 * std::log(static_cast<double>(n)) +
                                static_cast<double>(n) * lam6 / kTwoPi;
            const double dev = std::abs(std::exp(s.log_modulus - pred) - 1.0);
            CHECK(dev < prev);
            prev = dev;
        }
        CHECK(prev < 0.05);
    }
}
