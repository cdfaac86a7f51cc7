#include "qtrace/edge_weights.hpp"

#include <doctest.h>

#include <random>

using namespace qtrace;
using namespace qtrace::weights;

namespace {
double residual_LR(const WeightTriple& t) { return periodicity_residual(t, "LR"); }
} // namespace

TEST_CASE("evolve moves at the symmetric point") {
    const WeightTriple t{1.0, 1.0, 1.0};
    const WeightTriple l = evolve_L(t);
    CHECK(l.a == Complex{1.0, 0.0});
    CHECK(l.b == Complex{4.0, 0.0});
    CHECK(l.c == Complex{0.25, 0.0});
    const WeightTriple r = evolve_R(t);
    CHECK(r.a == Complex{1.0, 0.0});
    CHECK(r.b == Complex{4.0, 0.0});
    CHECK(r.c == Complex{0.25, 0.0});
}

TEST_CASE("evolve_R hand-checked value") {
    const WeightTriple r = evolve_R({1.0, 4.0, 0.25});
    CHECK(std::abs(r.a - Complex{4.0, 0.0}) < 1e-15);
    CHECK(std::abs(r.b - Complex{6.25, 0.0}) < 1e-15);
    CHECK(std::abs(r.c - Complex{0.04, 0.0}) < 1e-15);
}

TEST_CASE("evolve pole inputs") {
    CHECK_THROWS_AS(evolve_L({1.0, {-1.0, 0.0}, 1.0}), DomainError);
    CHECK_THROWS_AS(evolve_L({1.0, {0.0, 0.0}, 1.0}), DomainError);
    CHECK_THROWS_AS(evolve_R({1.0, 1.0, {-1.0, 0.0}}), DomainError);
}

TEST_CASE("solve_periodic excluded inputs") {
    CHECK_THROWS_AS(solve_periodic({0.0, 0.0}, Sign::Plus), DomainError);
    CHECK_THROWS_AS(solve_periodic({-1.0, 0.0}, Sign::Minus), DomainError);
}

TEST_CASE("solve_periodic fixed points") {
    SUBCASE("hyperbolic point") {
        const auto sys = solve_periodic(hyperbolic_b0(), Sign::Plus);
        CHECK(residual_LR(sys.triples[0]) < 1e-10);
        CHECK(std::abs(sys.triples[0].a - std::polar(1.0, -kTwoPi / 3.0)) < 1e-14);
        // the recursion forces c0 = 1 at this point
        CHECK(std::abs(sys.triples[0].c - Complex{1.0, 0.0}) < 1e-14);
    }
    SUBCASE("real b0") {
        const auto sys = solve_periodic({2.0, 0.0}, Sign::Plus);
        CHECK(residual_LR(sys.triples[0]) < 1e-10);
    }
    SUBCASE("random annulus, both signs") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> mod(0.2, 5.0), arg(-kPi, kPi);
        int done = 0;
        while (done < 200) {
            const Complex b0 = std::polar(mod(rng), arg(rng));
            if (std::abs(b0) < 0.25 || std::abs(b0 + 1.0) < 0.05) continue;
            for (Sign s : {Sign::Plus, Sign::Minus}) {
                const auto sys = solve_periodic(b0, s);
                CHECK(residual_LR(sys.triples[0]) < 1e-8);
            }
            ++done;
        }
    }
    SUBCASE("sign branches are distinct away from the discriminant zeros") {
        const auto p = solve_periodic({0.7, 0.4}, Sign::Plus);
        const auto m = solve_periodic({0.7, 0.4}, Sign::Minus);
        CHECK(std::abs(p.triples[0].a - m.triples[0].a) > 1e-6);
    }
    SUBCASE("consecutive triples follow the moves") {
        const auto sys = solve_periodic({0.3, 1.1}, Sign::Minus);
        const auto l = evolve_L(sys.triples[0]);
        CHECK(std::abs(l.a - sys.triples[1].a) < 1e-12);
        CHECK(std::abs(l.b - sys.triples[1].b) < 1e-12);
        CHECK(std::abs(l.c - sys.triples[1].c) < 1e-12);
    }
}

TEST_CASE("lift_logarithms invariants") {
    const auto sys = solve_periodic({0.7, 0.4}, Sign::Plus);
    const auto& t0 = sys.triples[0];
    const Complex theta = std::log(t0.a) + std::log(t0.b) + std::log(t0.c);
    const auto lift = lift_logarithms(sys, theta, {1, -1});

    CHECK(lift.exp_residual < 1e-10);
    CHECK(std::abs(lift.A[0] + lift.B[0] + lift.C[0] - theta) < 1e-14);
    CHECK(lift.l_hat + lift.m_hat + lift.n_hat == 0);

    // linear recursions hold exactly as constructed
    CHECK(std::abs(lift.A[1] + lift.B[0]) < 1e-14);
    CHECK(std::abs(lift.B[1] - 2.0 * lift.V[1] - lift.A[0]) < 1e-13);
    CHECK(std::abs(lift.C[2] + 2.0 * lift.V[2] - 2.0 * lift.C[1] - lift.A[1]) < 1e-13);
}

TEST_CASE("lift theta mismatch is rejected") {
    const auto sys = solve_periodic({0.7, 0.4}, Sign::Plus);
    CHECK_THROWS_AS(lift_logarithms(sys, Complex{0.5, 0.5}, {0, 0}), DomainError);
}

TEST_CASE("branch shifts move windings but keep their sum zero") {
    const auto sys = solve_periodic(hyperbolic_b0(), Sign::Plus);
    const auto base = lift_logarithms(sys, {0.0, 0.0}, {0, 0});
    const auto shifted = lift_logarithms(sys, {0.0, 0.0}, {1, -1});
    CHECK(base.l_hat + base.m_hat + base.n_hat == 0);
    CHECK(shifted.l_hat + shifted.m_hat + shifted.n_hat == 0);
    CHECK((shifted.l_hat != base.l_hat || shifted.m_hat != base.m_hat));
}

TEST_CASE("hyperbolic lift has zero windings") {
    const auto lift = hyperbolic_lift();
    CHECK(lift.l_hat == 0);
    CHECK(lift.m_hat == 0);
    CHECK(lift.n_hat == 0);
    CHECK(std::abs(lift.V[1] - Complex{0.0, kPi / 3.0}) < 1e-14);
}

TEST_CASE("worked LR example lift matches its printed six digits") {
    const auto lift = example_lr_lift();
    CHECK(std::abs(lift.A[0] - Complex{-0.0253997, 34.3024}) < 2e-4);
    CHECK(std::abs(lift.B[0] - Complex{-2.58581, -0.229299}) < 1e-10);
    CHECK(std::abs(lift.C[0] - Complex{5.33887, -2.45979}) < 2e-5);
    CHECK(std::abs(lift.theta_v - (lift.A[0] + lift.B[0] + lift.C[0])) < 1e-13);
    CHECK(lift.exp_residual < 1e-10);
    CHECK(lift.l_hat == 5);
    CHECK(lift.m_hat == -5);
    CHECK(lift.n_hat == 0);
    // U1 = 2 pi i - A1 reproduces the single-sum figure parameter
    const Complex U1 = kTwoPi * kI - lift.A[1];
    CHECK(std::abs(U1 - Complex{-2.58581, 6.05389}) < 1e-5);
}

TEST_CASE("LLR example refines to an exact periodic triple") {
    const auto lift = example_llr_lift();
    CHECK(lift.word == "LLR");
    CHECK(lift.l_hat == 3);
    CHECK(lift.m_hat == 0);
    CHECK(lift.n_hat == -3);
    const WeightTriple t0{std::exp(lift.A[0]), std::exp(lift.B[0]), std::exp(lift.C[0])};
    CHECK(periodicity_residual(t0, "LLR") < 1e-12);
    CHECK(std::abs(lift.A[0] - Complex{-0.0223073, 3.93489}) < 1e-4);
}

TEST_CASE("json round trip") {
    const auto sys = solve_periodic({0.7, 0.4}, Sign::Minus);
    const auto& t0 = sys.triples[0];
    const auto lift =
        lift_logarithms(sys, std::log(t0.a) + std::log(t0.b) + std::log(t0.c), {2, 0});
    const std::string text = to_json(sys, lift);
    const auto [sys2, lift2] = from_json(text);
    CHECK(sys2.sign_branch == sys.sign_branch);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(sys2.triples[k].a == sys.triples[k].a);
        CHECK(sys2.triples[k].b == sys.triples[k].b);
        CHECK(sys2.triples[k].c == sys.triples[k].c);
        CHECK(lift2.A[k] == lift.A[k]);
        CHECK(lift2.V[k] == lift.V[k]);
    }
    CHECK(lift2.l_hat == lift.l_hat);
    CHECK(lift2.theta_v == lift.theta_v);
}
