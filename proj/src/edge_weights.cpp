#include "qtrace/edge_weights.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace qtrace::weights {

namespace {

void require_off(Complex v, const char* who) {
    if (v == Complex(0.0, 0.0)) throw DomainError(std::string(who) + ": weight is 0");
    if (v == Complex(-1.0, 0.0)) throw DomainError(std::string(who) + ": weight is -1");
}

double rel_diff(Complex x, Complex y) {
    double scale = std::max({std::abs(x), std::abs(y), 1.0});
    return std::abs(x - y) / scale;
}

double triple_rel_diff(const WeightTriple& x, const WeightTriple& y) {
    return std::max({rel_diff(x.a, y.a), rel_diff(x.b, y.b), rel_diff(x.c, y.c)});
}

long round_winding(Complex delta, const char* who) {
    Complex w = delta / (kTwoPi * kI);
    double r = std::round(w.real());
    if (std::abs(w - Complex(r, 0.0)) >= 1e-6)
        throw ResidualFailure(std::string(who) + ": winding defect is not an integer");
    return static_cast<long>(r);
}

} // namespace

WeightTriple evolve_L(const WeightTriple& t) {
    require_off(t.b, "evolve_L");
    const Complex one_b = 1.0 + t.b;
    return {1.0 / t.b, one_b * one_b * t.a, t.b * t.b * t.c / (one_b * one_b)};
}

WeightTriple evolve_R(const WeightTriple& t) {
    require_off(t.c, "evolve_R");
    const Complex one_c = 1.0 + t.c;
    return {1.0 / t.c, one_c * one_c * t.b, t.c * t.c * t.a / (one_c * one_c)};
}

WeightTriple evolve_word(const WeightTriple& t, const std::string& word) {
    WeightTriple cur = t;
    for (char ch : word) {
        if (ch == 'L' || ch == 'l')
            cur = evolve_L(cur);
        else if (ch == 'R' || ch == 'r')
            cur = evolve_R(cur);
        else
            throw DomainError("evolve_word: word must use letters L and R");
    }
    return cur;
}

PeriodicWeightSystem solve_periodic(Complex b0, Sign sign) {
    if (b0 == Complex(0.0, 0.0) || b0 == Complex(-1.0, 0.0))
        throw DomainError("solve_periodic: b0 must avoid {0, -1}");

    // Periodicity reduces to (a0+1)^2 (1+b0)^2 = a0 b0; quadratic in a0
    // with discriminant 4*(-b0^3 - 7/4 b0^2 - b0) and root product 1.
    const Complex disc = -b0 * b0 * b0 - 1.75 * b0 * b0 - b0;
    const Complex root = std::sqrt(disc); // principal branch
    const Complex one_b = 1.0 + b0;
    const Complex num = -1.0 - 1.5 * b0 - b0 * b0 + (sign == Sign::Plus ? root : -root);
    const Complex a0 = num / (one_b * one_b);
    const Complex c0 = one_b * one_b / (a0 * b0 * b0);

    PeriodicWeightSystem sys;
    sys.sign_branch = sign;
    sys.triples[0] = {a0, b0, c0};
    sys.triples[1] = evolve_L(sys.triples[0]);
    sys.triples[2] = evolve_R(sys.triples[1]);
    sys.residual = triple_rel_diff(sys.triples[2], sys.triples[0]);
    if (sys.residual >= 1e-8)
        throw ResidualFailure("solve_periodic: closed form fails the recursion check");
    return sys;
}

LogLift lift_logarithms(const PeriodicWeightSystem& sys, Complex theta_v,
                        std::array<long, 2> base_branches) {
    const auto& t0 = sys.triples[0];
    const auto& t1 = sys.triples[1];
    const auto& t2 = sys.triples[2];
    if (rel_diff(std::exp(theta_v), t0.a * t0.b * t0.c) >= 1e-8)
        throw DomainError("lift_logarithms: e^{theta_v} != a0 b0 c0");

    LogLift lift;
    lift.theta_v = theta_v;
    lift.A[0] = std::log(t0.a) + kTwoPi * kI * static_cast<double>(base_branches[0]);
    lift.B[0] = std::log(t0.b) + kTwoPi * kI * static_cast<double>(base_branches[1]);
    lift.C[0] = theta_v - lift.A[0] - lift.B[0];
    lift.V[0] = std::log(1.0 + 1.0 / t0.a);
    lift.V[1] = std::log(1.0 + 1.0 / t1.a);
    lift.V[2] = std::log(1.0 + 1.0 / t2.a);

    lift.A[1] = -lift.B[0];
    lift.B[1] = 2.0 * lift.V[1] + lift.A[0];
    lift.C[1] = -2.0 * lift.V[1] + 2.0 * lift.B[0] + lift.C[0];
    lift.A[2] = -lift.C[1];
    lift.B[2] = 2.0 * lift.V[2] + lift.B[1];
    lift.C[2] = -2.0 * lift.V[2] + 2.0 * lift.C[1] + lift.A[1];

    lift.l_hat = round_winding(lift.A[0] - lift.A[2], "lift_logarithms");
    lift.m_hat = round_winding(lift.B[0] - lift.B[2], "lift_logarithms");
    lift.n_hat = round_winding(lift.C[0] - lift.C[2], "lift_logarithms");
    if (lift.l_hat + lift.m_hat + lift.n_hat != 0)
        throw ResidualFailure("lift_logarithms: winding integers do not sum to zero");

    const std::array<const WeightTriple*, 3> ts{&t0, &t1, &t2};
    double res = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        res = std::max(res, rel_diff(std::exp(lift.A[k]), ts[k]->a));
        res = std::max(res, rel_diff(std::exp(lift.B[k]), ts[k]->b));
        res = std::max(res, rel_diff(std::exp(lift.C[k]), ts[k]->c));
        res = std::max(res, rel_diff(std::exp(lift.V[k]), 1.0 + 1.0 / ts[k]->a));
    }
    lift.exp_residual = res;
    if (res >= 1e-10)
        throw ResidualFailure("lift_logarithms: exponential residual too large");
    return lift;
}

WordLift lift_word(const WeightTriple& t0, const std::string& word,
                   Complex A0, Complex B0, Complex C0) {
    WordLift lift;
    lift.word = word;
    lift.A = {A0};
    lift.B = {B0};
    lift.C = {C0};
    lift.V = {Complex{0.0, 0.0}};

    WeightTriple cur = t0;
    for (char ch : word) {
        const bool isL = (ch == 'L' || ch == 'l');
        if (!isL && !(ch == 'R' || ch == 'r'))
            throw DomainError("lift_word: word must use letters L and R");
        cur = isL ? evolve_L(cur) : evolve_R(cur);
        const Complex Vk = std::log(1.0 + 1.0 / cur.a);
        const Complex Ap = lift.A.back(), Bp = lift.B.back(), Cp = lift.C.back();
        if (isL) {
            lift.A.push_back(-Bp);
            lift.B.push_back(2.0 * Vk + Ap);
            lift.C.push_back(-2.0 * Vk + 2.0 * Bp + Cp);
        } else {
            lift.A.push_back(-Cp);
            lift.B.push_back(2.0 * Vk + Bp);
            lift.C.push_back(-2.0 * Vk + 2.0 * Cp + Ap);
        }
        lift.V.push_back(Vk);
    }
    const std::size_t k = word.size();
    lift.l_hat = round_winding(lift.A[0] - lift.A[k], "lift_word");
    lift.m_hat = round_winding(lift.B[0] - lift.B[k], "lift_word");
    lift.n_hat = round_winding(lift.C[0] - lift.C[k], "lift_word");
    return lift;
}

double periodicity_residual(const WeightTriple& t, const std::string& word) {
    return triple_rel_diff(evolve_word(t, word), t);
}

WeightTriple refine_periodic(const WeightTriple& seed, const std::string& word,
                             double tol, int max_iter) {
    // The fixed points form a curve, so the complex Jacobian of
    // F(t) = word(t) - t is rank-deficient; a least-squares Newton step
    // still converges to the nearest curve point from a good seed.
    auto F = [&](const std::array<Complex, 3>& v) {
        WeightTriple t{v[0], v[1], v[2]};
        WeightTriple w = evolve_word(t, word);
        return std::array<Complex, 3>{w.a - v[0], w.b - v[1], w.c - v[2]};
    };
    std::array<Complex, 3> x{seed.a, seed.b, seed.c};
    for (int it = 0; it < max_iter; ++it) {
        auto r = F(x);
        double rn = std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
        if (rn < tol) return {x[0], x[1], x[2]};

        // forward-difference complex Jacobian (the map is holomorphic)
        std::array<std::array<Complex, 3>, 3> J{};
        for (std::size_t c = 0; c < 3; ++c) {
            const double h = 1e-7 * std::max(1.0, std::abs(x[c]));
            auto xp = x;
            xp[c] += h;
            auto rp = F(xp);
            for (std::size_t rrow = 0; rrow < 3; ++rrow) J[rrow][c] = (rp[rrow] - r[rrow]) / h;
        }
        // normal equations with Tikhonov floor against the rank deficiency
        std::array<std::array<Complex, 3>, 3> M{};
        std::array<Complex, 3> g{};
        double scale = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) scale = std::max(scale, std::abs(J[i][j]));
        const double lambda = 1e-12 * scale * scale + 1e-300;
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                Complex s = 0.0;
                for (std::size_t kk = 0; kk < 3; ++kk) s += std::conj(J[kk][i]) * J[kk][j];
                M[i][j] = s;
            }
            M[i][i] += lambda;
            Complex s = 0.0;
            for (std::size_t kk = 0; kk < 3; ++kk) s += std::conj(J[kk][i]) * (-r[kk]);
            g[i] = s;
        }
        // 3x3 Gaussian elimination with partial pivoting
        for (std::size_t col = 0; col < 3; ++col) {
            std::size_t piv = col;
            for (std::size_t rrow = col + 1; rrow < 3; ++rrow)
                if (std::abs(M[rrow][col]) > std::abs(M[piv][col])) piv = rrow;
            std::swap(M[col], M[piv]);
            std::swap(g[col], g[piv]);
            for (std::size_t rrow = col + 1; rrow < 3; ++rrow) {
                Complex f = M[rrow][col] / M[col][col];
                for (std::size_t j = col; j < 3; ++j) M[rrow][j] -= f * M[col][j];
                g[rrow] -= f * g[col];
            }
        }
        std::array<Complex, 3> dx{};
        for (int rrow = 2; rrow >= 0; --rrow) {
            Complex s = g[static_cast<std::size_t>(rrow)];
            for (std::size_t j = static_cast<std::size_t>(rrow) + 1; j < 3; ++j)
                s -= M[static_cast<std::size_t>(rrow)][j] * dx[j];
            dx[static_cast<std::size_t>(rrow)] = s / M[static_cast<std::size_t>(rrow)][static_cast<std::size_t>(rrow)];
        }
        for (std::size_t i = 0; i < 3; ++i) x[i] += dx[i];
    }
    throw ResidualFailure("refine_periodic: Newton refinement did not converge");
}

// --- presets ---------------------------------------------------------------

Complex hyperbolic_b0() { return std::polar(1.0, kTwoPi / 3.0); }

LogLift hyperbolic_lift() {
    return lift_logarithms(solve_periodic(hyperbolic_b0(), Sign::Plus),
                           Complex{0.0, 0.0}, {0, 0});
}

namespace {
// Worked LR example of the term-cloud figures (printed to six digits):
// A0 ~ -0.0253997 + 34.3024 i, B0 ~ -2.58581 - 0.229299 i,
// C0 ~ 5.33887 - 2.45979 i.  The lift is rebuilt exactly from b0 = e^{B0}
// so that all residual invariants hold at machine precision.
constexpr Complex kExampleLrB0Log{-2.58581, -0.229299};
} // namespace

LogLift example_lr_lift() {
    const Complex b0 = std::exp(kExampleLrB0Log);
    PeriodicWeightSystem sys = solve_periodic(b0, Sign::Plus);
    // match the printed branches: A0 on branch +5, B0 principal
    Complex A0 = std::log(sys.triples[0].a) + kTwoPi * kI * 5.0;
    Complex B0 = std::log(sys.triples[0].b);
    Complex C0 = std::log(sys.triples[0].c);
    return lift_logarithms(sys, A0 + B0 + C0, {5, 0});
}

WordLift example_llr_lift() {
    // Seed printed to six digits; refined to an exact LLR-periodic triple.
    const Complex A0{-0.0223073, 3.93489};
    const Complex B0{0.790951, 2.38093};
    const Complex C0{-0.42207, 0.752766};
    const WeightTriple seed{std::exp(A0), std::exp(B0), std::exp(C0)};
    const WeightTriple t0 = refine_periodic(seed, "LLR");
    auto rebranch = [](Complex printed, Complex w) {
        double k = std::round((printed - std::log(w)).imag() / kTwoPi);
        return std::log(w) + kTwoPi * kI * k;
    };
    return lift_word(t0, "LLR", rebranch(A0, t0.a), rebranch(B0, t0.b), rebranch(C0, t0.c));
}

// --- serialization -----------------------------------------------------------

namespace {
using nlohmann::json;

json cplx(Complex z) { return json::array({z.real(), z.imag()}); }

Complex cplx_of(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json triple(const WeightTriple& t) {
    return json::array({cplx(t.a), cplx(t.b), cplx(t.c)});
}
} // namespace

std::string to_json(const PeriodicWeightSystem& sys, const LogLift& lift) {
    json j;
    j["system"]["sign"] = sys.sign_branch == Sign::Plus ? "+" : "-";
    j["system"]["residual"] = sys.residual;
    j["system"]["triples"] =
        json::array({triple(sys.triples[0]), triple(sys.triples[1]), triple(sys.triples[2])});
    json& l = j["lift"];
    for (std::size_t k = 0; k < 3; ++k) {
        l["A"].push_back(cplx(lift.A[k]));
        l["B"].push_back(cplx(lift.B[k]));
        l["C"].push_back(cplx(lift.C[k]));
        l["V"].push_back(cplx(lift.V[k]));
    }
    l["theta_v"] = cplx(lift.theta_v);
    l["l_hat"] = lift.l_hat;
    l["m_hat"] = lift.m_hat;
    l["n_hat"] = lift.n_hat;
    l["exp_residual"] = lift.exp_residual;
    return j.dump(2);
}

std::pair<PeriodicWeightSystem, LogLift> from_json(const std::string& text) {
    json j = json::parse(text);
    PeriodicWeightSystem sys;
    sys.sign_branch = j.at("system").at("sign").get<std::string>() == "+" ? Sign::Plus : Sign::Minus;
    sys.residual = j.at("system").at("residual").get<double>();
    for (std::size_t k = 0; k < 3; ++k) {
        const json& t = j.at("system").at("triples").at(k);
        sys.triples[k] = {cplx_of(t.at(0)), cplx_of(t.at(1)), cplx_of(t.at(2))};
    }
    LogLift lift;
    const json& l = j.at("lift");
    for (std::size_t k = 0; k < 3; ++k) {
        lift.A[k] = cplx_of(l.at("A").at(k));
        lift.B[k] = cplx_of(l.at("B").at(k));
        lift.C[k] = cplx_of(l.at("C").at(k));
        lift.V[k] = cplx_of(l.at("V").at(k));
    }
    lift.theta_v = cplx_of(l.at("theta_v"));
    lift.l_hat = l.at("l_hat").get<long>();
    lift.m_hat = l.at("m_hat").get<long>();
    lift.n_hat = l.at("n_hat").get<long>();
    lift.exp_residual = l.at("exp_residual").get<double>();
    return {sys, lift};
}

} // namespace qtrace::weights
