#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmx/laplace.hpp"
#include "rmx/quadrature.hpp"

#include <cmath>

using namespace rmx;

namespace {

PiecewisePuiseux golden_three_channel_polynomial() {
    // (3/8) [ t^5 - (t-1)^3 (40 - 10(t-1) + (t-1)^2) H(t-1)
    //             - (t-2)^3 (40 + 10(t-2) + (t-2)^2) H(t-2) ] on (0,3)
    PiecewisePuiseux g(BigRational(3));
    g.add_term(SymbolicValue(BigRational(3, 8)), BigRational(0), 10);
    g.add_term(SymbolicValue(BigRational(-15)), BigRational(1), 6);
    g.add_term(SymbolicValue(BigRational(15, 4)), BigRational(1), 8);
    g.add_term(SymbolicValue(BigRational(-3, 8)), BigRational(1), 10);
    g.add_term(SymbolicValue(BigRational(-15)), BigRational(2), 6);
    g.add_term(SymbolicValue(BigRational(-15, 4)), BigRational(2), 8);
    g.add_term(SymbolicValue(BigRational(-3, 8)), BigRational(2), 10);
    return g;
}

double golden_three_channel_polynomial_eval(double t) {
    double v = std::pow(t, 5);
    if (t > 1) v -= std::pow(t - 1, 3) * (40 - 10 * (t - 1) + (t - 1) * (t - 1));
    if (t > 2) v -= std::pow(t - 2, 3) * (40 + 10 * (t - 2) + (t - 2) * (t - 2));
    return (t > 0 && t < 3) ? 0.375 * v : 0.0;
}

PiecewisePuiseux golden_three_channel_hard_edge() {
    // (6/7) t^(7/2) on (0,1), then
    // (3/28) (35 t^3 - 175 t^2 + 273 t - 125 - 8 (t-2)^(5/2) (t+5) H(t-2)) on (1,3)
    PiecewisePuiseux g(BigRational(3));
    g.add_window(SymbolicValue(BigRational(6, 7)), BigRational(0), 7, BigRational(1));
    g.add_term(SymbolicValue(BigRational(6, 7)), BigRational(1), 0);
    g.add_term(SymbolicValue(BigRational(3)), BigRational(1), 2);
    g.add_term(SymbolicValue(BigRational(-15, 2)), BigRational(1), 4);
    g.add_term(SymbolicValue(BigRational(15, 4)), BigRational(1), 6);
    g.add_term(SymbolicValue(BigRational(-6)), BigRational(2), 5);
    g.add_term(SymbolicValue(BigRational(-6, 7)), BigRational(2), 7);
    return g;
}

double golden_three_channel_hard_edge_eval(double t) {
    if (t <= 0 || t >= 3) return 0.0;
    if (t < 1) return (6.0 / 7.0) * std::pow(t, 3.5);
    double v = 35 * t * t * t - 175 * t * t + 273 * t - 125;
    if (t > 2) v -= 8 * std::pow(t - 2, 2.5) * (t + 5);
    return (3.0 / 28.0) * v;
}

// integral_0^hi e^(-c t) pdf(t) dt, with a square-root substitution on the
// first panel to absorb a possible hard-edge singularity.
double forward_transform(const PiecewisePuiseux& pdf, double c) {
    auto brk = pdf.breakpoints();
    double total = 0.0;
    for (size_t i = 0; i + 1 < brk.size(); ++i) {
        double a = brk[i].to_double();
        double b = brk[i + 1].to_double();
        if (b <= a) continue;
        if (a == 0.0)
            total += integrate_adaptive(
                [&](double v) {
                    double t = v * v;
                    return 2.0 * v * std::exp(-c * t) * pdf.evaluate(t);
                },
                0.0, std::sqrt(b), 1e-13);
        else
            total += integrate_adaptive(
                [&](double t) { return std::exp(-c * t) * pdf.evaluate(t); }, a, b, 1e-13);
    }
    return total;
}

}  // namespace

TEST_CASE("power-rule inversion of plain terms") {
    // 1/s inverts to the unit step
    PiecewisePuiseux r = invert_term(SymbolicValue(1), 0, BigRational(0), false, BigRational(1));
    PiecewisePuiseux want;
    want.add_term(SymbolicValue(1), BigRational(0), 0);
    CHECK(r == want);

    // e^(-2s)/s^3 inverts to (tau-2)^2/2
    r = invert_term(SymbolicValue(1), 0, BigRational(2), false, BigRational(3));
    want = PiecewisePuiseux();
    want.add_term(SymbolicValue(BigRational(1, 2)), BigRational(2), 4);
    CHECK(r == want);

    // s^(1/2)/s^(5/2): net exponent 2, inverts to tau
    r = invert_term(SymbolicValue(1), 1, BigRational(0), false, BigRational(5, 2));
    want = PiecewisePuiseux();
    want.add_term(SymbolicValue(1), BigRational(0), 2);
    CHECK(r == want);

    // 1/s^(5/2) inverts to tau^(3/2)/Gamma(5/2), Gamma(5/2) = 3 sqrt(pi)/4
    r = invert_term(SymbolicValue(1), 0, BigRational(0), false, BigRational(5, 2));
    want = PiecewisePuiseux();
    want.add_term(SymbolicValue(BigRational(4, 3)) * SymbolicValue::pi_pow_half(-1),
                  BigRational(0), 3);
    CHECK(r == want);

    CHECK_THROWS_AS(invert_term(SymbolicValue(1), 2, BigRational(0), false, BigRational(1)),
                    error);
    CHECK_THROWS_AS(invert_term(SymbolicValue(1), 0, BigRational(0), false, BigRational(-1)),
                    error);
    CHECK_THROWS_AS(
        invert_term(SymbolicValue(1), 0, BigRational(0), false, BigRational(1, 3)), error);
}

TEST_CASE("error-function terms invert to windowed laws") {
    // erf(sqrt(s/2))/sqrt(s): bare window x^(-1/2)/sqrt(pi) on (0,1/2)
    PiecewisePuiseux r =
        invert_term(SymbolicValue(1), 0, BigRational(0), true, BigRational(1, 2));
    PiecewisePuiseux want;
    want.add_window(SymbolicValue::pi_pow_half(-1), BigRational(0), -1, BigRational(1, 2));
    CHECK(r == want);

    // erf(sqrt(s/2))/s^(3/2): window x^(1/2)/Gamma(3/2), constant sqrt(2/pi) beyond
    r = invert_term(SymbolicValue(1), 0, BigRational(0), true, BigRational(3, 2));
    want = PiecewisePuiseux();
    want.add_window(SymbolicValue(2) * SymbolicValue::pi_pow_half(-1), BigRational(0), 1,
                    BigRational(1, 2));
    want.add_term(SymbolicValue::two_pow_half(1) * SymbolicValue::pi_pow_half(-1),
                  BigRational(1, 2), 0);
    CHECK(r == want);

    // integer net exponent cannot carry an error function
    CHECK_THROWS_AS(invert_term(SymbolicValue(1), 0, BigRational(0), true, BigRational(2)),
                    error);

    // the inverse stays continuous across the window cut
    for (long twoMu : {3L, 5L, 7L, 9L}) {
        PiecewisePuiseux f = invert_term(SymbolicValue(1), 0, BigRational(0), true,
                                         BigRational(twoMu, 2));
        f.set_support_hi(BigRational(2));
        double left = f.evaluate(0.5 - 1e-9);
        double right = f.evaluate(0.5 + 1e-9);
        CHECK(std::abs(left - right) < 1e-6);
    }
}

TEST_CASE("single-channel conductance densities") {
    // beta = 2, N = 1: uniform on (0,1)
    ConductanceDensity c2 = conductance_density(EnsembleParams::from_channels(2, 1, 1));
    PiecewisePuiseux uniform(BigRational(1));
    uniform.add_term(SymbolicValue(1), BigRational(0), 0);
    CHECK(functionally_equal(c2.pdf, uniform));

    // beta = 1, N = 1: (1/2) t^(-1/2) on (0,1)
    ConductanceDensity c1 = conductance_density(EnsembleParams::from_channels(1, 1, 1));
    PiecewisePuiseux edge(BigRational(1));
    edge.add_term(SymbolicValue(BigRational(1, 2)), BigRational(0), -1);
    CHECK(functionally_equal(c1.pdf, edge));
    CHECK(c1.gammaExp == BigRational(1, 2));

    // beta = 4, N = 1: normalized and supported on (0,1)
    ConductanceDensity c4 = conductance_density(EnsembleParams::from_channels(4, 1, 1));
    CHECK(symbolic_equal(c4.pdf.moment(0), SymbolicValue(1)));
    CHECK(c4.pdf.evaluate(1.2) == 0.0);
}

TEST_CASE("three-channel polynomial golden density") {
    EnsembleParams p = EnsembleParams::from_channels(1, 3, 4);
    CHECK(p.aTilde == BigRational(0));
    ConductanceDensity c = conductance_density(p);
    PiecewisePuiseux golden = golden_three_channel_polynomial();

    CHECK(symbolic_equal(golden.moment(0), SymbolicValue(1)));
    CHECK(functionally_equal(c.pdf, golden));
    for (double t : {0.3, 0.97, 1.5, 2.2, 2.9})
        CHECK(std::abs(c.pdf.evaluate(t) - golden_three_channel_polynomial_eval(t)) < 1e-12);
}

TEST_CASE("three-channel hard-edge golden density") {
    EnsembleParams p = EnsembleParams::from_channels(1, 3, 3);
    CHECK(p.aTilde == BigRational(-1, 2));
    ConductanceDensity c = conductance_density(p);
    PiecewisePuiseux golden = golden_three_channel_hard_edge();

    CHECK(symbolic_equal(golden.moment(0), SymbolicValue(1)));
    CHECK(functionally_equal(c.pdf, golden));
    for (double t : {0.4, 0.99, 1.01, 1.7, 2.5, 2.97})
        CHECK(std::abs(c.pdf.evaluate(t) - golden_three_channel_hard_edge_eval(t)) < 1e-12);
}

TEST_CASE("inverse transforms reproduce the forward transforms") {
    struct Case {
        long beta, N, n;
    } cases[] = {{1, 3, 4}, {1, 3, 3}, {2, 2, 2}, {4, 2, 2}};
    const double spts[] = {0.37, 0.9, 1.6, 2.8, 4.1};
    for (const auto& cs : cases) {
        CAPTURE(cs.beta);
        CAPTURE(cs.N);
        CAPTURE(cs.n);
        EnsembleParams p = EnsembleParams::from_channels(cs.beta, cs.N, cs.n);
        ConductanceDensity c = conductance_density(p);
        ErfExpoSum q = q_laguerre(p);
        double mass = c.mass.to_double();
        for (double s : spts) {
            double lhs = forward_transform(c.pdf, s * cs.beta / 2.0) * mass *
                         std::pow(s, c.gammaExp.to_double());
            double rhs = q.eval(s);
            CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("normalized mass and integer breakpoints across ensembles") {
    struct Case {
        long beta, N, n;
    } cases[] = {{1, 2, 2}, {1, 2, 3}, {2, 3, 3}, {4, 2, 3}, {2, 2, 4}};
    for (const auto& cs : cases) {
        CAPTURE(cs.beta);
        CAPTURE(cs.N);
        EnsembleParams p = EnsembleParams::from_channels(cs.beta, cs.N, cs.n);
        ConductanceDensity c = conductance_density(p);
        CHECK(symbolic_equal(c.pdf.moment(0), SymbolicValue(1)));
        CHECK(c.pdf.support_hi() == BigRational(cs.N));
        for (const auto& b : c.pdf.breakpoints()) {
            CHECK(b.is_integer());
            CHECK(b.sign() >= 0);
            CHECK(b <= cs.N);
        }
        // a density: nonnegative on a grid
        for (int i = 1; i < 40; ++i) {
            double t = cs.N * i / 40.0;
            CHECK(c.pdf.evaluate(t) >= -1e-12);
        }
    }
}

TEST_CASE("gamma exponent formula") {
    CHECK(conductance_gamma(EnsembleParams::from_channels(1, 3, 4)) == BigRational(6));
    CHECK(conductance_gamma(EnsembleParams::from_channels(1, 3, 3)) == BigRational(9, 2));
    CHECK(conductance_gamma(EnsembleParams::from_channels(2, 2, 2)) == BigRational(4));
    CHECK(conductance_gamma(EnsembleParams::from_channels(1, 1, 1)) == BigRational(1, 2));
}
