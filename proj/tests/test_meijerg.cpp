#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rmx/meijerg.hpp"
#include "rmx/quadrature.hpp"

#include <cmath>

using namespace rmx;

namespace {

// Independent numeric oracles for the Gaussian-product determinant entries,
// obtained by writing the defining Mellin-Barnes integral as a multiplicative
// convolution of Beta kernels with t*1(0<t<1):
//   entry_m(j,k) = Gamma(j+k-1/2)^m * (beta * ... * beta * h)(1),
//   beta(x) = x^(1+k) (1+x)^(1/2-j-k).
double entry1_numeric(long j, long k) {
    auto f = [&](double sig) {
        return 2.0 * std::pow(sig, 2.0 * j - 2.0) *
               std::pow(1.0 + sig * sig, 0.5 - j - k);
    };
    return std::tgamma(j + k - 0.5) * integrate_adaptive(f, 0.0, 1.0, 1e-13);
}

double entry2_numeric(long j, long k) {
    auto tail = [&](double s) {
        // int_s^inf x^(k-1) (1+x)^(1/2-j-k) dx; u = (1+s)/(1+x), u = v^2
        // leaves a polynomial integrand
        auto f = [&](double v) {
            return 2.0 * std::pow(1.0 + s - v * v, k - 1.0) * std::pow(v, 2.0 * j - 2.0);
        };
        return std::pow(1.0 + s, 1.5 - j - k) * integrate_adaptive(f, 0.0, 1.0, 1e-13);
    };
    auto outer = [&](double s) {
        return std::pow(s, j - 1.5) * std::pow(1.0 + s, 0.5 - j - k) * tail(s);
    };
    auto low = [&](double sig) { return 2.0 * sig * outer(sig * sig); };
    auto high = [&](double om) { return 2.0 * outer(1.0 / (om * om)) / (om * om * om); };
    double g = std::tgamma(j + k - 0.5);
    return g * g *
           (integrate_adaptive(low, 0.0, 1.0, 1e-12) +
            integrate_adaptive(high, 0.0, 1.0, 1e-12));
}

// Spec in the truncated-orthogonal entry family with explicit offsets.
MeijerSpec family_spec(long j, long k, std::vector<long> ell, std::vector<long> gap) {
    MeijerSpec s;
    long mf = static_cast<long>(ell.size());
    s.m = static_cast<int>(mf) + 1;
    s.n = static_cast<int>(mf);
    BigRational c = BigRational(3, 2) - BigRational(j);
    s.upper.assign(static_cast<size_t>(mf), c);
    s.upper.push_back(BigRational(1));
    for (long e : ell) s.upper.push_back(BigRational(e + k));
    s.lower.push_back(BigRational(0));
    for (long i = 0; i < mf; ++i) s.lower.push_back(BigRational(k));
    for (long g : gap) s.lower.push_back(c - BigRational(g));
    return s;
}

SymbolicValue pi_sq_times(const BigRational& r) {
    return SymbolicValue::pi_pow_half(4) * SymbolicValue(r);
}

}  // namespace

TEST_CASE("recurrence step structure") {
    ProductSpec ps{1, 2, {2}};
    MeijerSpec spec = truncation_entry_spec(ps, 1, 1);
    RecurrenceSplit split = g_recurrence_step(spec);
    CHECK(split.divisor == BigRational(3, 2));
    CHECK(split.a.upper.back() == spec.upper.back() - BigRational(1));
    CHECK(split.b.lower.back() == spec.lower.back() + BigRational(1));
    CHECK(split.a.lower == spec.lower);
    CHECK(split.b.upper == spec.upper);
    for (size_t i = 0; i + 1 < spec.upper.size(); ++i)
        CHECK(split.a.upper[i] == spec.upper[i]);
    for (size_t i = 0; i + 1 < spec.lower.size(); ++i)
        CHECK(split.b.lower[i] == spec.lower[i]);

    MeijerSpec zero;
    zero.upper = {BigRational(1, 2), BigRational(1), BigRational(2)};
    zero.lower = {BigRational(0), BigRational(1), BigRational(1)};
    zero.m = 2;
    zero.n = 1;
    CHECK_THROWS_AS(g_recurrence_step(zero), error);

    MeijerSpec square;
    square.upper = {BigRational(1, 2)};
    square.lower = {BigRational(0), BigRational(1)};
    square.m = 1;
    square.n = 1;
    CHECK_THROWS_AS(g_recurrence_step(square), error);
}

TEST_CASE("boundary evaluations") {
    // untouched upper tail, all lower offsets 1, j = 1: product of
    // Gamma(1/2)/Gamma(3/2) = 2 per factor
    for (long mf : {1L, 2L, 3L}) {
        CAPTURE(mf);
        std::vector<long> ell(static_cast<size_t>(mf), 0);
        std::vector<long> gap(static_cast<size_t>(mf), 1);
        SymbolicValue v = g_boundary_eval(family_spec(1, 1, ell, gap));
        CHECK(symbolic_equal(v, SymbolicValue(BigRational(2).pow(mf))));
        // the value does not depend on k
        CHECK(symbolic_equal(g_boundary_eval(family_spec(1, 3, ell, gap)), v));
    }

    // untouched lower tail vanishes
    CHECK(g_boundary_eval(family_spec(2, 1, {1, 0}, {0, 0})).is_zero());
    CHECK(g_boundary_eval(family_spec(1, 2, {3}, {0})).is_zero());

    // mixed zero and nonzero lower offsets: only nonzero ones contribute
    SymbolicValue mixed = g_boundary_eval(family_spec(1, 1, {0, 0}, {0, 2}));
    CHECK(symbolic_equal(mixed, SymbolicValue(BigRational(4, 3))));

    CHECK_THROWS_AS(g_boundary_eval(family_spec(1, 1, {1, 0}, {1, 1})), error);
    CHECK_THROWS_AS(g_boundary_eval(family_spec(1, 1, {0, 0}, {0, 0})), error);
    MeijerSpec noOne = family_spec(1, 2, {1}, {1});
    noOne.upper[1] = BigRational(3);  // destroy the literal 1
    CHECK_THROWS_AS(g_boundary_eval(noOne), error);
}

TEST_CASE("recurrence reduction against a hand-expanded tree") {
    // m = 2, j = k = 1: every divisor is ell + gap - 1/2
    CHECK(symbolic_equal(g_evaluate(family_spec(1, 1, {1, 0}, {1, 0})),
                         SymbolicValue(BigRational(4, 3))));
    CHECK(symbolic_equal(g_evaluate(family_spec(1, 1, {1, 0}, {1, 1})),
                         SymbolicValue(BigRational(32, 9))));
    CHECK(symbolic_equal(g_evaluate(family_spec(1, 1, {1, 1}, {1, 0})),
                         SymbolicValue(BigRational(8, 9))));
    CHECK(symbolic_equal(g_evaluate(family_spec(1, 1, {1, 1}, {1, 1})),
                         SymbolicValue(BigRational(80, 27))));

    // the one-factor chain embeds into the two-factor one when the second
    // factor's offsets vanish (a cancelling parameter pair)
    for (long l = 1; l <= 2; ++l)
        for (long g = 1; g <= 2; ++g) {
            CAPTURE(l);
            CAPTURE(g);
            CHECK(symbolic_equal(g_evaluate(family_spec(1, 1, {l}, {g})),
                                 g_evaluate(family_spec(1, 1, {l, 0}, {g, 0}))));
            CHECK(symbolic_equal(g_evaluate(family_spec(2, 2, {l}, {g})),
                                 g_evaluate(family_spec(2, 2, {l, 0}, {g, 0}))));
        }

    CHECK_THROWS_AS(g_evaluate(MeijerSpec{{BigRational(1), BigRational(2)},
                                          {BigRational(0), BigRational(1)},
                                          1,
                                          1}),
                    error);
}

TEST_CASE("one-factor Gaussian entries") {
    // frozen from the Beta reduction: entries are sqrt(2 pi) times a rational
    auto want = [](const BigRational& r) {
        return SymbolicValue::two_pow_half(1) * SymbolicValue::pi_pow_half(1) *
               SymbolicValue(r);
    };
    CHECK(symbolic_equal(ginibre_entry(1, 1, 1), want(BigRational(1, 2))));
    CHECK(symbolic_equal(ginibre_entry(1, 1, 2), want(BigRational(5, 8))));
    CHECK(symbolic_equal(ginibre_entry(1, 2, 1), want(BigRational(1, 8))));
    CHECK(symbolic_equal(ginibre_entry(1, 2, 2), want(BigRational(7, 32))));

    for (long j = 1; j <= 4; ++j)
        for (long k = 1; k <= 4; ++k) {
            CAPTURE(j);
            CAPTURE(k);
            SymbolicValue e = ginibre_entry(1, j, k);
            CHECK(e.to_double() == doctest::Approx(entry1_numeric(j, k)).epsilon(1e-11));
            SymbolicValue content = e * SymbolicValue::two_pow_half(-1) *
                                    SymbolicValue::pi_pow_half(-1);
            CHECK_NOTHROW(content.as_rational());
        }
}

TEST_CASE("two-factor closed form") {
    CHECK(symbolic_equal(g33_closed_form(1, 1), pi_sq_times(BigRational(1, 4))));

    for (long j = 1; j <= 2; ++j)
        for (long k = 1; k <= 2; ++k) {
            CAPTURE(j);
            CAPTURE(k);
            double num = entry2_numeric(j, k);
            CHECK(g33_closed_form(j, k).to_double() ==
                  doctest::Approx(num).epsilon(5e-9));
            CHECK(symbolic_equal(ginibre_entry(2, j, k), g33_closed_form(j, k)));
        }

    for (long j = 1; j <= 4; ++j)
        for (long k = 1; k <= 4; ++k) {
            SymbolicValue content = g33_closed_form(j, k) * SymbolicValue::pi_pow_half(-4);
            CHECK_NOTHROW(content.as_rational());
            CHECK(content.as_rational().sign() > 0);
        }
}

TEST_CASE("all-real probability for truncated products") {
    CHECK(symbolic_equal(prob_all_real({2, 2, {2, 2}}),
                         SymbolicValue(BigRational(20, 27))));
    CHECK(symbolic_equal(prob_all_real({2, 2, {4, 4}}),
                         SymbolicValue(BigRational(97984, 128625))));
    CHECK(symbolic_equal(prob_all_real({2, 2, {4, 6}}),
                         SymbolicValue(BigRational(649984, 848925))));

    // hand-reduced one-factor case
    CHECK(symbolic_equal(prob_all_real({1, 2, {2}}), SymbolicValue(BigRational(2, 3))));

    // three factors stay exact and rational
    SymbolicValue p3 = prob_all_real({3, 2, {2, 2, 2}});
    BigRational r3 = p3.as_rational();
    CHECK(r3 > BigRational(0));
    CHECK(r3 < BigRational(1));

    // probability rises toward the Gaussian limit pi/4 as L grows
    double gauss = prob_all_real({2, 2, {}}).to_double();
    double prev = 0.0;
    for (long L : {2L, 4L, 6L, 8L}) {
        double p = prob_all_real({2, 2, {L, L}}).to_double();
        CHECK(p > prev);
        CHECK(p < gauss);
        prev = p;
    }

    // N = 4 truncated values exist and sit in (0,1)
    BigRational p24 = prob_all_real({2, 4, {2, 2}}).as_rational();
    CHECK(p24 > BigRational(0));
    CHECK(p24 < BigRational(1));
}

TEST_CASE("all-real probability for Gaussian products") {
    CHECK(symbolic_equal(prob_all_real({1, 2, {}}), SymbolicValue::two_pow_half(-1)));
    CHECK(symbolic_equal(prob_all_real({1, 4, {}}), SymbolicValue(BigRational(1, 8))));
    CHECK(symbolic_equal(prob_all_real({1, 6, {}}), SymbolicValue::two_pow_half(-15)));
    CHECK(symbolic_equal(prob_all_real({1, 8, {}}), SymbolicValue(BigRational(1, 16384))));

    CHECK(symbolic_equal(prob_all_real({2, 2, {}}),
                         SymbolicValue::pi_pow_half(2) * SymbolicValue(BigRational(1, 4))));

    SymbolicValue p24 = prob_all_real({2, 4, {}});
    SymbolicValue content = p24 * SymbolicValue::pi_pow_half(-4);
    CHECK_NOTHROW(content.as_rational());
    CHECK(p24.to_double() > 0.0);
    CHECK(p24.to_double() < prob_all_real({2, 2, {}}).to_double());

    for (int m : {1, 2})
        for (long N : {2L, 4L, 6L, 8L}) {
            CAPTURE(m);
            CAPTURE(N);
            double p = prob_all_real({m, N, {}}).to_double();
            CHECK(p > 0.0);
            CHECK(p <= 1.0);
        }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(prob_all_real({2, 2, {1, 2}}), error);
    CHECK_THROWS_AS(prob_all_real({3, 2, {}}), error);
    CHECK_THROWS_AS(prob_all_real({2, 3, {}}), error);
    CHECK_THROWS_AS(prob_all_real({2, 10, {}}), error);
    CHECK_THROWS_AS(prob_all_real({4, 2, {2, 2, 2, 2}}), error);
    CHECK_THROWS_AS(prob_all_real({1, 2, {2, 2}}), error);
    CHECK_THROWS_AS(prob_all_real({1, 2, {0}}), error);
    CHECK_THROWS_AS(g33_closed_form(0, 1), error);
    CHECK_THROWS_AS(ginibre_entry(3, 1, 1), error);

    try {
        prob_all_real({2, 2, {1, 2}});
    } catch (const error& e) {
        CHECK(e.code() == errc::odd_truncation);
    }
    try {
        prob_all_real({3, 2, {}});
    } catch (const error& e) {
        CHECK(e.code() == errc::out_of_range);
    }
}
