#include "rmx/laplace.hpp"

#include "rmx/errors.hpp"

namespace rmx {

namespace {

// Gamma(mu) for positive integer or half-integer mu, as an exact value.
SymbolicValue gamma_factor(const BigRational& mu) {
    if (mu.is_integer()) return SymbolicValue(factorial(static_cast<unsigned long>(mu.to_long() - 1)));
    BigRational k = mu - BigRational(1, 2);
    if (!k.is_integer())
        fail(errc::unsupported_inversion, "only integer and half-integer exponents invert");
    long kl = k.to_long();
    BigRational r = factorial(static_cast<unsigned long>(2 * kl)) /
                    (BigRational(4).pow(kl) * factorial(static_cast<unsigned long>(kl)));
    return SymbolicValue(r) * SymbolicValue::pi_pow_half(1);
}

}  // namespace

PiecewisePuiseux invert_term(const SymbolicValue& coef, long sPowerHalf, const BigRational& rate,
                             bool erfPresent, const BigRational& gamma) {
    BigRational mu = gamma - BigRational(sPowerHalf, 2);
    if (mu.sign() <= 0)
        fail(errc::nonpositive_exponent, "net transform exponent must be positive");
    if (!(mu * 2).is_integer())
        fail(errc::unsupported_inversion, "only integer and half-integer exponents invert");

    PiecewisePuiseux out;
    if (!erfPresent) {
        long mm = (mu * 2 - 2).to_long();
        out.add_term(coef / gamma_factor(mu), rate, mm);
        return out;
    }

    if (mu.is_integer())
        fail(errc::unsupported_inversion,
             "error-function terms need a half-integer net exponent");
    long M = (mu * 2 - 3).to_long() / 2;  // mu = M + 3/2, M = -1 means bare window

    out.add_window(coef / gamma_factor(mu), rate, (mu * 2 - 2).to_long(),
                   rate + BigRational(1, 2));
    if (M < 0) return out;

    // Piece beyond the half-unit window: a polynomial in x = tau - rate,
    // re-expanded at the cut so the stored keys stay step terms.
    BigRational cut = rate + BigRational(1, 2);
    for (long r = 0; r <= M; ++r) {
        BigRational rat = BigRational(2) * binomial(M, r) /
                          (factorial(static_cast<unsigned long>(M)) * BigRational(2 * r + 1));
        if (r % 2) rat = -rat;
        SymbolicValue pc = coef * SymbolicValue(rat) * SymbolicValue::pi_pow_half(-1) *
                           SymbolicValue::two_pow_half(static_cast<int>(-2 * r - 1));
        long xp = M - r;
        for (long j = 0; j <= xp; ++j) {
            SymbolicValue sc = pc * SymbolicValue(binomial(xp, j) * BigRational(1, 2).pow(xp - j));
            out.add_term(sc, cut, 2 * j);
        }
    }
    return out;
}

BigRational conductance_gamma(const EnsembleParams& params) {
    return (params.aTilde + 1) * BigRational(params.N) +
           BigRational(params.beta * params.N * (params.N - 1), 2);
}

ConductanceDensity conductance_density(const EnsembleParams& params) {
    params.validate();
    ErfExpoSum q = q_laguerre(params);
    BigRational gamma = conductance_gamma(params);

    PiecewisePuiseux raw;
    for (const auto& t : q.terms()) {
        bool erfP = !t.erfs.empty();
        if (erfP && (t.erfs.size() != 1 || t.erfs[0].q != 1 || t.erfs[0].p != 1))
            fail(errc::unsupported_inversion, "unexpected error-function structure");
        raw += invert_term(t.coef, t.m, t.rate, erfP, gamma);
    }

    PiecewisePuiseux pdf = raw.rescaled(BigRational(params.beta, 2));
    pdf.set_support_hi(params.N);
    for (const auto& b : pdf.breakpoints())
        if (!b.is_integer() || b.sign() < 0 || b > params.N)
            fail(errc::template_violation, "inverse transform breakpoints must be integers");

    SymbolicValue mass = pdf.moment(0);
    pdf *= SymbolicValue(1) / mass;
    return ConductanceDensity{std::move(pdf), std::move(mass), std::move(gamma)};
}

}  // namespace rmx
