#pragma once

#include "rmx/puiseux.hpp"
#include "rmx/recursion.hpp"
#include "rmx/symbolic.hpp"

namespace rmx {

// Inverse transform of coef * s^(sPowerHalf/2) * e^(-rate*s) * erf(sqrt(s/2))^{0,1}
// divided by s^gamma, as a function of the raw transform variable. Only
// integer and half-integer net exponents are supported; the erf branch
// requires a half-integer net exponent.
PiecewisePuiseux invert_term(const SymbolicValue& coef, long sPowerHalf, const BigRational& rate,
                             bool erfPresent, const BigRational& gamma);

// Total s-exponent of the transform pair for the given ensemble.
BigRational conductance_gamma(const EnsembleParams& params);

struct ConductanceDensity {
    PiecewisePuiseux pdf;  // normalized density of the conductance on (0, N)
    SymbolicValue mass;    // raw inverse-transform mass before normalization
    BigRational gammaExp;
};

ConductanceDensity conductance_density(const EnsembleParams& params);

inline PiecewisePuiseux conductance_pdf(const EnsembleParams& params) {
    return conductance_density(params).pdf;
}

}  // namespace rmx
