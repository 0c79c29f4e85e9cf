#pragma once

#include "rmx/puiseux.hpp"
#include "rmx/symbolic.hpp"
#include "rmx/unipoly.hpp"

namespace rmx {

// Bipartite system dimensions: subsystem A of dimension N, subsystem B of
// dimension n >= N, rectangularity a = n - N.
struct BipartiteDims {
    long N = 1;
    long n = 1;

    long a() const { return n - N; }
    void validate() const {
        if (N < 1 || n < N) fail(errc::domain_error, "need n >= N >= 1");
    }
};

// Coefficients c_l of the eigenvalue-free probability e^(-Ns) sum c_l s^l of
// the complex Wishart ensemble; c_0 = 1, degree N*a.
struct GapPolynomial {
    UniPoly coefficients;
};

GapPolynomial gap_poly_wishart(const BipartiteDims& dims);

// Smallest-eigenvalue density of the fixed-trace (Hilbert-Schmidt) ensemble,
// supported on [0, 1/N]. Requires N >= 2.
PiecewisePuiseux smallest_eig_pdf_hs(const BipartiteDims& dims);

// One-point eigenvalue density of the Hilbert-Schmidt ensemble on (0,1),
// normalized to integrate to N. Requires N >= 2.
PiecewisePuiseux density_hs(const BipartiteDims& dims);

enum class PolygammaKind { digamma, trigamma };

// Exact polygamma values at positive integer and half-integer arguments,
// with the Euler constant carried symbolically.
SymbolicValue polygamma_exact(PolygammaKind kind, const BigRational& arg);

enum class Measure { HS, BH };

struct EntanglementMeans {
    SymbolicValue meanVN;
    SymbolicValue meanPurity;
    // The printed closed form can leave [1/N, 1] for small n; callers decide
    // what to do with such values.
    bool purityPlausible = true;
};

EntanglementMeans entanglement_means(Measure measure, const BipartiteDims& dims);

SymbolicValue var_vn_bh(const BipartiteDims& dims);

struct DistanceFidelity {
    SymbolicValue meanDistSq;
    SymbolicValue meanSqrtFid;
    SymbolicValue meanFid;
};

// Mean squared Hilbert-Schmidt distance, mean square-root fidelity and mean
// fidelity between two independent density matrices with a shared subsystem
// dimension N. The first two must come out rational; the mean fidelity keeps
// an exact pi^2 contribution.
DistanceFidelity distance_and_fidelity(const BipartiteDims& dims1, const BipartiteDims& dims2);

}  // namespace rmx
