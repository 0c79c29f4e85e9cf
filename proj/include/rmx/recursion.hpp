#pragma once

#include <vector>

#include "rmx/erfexpo.hpp"
#include "rmx/rational.hpp"

namespace rmx {

// Parameter bundle shared by the exact and Monte Carlo paths. The hard-edge
// exponent is aTilde = (beta/2)(n - N + 1) - 1; n is optional because the
// recursion itself only needs (beta, N, aTilde).
struct EnsembleParams {
    long N = 1;
    long beta = 2;
    BigRational aTilde;
    long n = -1;  // -1 when not derived from channel counts

    static EnsembleParams from_channels(long beta, long N, long n);
    static EnsembleParams from_atilde(long beta, long N, const BigRational& aTilde);

    void validate() const;
};

// State of one step of the differential-difference recurrence.
struct RecursionState {
    long p = 0;
    long nu = 1;
    long alpha = 0;
    BigRational lambda;
    BigRational lambda1;

    BigRational B() const {
        return BigRational(p - nu) *
               (lambda1 + BigRational(alpha + 1) + lambda * BigRational(nu - p - 1));
    }
    BigRational D() const {
        return BigRational(p) * (lambda * BigRational(nu - p) + BigRational(alpha + 1));
    }
};

// L_{p+1} from (L_p, L_{p-1}) at fixed (nu, alpha).
ErfExpoSum recurrence_step(const RecursionState& state, const ErfExpoSum& Lp,
                           const ErfExpoSum& Lpm1);

// The column (L_{0,nu} .. L_{nu,nu}) at a given auxiliary exponent alpha,
// built by running the scheme up from nu = 1.
std::vector<ErfExpoSum> laguerre_column(const EnsembleParams& params, long nu, long alpha);

// The full nested scheme: returns Q_N(s), unnormalized.
ErfExpoSum q_laguerre(const EnsembleParams& params);

// Independent oracle: direct expansion of the N-fold integral.
// Symbolic path: N <= 3 and integer aTilde <= 4.
ErfExpoSum q_bruteforce(const EnsembleParams& params);

// Numeric oracle at a single point, >= 10 significant digits.
double q_bruteforce_numeric(const EnsembleParams& params, double s);

struct OdeSystem {
    std::vector<std::vector<BigRational>> A;
    std::vector<std::vector<BigRational>> B;
};

// Matrices of the first-order system x L' = (x A + B) L over (L_0 .. L_nu).
OdeSystem assemble_ode(long nu, const BigRational& lambda, const BigRational& lambda1,
                       long alpha);

// x L'_p - sum_j (x A[p][j] + B[p][j]) L_j for each row p; all rows must be
// identically zero for recursion vectors.
std::vector<ErfExpoSum> ode_residual(const OdeSystem& sys, const std::vector<ErfExpoSum>& L);

// Template check for beta = 1 with half-integer aTilde: only erf(sqrt(s/2))
// to the first power may appear, and power parities must split by erf
// presence. Throws TemplateViolation otherwise.
void check_half_integer_template(const EnsembleParams& params, const ErfExpoSum& q);

// Shape check for integer aTilde: exponential rates j*beta/2 with j = 0..N,
// no erf factors, and the documented per-rate degree bounds.
void check_integer_shape(const EnsembleParams& params, const ErfExpoSum& q);

}  // namespace rmx
