#pragma once

#include <vector>

#include "rmx/rational.hpp"
#include "rmx/symbolic.hpp"

namespace rmx {

// A Meijer G-function instance with the argument fixed at z = 1. In the
// contour-integral kernel the first m lower parameters contribute
// Gamma(b_i + u) and the first n upper parameters Gamma(1 - a_i - u) to the
// numerator; the remaining parameters sit in the denominator. The function is
// invariant under permutations inside each of the four blocks.
struct MeijerSpec {
    std::vector<BigRational> upper;  // a_1..a_p
    std::vector<BigRational> lower;  // b_1..b_q
    int m = 0;
    int n = 0;

    long p() const { return static_cast<long>(upper.size()); }
    long q() const { return static_cast<long>(lower.size()); }
    void validate() const;
};

struct RecurrenceSplit {
    MeijerSpec a;         // last upper parameter decremented
    MeijerSpec b;         // last lower parameter incremented
    BigRational divisor;  // a_p - b_q - 1
};

// Contiguous three-term relation G(spec) = (G(split.a) + G(split.b)) / divisor.
// Needs n < p and m < q; throws ZeroDivisor when a_p - b_q - 1 = 0, in which
// case the caller has to permute parameters within the blocks first.
RecurrenceSplit g_recurrence_step(const MeijerSpec& spec);

// Terminal evaluations for the two boundary patterns reached by the
// recurrence in the truncated-orthogonal family: the pattern whose lower tail
// block is untouched vanishes, the one whose upper tail block is untouched is
// a product of Gamma ratios at half-integers (an exact rational). Throws
// NotBoundary when the spec matches neither pattern.
SymbolicValue g_boundary_eval(const MeijerSpec& spec);

// Reduces an in-family spec to boundary evaluations by repeated recurrence
// steps, memoizing intermediate states.
SymbolicValue g_evaluate(const MeijerSpec& spec);

// Closed form for G^{3,2}_{3,3}(5/2-j,5/2-j,2; 1,1+k,1+k | 1) as pi^2 times
// an explicit finite rational sum.
SymbolicValue g33_closed_form(long j, long k);

// Determinant-entry value for the all-real-spectrum probability of a product
// of m standard real Gaussian matrices; exact for m = 1 (a Mellin reduction
// to a one-dimensional Beta-type integral) and m = 2 (the closed form above).
SymbolicValue ginibre_entry(int m, long j, long k);

// Product of m independent matrices of even size N: either standard real
// Gaussians (no truncation dims) or N x N corners of Haar orthogonal matrices
// of size (L_i + N) x (L_i + N).
struct ProductSpec {
    int m = 1;
    long N = 2;
    std::vector<long> truncationDims;  // all even and positive; empty = Gaussian

    void validate() const;
};

// Determinant-entry spec of the truncated-orthogonal probability formula.
MeijerSpec truncation_entry_spec(const ProductSpec& spec, long j, long k);

// Exact probability that every eigenvalue of the product is real.
SymbolicValue prob_all_real(const ProductSpec& spec);

}  // namespace rmx
