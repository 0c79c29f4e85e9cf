#include "rmx/fixedtrace.hpp"

#include <bit>
#include <vector>

#include "rmx/errors.hpp"

namespace rmx {

namespace {

// Gamma(u + 1/2) for integer u >= 0, equal to (2u)!/(4^u u!) sqrt(pi).
SymbolicValue gamma_int_plus_half(long u) {
    BigRational r = factorial(static_cast<unsigned long>(2 * u)) /
                    (BigRational(4).pow(u) * factorial(static_cast<unsigned long>(u)));
    return SymbolicValue(r) * SymbolicValue::pi_pow_half(1);
}

// (u)_{1/2} = Gamma(u+1/2)/Gamma(u), integer u >= 1.
SymbolicValue poch_plus_half(long u) {
    return gamma_int_plus_half(u) * SymbolicValue(BigRational(1) / factorial(static_cast<unsigned long>(u - 1)));
}

// (u)_{-1/2} = Gamma(u-1/2)/Gamma(u), integer u >= 1.
SymbolicValue poch_minus_half(long u) {
    return gamma_int_plus_half(u - 1) *
           SymbolicValue(BigRational(1) / factorial(static_cast<unsigned long>(u - 1)));
}

// Generalized Laguerre polynomial L_k^(a) with rational coefficients.
UniPoly laguerre_poly(long k, long a) {
    UniPoly p;
    for (long i = 0; i <= k; ++i) {
        BigRational c = binomial(k + a, k - i) / factorial(static_cast<unsigned long>(i));
        if (i % 2) c = -c;
        p += UniPoly::monomial(c, static_cast<size_t>(i));
    }
    return p;
}

}  // namespace

GapPolynomial gap_poly_wishart(const BipartiteDims& dims) {
    dims.validate();
    const long N = dims.N;
    const long a = dims.a();
    if (N > 16) fail(errc::too_large, "gap polynomial determinant limited to N <= 16");

    std::vector<std::vector<UniPoly>> M(static_cast<size_t>(N),
                                        std::vector<UniPoly>(static_cast<size_t>(N)));
    for (long j = 0; j < N; ++j)
        for (long k = 0; k < N; ++k) {
            UniPoly e;
            for (long i = 0; i <= a; ++i)
                e += UniPoly::monomial(
                    binomial(a, i) * factorial(static_cast<unsigned long>(j + k + i)),
                    static_cast<size_t>(a - i));
            M[static_cast<size_t>(j)][static_cast<size_t>(k)] = e;
        }

    // determinant by dynamic programming over used-column subsets
    std::vector<UniPoly> dp(static_cast<size_t>(1) << N);
    dp[0] = UniPoly::constant(BigRational(1));
    for (unsigned long mask = 1; mask < dp.size(); ++mask) {
        long row = std::popcount(mask) - 1;
        UniPoly acc;
        long below = 0;
        for (long c = 0; c < N; ++c) {
            unsigned long bit = 1ul << c;
            if (!(mask & bit)) continue;
            UniPoly part = dp[mask ^ bit] * M[static_cast<size_t>(row)][static_cast<size_t>(c)];
            acc += (below % 2) ? -part : part;
            ++below;
        }
        dp[mask] = std::move(acc);
    }
    UniPoly det = dp.back();

    BigRational c0 = det.coef(0);
    if (c0.is_zero()) fail(errc::domain_error, "vanishing gap-polynomial normalization");
    det *= c0.inv();
    if (det.degree() != N * a)
        fail(errc::domain_error, "gap polynomial degree mismatch");
    return GapPolynomial{det};
}

PiecewisePuiseux smallest_eig_pdf_hs(const BipartiteDims& dims) {
    dims.validate();
    if (dims.N < 2) fail(errc::domain_error, "smallest-eigenvalue density needs N >= 2");
    const long N = dims.N;
    const long a = dims.a();
    const long D = dims.n * N;  // total Gaussian degrees of freedom

    const UniPoly c = gap_poly_wishart(dims).coefficients;
    // f(s) = -dE/ds = e^(-Ns) sum_j (N c_{j-1} - j c_j) s^(j-1)
    std::vector<BigRational> d(static_cast<size_t>(N * a + 2));
    for (long j = 1; j <= N * a + 1; ++j) {
        d[static_cast<size_t>(j)] = BigRational(N) * c.coef(static_cast<size_t>(j - 1)) -
                                    BigRational(j) * c.coef(static_cast<size_t>(j));
        if (j <= a && !d[static_cast<size_t>(j)].is_zero())
            fail(errc::domain_error, "low-order density coefficients should vanish");
    }

    PiecewisePuiseux pdf(BigRational(1, N));
    for (long j = a + 1; j <= N * a + 1; ++j) {
        if (d[static_cast<size_t>(j)].is_zero()) continue;
        // Gamma(D)/Gamma(D-j) times the term s^(j-1) (1-Ns)^(D-j-1)
        BigRational pref = d[static_cast<size_t>(j)] *
                           pochhammer(BigRational(D - j), static_cast<unsigned long>(j));
        long q = D - j - 1;
        for (long i = 0; i <= q; ++i) {
            BigRational bc = pref * binomial(q, i) * BigRational(-N).pow(i);
            pdf.add_term(SymbolicValue(bc), BigRational(0), 2 * (j - 1 + i));
        }
    }

    if (!symbolic_equal(pdf.moment(0), SymbolicValue(1)))
        fail(errc::domain_error, "fixed-trace map failed exact normalization");
    return pdf;
}

PiecewisePuiseux density_hs(const BipartiteDims& dims) {
    dims.validate();
    if (dims.N < 2) fail(errc::domain_error, "one-point density needs N >= 2");
    const long N = dims.N;
    const long a = dims.a();
    const long D = N * a + N * N;

    // Laguerre-ensemble density: y^a e^(-y) sum_k k!/(k+a)! L_k^(a)(y)^2
    UniPoly sum;
    for (long k = 0; k < N; ++k) {
        UniPoly lk = laguerre_poly(k, a);
        sum += lk * lk *
               (factorial(static_cast<unsigned long>(k)) /
                factorial(static_cast<unsigned long>(k + a)));
    }

    // Term-wise image of y^p e^(-y): x^p (1-x)^(D-2-p) / Gamma(D-1-p)
    PiecewisePuiseux rho(BigRational(1));
    for (long pl = 0; pl <= sum.degree(); ++pl) {
        BigRational r = sum.coef(static_cast<size_t>(pl));
        if (r.is_zero()) continue;
        long p = pl + a;
        long q = D - 2 - p;
        BigRational g = r / factorial(static_cast<unsigned long>(D - 2 - p));
        for (long i = 0; i <= q; ++i) {
            BigRational bc = g * binomial(q, i);
            if (i % 2) bc = -bc;
            rho.add_term(SymbolicValue(bc), BigRational(0), 2 * (p + i));
        }
    }

    SymbolicValue mass = rho.moment(0);
    rho *= SymbolicValue(N) / mass;
    return rho;
}

SymbolicValue polygamma_exact(PolygammaKind kind, const BigRational& arg) {
    if (arg.sign() <= 0 || !(arg * 2).is_integer())
        fail(errc::domain_error, "polygamma argument must be a positive half-integer");
    if (arg.is_integer()) {
        long m = arg.to_long();
        if (kind == PolygammaKind::digamma) {
            BigRational h;
            for (long k = 1; k < m; ++k) h += BigRational(1, k);
            return SymbolicValue(h) - SymbolicValue::euler_gamma();
        }
        BigRational s;
        for (long k = 1; k < m; ++k) s += BigRational(1, k * k);
        return SymbolicValue::pi_pow_half(4) * SymbolicValue(BigRational(1, 6)) -
               SymbolicValue(s);
    }
    long m = (arg - BigRational(1, 2)).to_long();
    if (kind == PolygammaKind::digamma) {
        BigRational h;
        for (long k = 1; k <= m; ++k) h += BigRational(2, 2 * k - 1);
        return SymbolicValue(h) - SymbolicValue::euler_gamma() -
               SymbolicValue(2) * SymbolicValue::ln_two();
    }
    BigRational s;
    for (long k = 1; k <= m; ++k) s += BigRational(4, (2 * k - 1) * (2 * k - 1));
    return SymbolicValue::pi_pow_half(4) * SymbolicValue(BigRational(1, 2)) - SymbolicValue(s);
}

EntanglementMeans entanglement_means(Measure measure, const BipartiteDims& dims) {
    dims.validate();
    const long N = dims.N;
    const long n = dims.n;
    EntanglementMeans out;
    if (measure == Measure::HS) {
        out.meanVN = polygamma_exact(PolygammaKind::digamma, BigRational(n * N + 1)) -
                     polygamma_exact(PolygammaKind::digamma, BigRational(n + 1)) -
                     SymbolicValue(BigRational(N - 1, 2 * n));
        out.meanPurity = SymbolicValue(BigRational(n + N, n * N + 1));
    } else {
        out.meanVN =
            polygamma_exact(PolygammaKind::digamma,
                            BigRational(n * N + 1) - BigRational(N * N, 2)) -
            polygamma_exact(PolygammaKind::digamma, BigRational(n) + BigRational(1, 2));
        out.meanPurity = SymbolicValue(BigRational(2 * n * (2 * n + N) + N * N - 1,
                                                   2 * n * (2 * n * N - N * N + 2)));
    }
    out.meanVN.assert_no_gamma("mean entropy");
    BigRational p = out.meanPurity.as_rational();
    out.purityPlausible = p >= BigRational(1, N) && p <= BigRational(1);
    return out;
}

SymbolicValue var_vn_bh(const BipartiteDims& dims) {
    dims.validate();
    const long N = dims.N;
    const long n = dims.n;
    SymbolicValue t1 = polygamma_exact(PolygammaKind::trigamma,
                                       BigRational(n * N + 1) - BigRational(N * N, 2));
    SymbolicValue t2 =
        polygamma_exact(PolygammaKind::trigamma, BigRational(n) + BigRational(1, 2));
    BigRational w = BigRational(2 * n * (2 * n + N) - N * N + 1,
                                2 * n * (2 * n * N - N * N + 2));
    SymbolicValue v = SymbolicValue(w) * t2 - t1;
    v.assert_no_gamma("entropy variance");
    return v;
}

DistanceFidelity distance_and_fidelity(const BipartiteDims& dims1, const BipartiteDims& dims2) {
    dims1.validate();
    dims2.validate();
    if (dims1.N != dims2.N)
        fail(errc::domain_error, "distance and fidelity need a shared subsystem dimension");
    const long N = dims1.N;
    const long n1 = dims1.n;
    const long n2 = dims2.n;
    const long v1 = n1 - N;
    const long v2 = n2 - N;

    DistanceFidelity out;
    out.meanDistSq = SymbolicValue(BigRational(N + n1, N * n1 + 1) +
                                   BigRational(N + n2, N * n2 + 1) - BigRational(2, N));

    auto block = [&](long j) {
        return poch_plus_half(j) * poch_plus_half(j + v1) * poch_plus_half(j + v2) *
               poch_minus_half(N - j + 1);
    };

    SymbolicValue sum1;
    for (long j = 1; j <= N; ++j) sum1 += block(j);
    SymbolicValue sqrtFid = SymbolicValue(2) * SymbolicValue::pi_pow_half(-2) * sum1 /
                            (poch_plus_half(N * n1) * poch_plus_half(N * n2));
    out.meanSqrtFid = SymbolicValue(sqrtFid.as_rational());

    SymbolicValue sum2;
    for (long j = 1; j <= N; ++j)
        for (long k = j + 1; k <= N; ++k) {
            BigRational dd((j - k) * (j - k));
            sum2 += SymbolicValue(dd / (dd - BigRational(1, 4))) * block(j) * block(k);
        }
    out.meanFid = SymbolicValue(BigRational(1, N)) +
                  SymbolicValue(BigRational(8, N * N * n1 * n2)) *
                      SymbolicValue::pi_pow_half(-4) * sum2;

    out.meanDistSq.as_rational();
    out.meanFid.assert_presentable("mean fidelity");
    return out;
}

}  // namespace rmx
