#include "rmx/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "rmx/errors.hpp"
#include "rmx/quadrature.hpp"

namespace rmx {

namespace {

bool is_half_integer_ge(const BigRational& a, const BigRational& lo) {
    return (a * 2).is_integer() && a >= lo;
}

// L_{0,1}^{(alpha)}(s) = Integral_0^s (s-t)^alpha t^lambda1 e^(-lambda t) dt,
// expanded binomially in the outer variable.
ErfExpoSum base_row_one(long alpha, const BigRational& lambda, const BigRational& lambda1) {
    ErfExpoSum out;
    for (long i = 0; i <= alpha; ++i) {
        long m = (lambda1 * 2).to_long() + 2 * i;
        ErfExpoSum inner = ErfExpoSum::term(SymbolicValue(1), m, lambda).antiderive_on_interval();
        BigRational c = binomial(alpha, i);
        if (i % 2) c = -c;
        out += inner.shifted_power(2 * (alpha - i)) * c;
    }
    return out;
}

// Weighted interval integral Integral_0^s x^lambda1 e^(-lambda x) f(x) dx.
ErfExpoSum weighted_integral(const ErfExpoSum& f, const BigRational& lambda,
                             const BigRational& lambda1) {
    ErfExpoSum integrand =
        f.shifted_power((lambda1 * 2).to_long()) * ErfExpoSum::term(SymbolicValue(1), 0, lambda);
    return integrand.antiderive_on_interval();
}

using Mono = std::vector<long>;

// Expansion of the Vandermonde power prod_{i<j} (x_j - x_i)^beta into
// monomials in x_0 .. x_{N-1}.
std::map<Mono, BigRational> vandermonde_power(long N, long beta) {
    std::map<Mono, BigRational> cur;
    cur.emplace(Mono(static_cast<size_t>(N), 0), BigRational(1));
    for (long rep = 0; rep < beta; ++rep)
        for (long i = 0; i < N; ++i)
            for (long j = i + 1; j < N; ++j) {
                std::map<Mono, BigRational> next;
                for (const auto& [e, c] : cur) {
                    Mono up = e;
                    up[static_cast<size_t>(j)] += 1;
                    auto [itj, freshj] = next.emplace(up, c);
                    if (!freshj) itj->second += c;
                    Mono dn = e;
                    dn[static_cast<size_t>(i)] += 1;
                    auto [iti, freshi] = next.emplace(dn, -c);
                    if (!freshi) iti->second -= c;
                }
                for (auto it = next.begin(); it != next.end();)
                    it = it->second.is_zero() ? next.erase(it) : std::next(it);
                cur = std::move(next);
            }
    return cur;
}

// L_{0,nu}^{(alpha)} via the full scheme: base row, alpha chains, and
// weighted increments in nu.
ErfExpoSum scheme_start(const EnsembleParams& params, long nu, long alpha) {
    const BigRational lambda = BigRational(params.beta, 2);
    const BigRational lambda1 = params.aTilde;
    ErfExpoSum cur = base_row_one(0, lambda, lambda1);
    long cur_nu = 1;
    long cur_alpha = 0;
    while (cur_nu < nu || cur_alpha < alpha) {
        ErfExpoSum lp = cur;
        ErfExpoSum lprev;
        for (long p = 0; p < cur_nu; ++p) {
            RecursionState st{p, cur_nu, cur_alpha, lambda, lambda1};
            ErfExpoSum lnext = recurrence_step(st, lp, lprev);
            lprev = std::move(lp);
            lp = std::move(lnext);
        }
        cur = std::move(lp);  // L_{nu,nu}^{(alpha)} = L_{0,nu}^{(alpha+1)}
        ++cur_alpha;
        if (cur_nu < nu && cur_alpha == params.beta) {
            cur = weighted_integral(cur, lambda, lambda1) * BigRational(cur_nu + 1);
            ++cur_nu;
            cur_alpha = 0;
        }
    }
    return cur;
}

}  // namespace

std::vector<ErfExpoSum> laguerre_column(const EnsembleParams& params, long nu, long alpha) {
    params.validate();
    if (nu < 1 || alpha < 0) fail(errc::bad_arguments, "need nu >= 1 and alpha >= 0");
    const BigRational lambda = BigRational(params.beta, 2);
    const BigRational lambda1 = params.aTilde;
    std::vector<ErfExpoSum> col;
    col.reserve(static_cast<size_t>(nu) + 1);
    col.push_back(scheme_start(params, nu, alpha));
    ErfExpoSum lprev;
    for (long p = 0; p < nu; ++p) {
        RecursionState st{p, nu, alpha, lambda, lambda1};
        ErfExpoSum lnext = recurrence_step(st, col.back(), lprev);
        lprev = col.back();
        col.push_back(std::move(lnext));
    }
    return col;
}

EnsembleParams EnsembleParams::from_channels(long beta, long N, long n) {
    EnsembleParams p;
    p.beta = beta;
    p.N = N;
    p.n = n;
    p.aTilde = BigRational(beta) / 2 * BigRational(n - N + 1) - 1;
    p.validate();
    return p;
}

EnsembleParams EnsembleParams::from_atilde(long beta, long N, const BigRational& aTilde) {
    EnsembleParams p;
    p.beta = beta;
    p.N = N;
    p.aTilde = aTilde;
    p.validate();
    return p;
}

void EnsembleParams::validate() const {
    if (beta != 1 && beta != 2 && beta != 4)
        fail(errc::domain_error, "beta must be 1, 2 or 4");
    if (N < 1) fail(errc::domain_error, "matrix dimension N must be positive");
    if (beta == 1) {
        if (!is_half_integer_ge(aTilde, BigRational(-1, 2)))
            fail(errc::domain_error, "for beta = 1 the edge exponent must be a "
                                     "half-integer >= -1/2");
    } else {
        if (!aTilde.is_integer() || aTilde.sign() < 0)
            fail(errc::domain_error, "for beta = 2 or 4 the edge exponent must be a "
                                     "nonnegative integer");
    }
    if (n >= 0) {
        if (n < N) fail(errc::domain_error, "channel count n must be >= N");
        if (aTilde != BigRational(beta) / 2 * BigRational(n - N + 1) - 1)
            fail(errc::domain_error, "edge exponent inconsistent with channel counts");
    }
}

ErfExpoSum recurrence_step(const RecursionState& state, const ErfExpoSum& Lp,
                           const ErfExpoSum& Lpm1) {
    BigRational lead = state.lambda * BigRational(state.nu - state.p);
    if (lead.is_zero()) fail(errc::division_by_zero, "recurrence leading factor vanishes");
    ErfExpoSum rhs = Lp.shifted_power(2) * lead;
    rhs += Lp * state.B();
    rhs += Lp.differentiate().shifted_power(2);
    rhs -= Lpm1.shifted_power(2) * state.D();
    return rhs * lead.inv();
}

ErfExpoSum q_laguerre(const EnsembleParams& params) {
    params.validate();
    ErfExpoSum cur = scheme_start(params, params.N, 0);
    if (params.aTilde.is_integer())
        check_integer_shape(params, cur);
    else
        check_half_integer_template(params, cur);
    return cur;
}

ErfExpoSum q_bruteforce(const EnsembleParams& params) {
    params.validate();
    if (params.N > 3)
        fail(errc::too_large, "symbolic brute force is limited to N <= 3");
    if (!params.aTilde.is_integer() || params.aTilde > 4)
        fail(errc::too_large, "symbolic brute force needs an integer edge exponent <= 4");
    const BigRational lambda = BigRational(params.beta, 2);
    const long atil = params.aTilde.to_long();
    const auto vand = vandermonde_power(params.N, params.beta);

    ErfExpoSum total;
    if (params.beta % 2 == 0) {
        // Full cube factorizes into a product of one-dimensional integrals.
        std::map<long, ErfExpoSum> cache;
        auto one_dim = [&](long c) -> const ErfExpoSum& {
            auto it = cache.find(c);
            if (it == cache.end())
                it = cache
                         .emplace(c, ErfExpoSum::term(SymbolicValue(1), 2 * (c + atil), lambda)
                                         .antiderive_on_interval())
                         .first;
            return it->second;
        };
        for (const auto& [e, c] : vand) {
            ErfExpoSum prod = ErfExpoSum::one();
            for (long ei : e) prod *= one_dim(ei);
            total += prod * c;
        }
    } else {
        // Ordered sector x_0 < x_1 < ... iterated innermost first, times N!.
        for (const auto& [e, c] : vand) {
            ErfExpoSum cur = ErfExpoSum::one();
            for (long ei : e) {
                cur *= ErfExpoSum::term(SymbolicValue(1), 2 * (ei + atil), lambda);
                cur = cur.antiderive_on_interval();
            }
            total += cur * c;
        }
        total *= factorial(static_cast<unsigned long>(params.N));
    }
    return total;
}

double q_bruteforce_numeric(const EnsembleParams& params, double s) {
    params.validate();
    if (s < 0) fail(errc::domain_error, "upper limit must be nonnegative");
    if (s == 0) return 0.0;
    const double atil = params.aTilde.to_double();
    const double lam = params.beta / 2.0;
    const long N = params.N;

    // Ordered sector with the substitution x = u^2 on every axis, so the
    // hard-edge factor x^aTilde stays integrable down to aTilde = -1/2.
    std::vector<double> xs(static_cast<size_t>(N));
    std::function<double(long, double)> level = [&](long k, double upper) -> double {
        double tol = 3e-14 * std::pow(10.0, static_cast<double>(N - 1 - k));
        return integrate_adaptive(
            [&](double u) {
                double x = u * u;
                xs[static_cast<size_t>(k)] = x;
                double w = 2.0 * std::pow(u, 2.0 * atil + 1.0) * std::exp(-lam * x);
                double inner;
                if (k == 0) {
                    double vdm = 1.0;
                    for (long i = 0; i < N; ++i)
                        for (long j = i + 1; j < N; ++j)
                            vdm *= std::abs(xs[static_cast<size_t>(i)] -
                                            xs[static_cast<size_t>(j)]);
                    inner = std::pow(vdm, static_cast<double>(params.beta));
                } else {
                    inner = level(k - 1, x);
                }
                return w * inner;
            },
            0.0, std::sqrt(upper), tol);
    };
    double sector = level(N - 1, s);
    return sector * factorial(static_cast<unsigned long>(N)).to_double();
}

OdeSystem assemble_ode(long nu, const BigRational& lambda, const BigRational& lambda1,
                       long alpha) {
    size_t dim = static_cast<size_t>(nu) + 1;
    OdeSystem sys;
    sys.A.assign(dim, std::vector<BigRational>(dim));
    sys.B.assign(dim, std::vector<BigRational>(dim));
    for (long p = 0; p <= nu; ++p) {
        RecursionState st{p, nu, alpha, lambda, lambda1};
        auto up = static_cast<size_t>(p);
        sys.A[up][up] = -(lambda * BigRational(nu - p));
        if (p >= 1) sys.A[up][up - 1] = st.D();
        sys.B[up][up] = -st.B();
        if (p < nu) sys.B[up][up + 1] = lambda * BigRational(nu - p);
    }
    return sys;
}

std::vector<ErfExpoSum> ode_residual(const OdeSystem& sys, const std::vector<ErfExpoSum>& L) {
    if (L.size() != sys.A.size()) fail(errc::bad_arguments, "vector length mismatch");
    std::vector<ErfExpoSum> res;
    res.reserve(L.size());
    for (size_t p = 0; p < L.size(); ++p) {
        ErfExpoSum r = L[p].differentiate().shifted_power(2);
        for (size_t j = 0; j < L.size(); ++j) {
            if (!sys.A[p][j].is_zero()) r -= L[j].shifted_power(2) * sys.A[p][j];
            if (!sys.B[p][j].is_zero()) r -= L[j] * sys.B[p][j];
        }
        res.push_back(std::move(r));
    }
    return res;
}

void check_half_integer_template(const EnsembleParams& params, const ErfExpoSum& q) {
    q.assert_no_atoms("half-integer template");
    for (const auto& t : q.terms()) {
        long total = 0;
        for (const auto& f : t.erfs) {
            if (f.q != 1)
                fail(errc::template_violation,
                     "unexpected error-function argument in result for beta = " +
                         std::to_string(params.beta));
            total += f.p;
        }
        if (total > 1)
            fail(errc::template_violation, "error-function power exceeds one in result");
    }
}

void check_integer_shape(const EnsembleParams& params, const ErfExpoSum& q) {
    q.assert_no_atoms("integer-exponent result");
    const BigRational lambda = BigRational(params.beta, 2);
    for (const auto& t : q.terms()) {
        if (!t.erfs.empty())
            fail(errc::template_violation, "error function in an integer-exponent result");
        if (t.m % 2 != 0 || t.m < 0)
            fail(errc::template_violation, "fractional power in an integer-exponent result");
        BigRational j = t.rate / lambda;
        if (!j.is_integer() || j.sign() < 0 || j > params.N)
            fail(errc::template_violation, "exponential rate outside the expected family");
        long jl = j.to_long();
        BigRational bound =
            params.aTilde * jl + BigRational(jl * (params.N - jl) * params.beta);
        if (BigRational(t.m, 2) > bound)
            fail(errc::template_violation, "polynomial degree exceeds the rate-family bound");
    }
}

}  // namespace rmx
