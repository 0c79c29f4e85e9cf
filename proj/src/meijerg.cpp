#include "rmx/meijerg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "rmx/errors.hpp"

namespace rmx {

namespace {

// Gamma(u + 1/2) for integer u >= 0, as rational * sqrt(pi).
SymbolicValue gamma_int_plus_half(long u) {
    BigRational r = BigRational(factorial_z(static_cast<unsigned long>(2 * u))) /
                    (BigRational(4).pow(u) * factorial(static_cast<unsigned long>(u)));
    return SymbolicValue(r) * SymbolicValue::pi_pow_half(1);
}

// Gamma(j/2) for integer j >= 1.
SymbolicValue gamma_half(long j) {
    if (j % 2 == 0) return SymbolicValue(factorial(static_cast<unsigned long>(j / 2 - 1)));
    return gamma_int_plus_half((j - 1) / 2);
}

// Decomposition of a spec in the truncated-orthogonal family:
//   uppers: (3/2 - j) x mf; then one 1 and values ell_i + k
//   lowers: one 0 and k x mf;  then values 3/2 - j - gap_i
struct FamilyView {
    long j = 0;
    long k = 0;
    long mf = 0;
    std::vector<long> ell;
    std::vector<long> gap;

    bool upper_offsets_zero() const {
        return std::all_of(ell.begin(), ell.end(), [](long v) { return v == 0; });
    }
    bool lower_offsets_zero() const {
        return std::all_of(gap.begin(), gap.end(), [](long v) { return v == 0; });
    }
};

bool as_nonneg_int(const BigRational& r, long& out) {
    if (!r.is_integer() || r.sign() < 0) return false;
    out = r.to_long();
    return true;
}

bool match_family(const MeijerSpec& s, FamilyView& v) {
    long p = s.p(), q = s.q();
    if (p != q || p < 3 || p % 2 == 0) return false;
    long mf = (p - 1) / 2;
    if (s.m != mf + 1 || s.n != mf) return false;

    BigRational c = s.upper[0];
    for (long i = 1; i < mf; ++i)
        if (s.upper[i] != c) return false;
    long j;
    if (!as_nonneg_int(BigRational(3, 2) - c, j) || j < 1) return false;

    std::vector<BigRational> head(s.lower.begin(), s.lower.begin() + (mf + 1));
    std::sort(head.begin(), head.end());
    if (!head.front().is_zero()) return false;
    long k;
    if (!as_nonneg_int(head[1], k) || k < 1) return false;
    for (long i = 2; i <= mf; ++i)
        if (head[i] != head[1]) return false;

    std::vector<BigRational> tailUp(s.upper.begin() + mf, s.upper.end());
    auto one = std::find(tailUp.begin(), tailUp.end(), BigRational(1));
    if (one == tailUp.end()) return false;
    tailUp.erase(one);
    std::vector<long> ell;
    for (const BigRational& a : tailUp) {
        long e;
        if (!as_nonneg_int(a - BigRational(k), e)) return false;
        ell.push_back(e);
    }

    std::vector<long> gap;
    for (long i = mf + 1; i < q; ++i) {
        long g;
        if (!as_nonneg_int(BigRational(3, 2) - BigRational(j) - s.lower[i], g)) return false;
        gap.push_back(g);
    }

    v.j = j;
    v.k = k;
    v.mf = mf;
    v.ell = std::move(ell);
    v.gap = std::move(gap);
    return true;
}

std::string memo_key(const MeijerSpec& s) {
    auto block = [](std::vector<BigRational> part) {
        std::sort(part.begin(), part.end());
        std::string out;
        for (const BigRational& r : part) out += r.to_string() + ",";
        return out;
    };
    std::vector<BigRational> un(s.upper.begin(), s.upper.begin() + s.n);
    std::vector<BigRational> ut(s.upper.begin() + s.n, s.upper.end());
    std::vector<BigRational> lm(s.lower.begin(), s.lower.begin() + s.m);
    std::vector<BigRational> lt(s.lower.begin() + s.m, s.lower.end());
    return block(un) + "|" + block(ut) + "|" + block(lm) + "|" + block(lt);
}

SymbolicValue evaluate_rec(const MeijerSpec& spec, std::map<std::string, SymbolicValue>& memo,
                           int depth) {
    if (depth > 256) fail(errc::too_large, "recurrence reduction did not terminate");
    FamilyView v;
    if (!match_family(spec, v))
        fail(errc::out_of_range, "spec outside the family reducible by the recurrence");
    if (v.upper_offsets_zero() || v.lower_offsets_zero()) return g_boundary_eval(spec);

    std::string key = memo_key(spec);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;

    // Move the largest upper offset and the largest lower offset to the block
    // ends; the literal 1 never qualifies since candidates have value >= k+1.
    MeijerSpec s = spec;
    long bestUp = -1, bestEll = 0;
    for (long i = v.mf; i < s.p(); ++i) {
        long e;
        if (as_nonneg_int(s.upper[i] - BigRational(v.k), e) && e > bestEll) {
            bestEll = e;
            bestUp = i;
        }
    }
    long bestLo = -1, bestGap = 0;
    for (long i = v.mf + 1; i < s.q(); ++i) {
        long g;
        if (as_nonneg_int(BigRational(3, 2) - BigRational(v.j) - s.lower[i], g) && g > bestGap) {
            bestGap = g;
            bestLo = i;
        }
    }
    std::swap(s.upper[bestUp], s.upper[s.p() - 1]);
    std::swap(s.lower[bestLo], s.lower[s.q() - 1]);

    RecurrenceSplit split = g_recurrence_step(s);
    SymbolicValue value = (evaluate_rec(split.a, memo, depth + 1) +
                           evaluate_rec(split.b, memo, depth + 1)) /
                          SymbolicValue(split.divisor);
    memo.emplace(std::move(key), value);
    return value;
}

// Exact Gaussian elimination; pivots by the magnitude of the rational content.
SymbolicValue det_symbolic(std::vector<std::vector<SymbolicValue>> a) {
    long n = static_cast<long>(a.size());
    SymbolicValue det(1);
    int sign = 1;
    for (long c = 0; c < n; ++c) {
        long piv = -1;
        double best = 0.0;
        for (long r = c; r < n; ++r) {
            double m = std::fabs(a[r][c].to_double());
            if (m > best) {
                best = m;
                piv = r;
            }
        }
        if (piv < 0) return SymbolicValue();
        if (piv != c) {
            std::swap(a[piv], a[c]);
            sign = -sign;
        }
        for (long r = c + 1; r < n; ++r) {
            if (a[r][c].is_zero()) continue;
            SymbolicValue f = a[r][c] / a[c][c];
            for (long cc = c; cc < n; ++cc) a[r][cc] = a[r][cc] - f * a[c][cc];
        }
        det = det * a[c][c];
    }
    if (sign < 0) det = det * SymbolicValue(-1);
    return det;
}

// Fraction-free elimination for the pure-rational case.
BigRational det_bareiss(std::vector<std::vector<BigRational>> a) {
    long n = static_cast<long>(a.size());
    BigRational prev(1);
    int sign = 1;
    for (long c = 0; c < n - 1; ++c) {
        if (a[c][c].is_zero()) {
            long piv = -1;
            for (long r = c + 1; r < n; ++r)
                if (!a[r][c].is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) return BigRational(0);
            std::swap(a[piv], a[c]);
            sign = -sign;
        }
        for (long r = c + 1; r < n; ++r)
            for (long cc = c + 1; cc < n; ++cc)
                a[r][cc] = (a[r][cc] * a[c][c] - a[r][c] * a[c][cc]) / prev;
        prev = a[c][c];
    }
    BigRational det = a[n - 1][n - 1];
    if (sign < 0) det = -det;
    return det;
}

}  // namespace

void MeijerSpec::validate() const {
    if (m < 0 || n < 0 || m > q() || n > p())
        fail(errc::domain_error, "need 0 <= m <= q and 0 <= n <= p");
}

RecurrenceSplit g_recurrence_step(const MeijerSpec& spec) {
    spec.validate();
    if (spec.n >= spec.p() || spec.m >= spec.q())
        fail(errc::domain_error, "recurrence requires n < p and m < q");
    BigRational divisor = spec.upper.back() - spec.lower.back() - BigRational(1);
    if (divisor.is_zero())
        fail(errc::zero_divisor, "a_p - b_q - 1 vanishes; permute parameters first");
    RecurrenceSplit out{spec, spec, divisor};
    out.a.upper.back() = out.a.upper.back() - BigRational(1);
    out.b.lower.back() = out.b.lower.back() + BigRational(1);
    return out;
}

SymbolicValue g_boundary_eval(const MeijerSpec& spec) {
    spec.validate();
    FamilyView v;
    if (!match_family(spec, v)) fail(errc::not_boundary, "spec matches neither boundary pattern");
    bool upZero = v.upper_offsets_zero(), loZero = v.lower_offsets_zero();
    if (upZero && loZero)
        fail(errc::not_boundary, "all offsets zero; the boundary patterns need a nonzero one");
    if (loZero) return SymbolicValue();
    if (upZero) {
        BigRational r(1);
        for (long g : v.gap)
            r /= pochhammer(BigRational(2 * v.j - 1, 2), static_cast<unsigned long>(g));
        return SymbolicValue(r);
    }
    fail(errc::not_boundary, "offsets remain on both parameter sides");
}

SymbolicValue g_evaluate(const MeijerSpec& spec) {
    std::map<std::string, SymbolicValue> memo;
    return evaluate_rec(spec, memo, 0);
}

SymbolicValue g33_closed_form(long j, long k) {
    if (j < 1 || k < 1) fail(errc::domain_error, "need j, k >= 1");
    BigRational pref = factorial(static_cast<unsigned long>(k - 1)) *
                       factorial(static_cast<unsigned long>(2 * j + 2 * k - 2)).pow(2) /
                       factorial(static_cast<unsigned long>(j + k - 1)).pow(2);
    BigRational sum(0);
    for (long mu = 0; mu < k; ++mu) {
        BigRational term = BigRational(16).pow(2 - mu - 2 * j - k) *
                           factorial(static_cast<unsigned long>(2 * mu + 2 * j - 2)).pow(2) /
                           (factorial(static_cast<unsigned long>(mu)) *
                            factorial(static_cast<unsigned long>(mu + j - 1)).pow(2) *
                            factorial(static_cast<unsigned long>(mu + 2 * j + k - 2)));
        sum += term;
    }
    return SymbolicValue::pi_pow_half(4) * SymbolicValue(pref * sum);
}

SymbolicValue ginibre_entry(int m, long j, long k) {
    if (j < 1 || k < 1) fail(errc::domain_error, "need j, k >= 1");
    if (m == 2) return g33_closed_form(j, k);
    if (m != 1)
        fail(errc::out_of_range, "exact Gaussian-product entries exist for m = 1 and m = 2 only");
    long a = j - 1;
    BigRational s(0);
    for (long i = 0; i < k; ++i) {
        BigRational term = binomial(k - 1, i) /
                           (BigRational(2).pow(a + i) * BigRational(2 * (a + i) + 1));
        s += (i % 2 == 0) ? term : -term;
    }
    return gamma_int_plus_half(j + k - 1) * SymbolicValue::two_pow_half(1) * SymbolicValue(s);
}

void ProductSpec::validate() const {
    if (N < 2 || N > 8 || N % 2 != 0) fail(errc::out_of_range, "N must be even and in 2..8");
    if (m < 1 || m > 3) fail(errc::out_of_range, "m must be in 1..3");
    if (truncationDims.empty()) return;
    if (static_cast<long>(truncationDims.size()) != m)
        fail(errc::out_of_range, "need one truncation dimension per factor");
    for (long L : truncationDims) {
        if (L % 2 != 0) fail(errc::odd_truncation, "odd truncation dimensions are out of scope");
        if (L < 2) fail(errc::out_of_range, "truncation dimensions must be positive");
    }
}

MeijerSpec truncation_entry_spec(const ProductSpec& spec, long j, long k) {
    spec.validate();
    if (spec.truncationDims.empty())
        fail(errc::domain_error, "entry spec is defined for truncated products");
    MeijerSpec out;
    out.m = spec.m + 1;
    out.n = spec.m;
    BigRational c = BigRational(3, 2) - BigRational(j);
    out.upper.assign(static_cast<size_t>(spec.m), c);
    out.upper.push_back(BigRational(1));
    out.lower.push_back(BigRational(0));
    for (long L : spec.truncationDims) {
        out.upper.push_back(BigRational(L / 2 + k));
        out.lower.insert(out.lower.begin() + 1, BigRational(k));
    }
    for (long L : spec.truncationDims) out.lower.push_back(c - BigRational(L / 2));
    return out;
}

SymbolicValue prob_all_real(const ProductSpec& spec) {
    spec.validate();
    long half = spec.N / 2;
    if (spec.truncationDims.empty()) {
        if (spec.m == 3)
            fail(errc::out_of_range,
                 "no exact entry formula for the product of three Gaussian matrices");
        std::vector<std::vector<SymbolicValue>> mat(
            static_cast<size_t>(half), std::vector<SymbolicValue>(static_cast<size_t>(half)));
        for (long j = 1; j <= half; ++j)
            for (long k = 1; k <= half; ++k)
                mat[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)] =
                    ginibre_entry(spec.m, j, k);
        SymbolicValue det = det_symbolic(std::move(mat));
        SymbolicValue norm(1);
        for (long j = 1; j <= spec.N; ++j) norm = norm * gamma_half(j);
        SymbolicValue prob = det;
        for (int i = 0; i < spec.m; ++i) prob = prob / norm;
        return prob;
    }

    std::map<std::string, SymbolicValue> memo;
    std::vector<std::vector<BigRational>> mat(static_cast<size_t>(half),
                                              std::vector<BigRational>(static_cast<size_t>(half)));
    for (long j = 1; j <= half; ++j)
        for (long k = 1; k <= half; ++k)
            mat[static_cast<size_t>(j - 1)][static_cast<size_t>(k - 1)] =
                evaluate_rec(truncation_entry_spec(spec, j, k), memo, 0).as_rational();
    BigRational det = det_bareiss(std::move(mat));
    BigRational pref(1);
    for (long L : spec.truncationDims)
        for (long s = 0; s < spec.N; ++s)
            pref *= pochhammer(BigRational(s + 1, 2), static_cast<unsigned long>(L / 2));
    return SymbolicValue(pref * det);
}

}  // namespace rmx
