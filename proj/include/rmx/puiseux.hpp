#pragma once

#include <map>
#include <string>
#include <vector>

#include "rmx/rational.hpp"
#include "rmx/symbolic.hpp"

namespace rmx {

// One piece coef * (t-b)^(m/2) active on b < t < cut (cut may be infinite).
// m = -1 is allowed (integrable hard-edge singularity); m <= -2 is rejected.
struct PuiseuxKey {
    BigRational b;
    long m = 0;
    bool has_cut = false;
    BigRational cut;  // meaningful only when has_cut

    friend bool operator==(const PuiseuxKey&, const PuiseuxKey&) = default;
    friend bool operator<(const PuiseuxKey& x, const PuiseuxKey& y) {
        if (x.b != y.b) return x.b < y.b;
        if (x.m != y.m) return x.m < y.m;
        if (x.has_cut != y.has_cut) return x.has_cut < y.has_cut;
        if (x.has_cut && x.cut != y.cut) return x.cut < y.cut;
        return false;
    }
};

// r^(m/2) for rational r >= 0, exact in the symbolic field.
inline SymbolicValue pow_half(const BigRational& r, long m) {
    if (m % 2 == 0) return SymbolicValue(r.pow(m / 2));
    long whole = (m - 1) / 2;  // floor for negative odd m
    return SymbolicValue(r.pow(whole)) * SymbolicValue::sqrt_rational(r);
}

// Finite sum of windowed Puiseux pieces on a declared support [0, T].
// Canonical form: even-power finite windows are re-expanded into pure step
// terms, identical keys merged, zero coefficients dropped.
class PiecewisePuiseux {
  public:
    PiecewisePuiseux() = default;
    explicit PiecewisePuiseux(const BigRational& support_hi) : hi_(support_hi) {}

    const BigRational& support_hi() const { return hi_; }
    void set_support_hi(const BigRational& t) { hi_ = t; }

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    // Step term coef*(t-b)^(m/2) for t > b.
    void add_term(const SymbolicValue& coef, const BigRational& b, long m) {
        check_power(m);
        insert(PuiseuxKey{b, m, false, BigRational(0)}, coef);
    }

    // Windowed term active on b < t < cut. Even powers are immediately
    // re-expanded so the stored form stays canonical.
    void add_window(const SymbolicValue& coef, const BigRational& b, long m,
                    const BigRational& cut) {
        check_power(m);
        if (cut <= b) return;
        if (m % 2 != 0) {
            insert(PuiseuxKey{b, m, true, cut}, coef);
            return;
        }
        add_term(coef, b, m);
        // subtract the part beyond the cut: (t-b)^h = ((t-cut)+(cut-b))^h
        long h = m / 2;
        for (long i = 0; i <= h; ++i) {
            SymbolicValue c = coef * binomial(h, i) * (cut - b).pow(h - i);
            insert(PuiseuxKey{cut, 2 * i, false, BigRational(0)}, -c);
        }
    }

    PiecewisePuiseux operator-() const {
        PiecewisePuiseux r(hi_);
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    PiecewisePuiseux& operator+=(const PiecewisePuiseux& o) {
        if (o.hi_ > hi_) hi_ = o.hi_;
        for (const auto& [k, c] : o.terms_) insert(k, c);
        return *this;
    }
    PiecewisePuiseux& operator-=(const PiecewisePuiseux& o) { return *this += -o; }
    friend PiecewisePuiseux operator+(PiecewisePuiseux a, const PiecewisePuiseux& b) {
        return a += b;
    }
    friend PiecewisePuiseux operator-(PiecewisePuiseux a, const PiecewisePuiseux& b) {
        return a -= b;
    }

    PiecewisePuiseux& operator*=(const SymbolicValue& s) {
        PiecewisePuiseux r(hi_);
        for (const auto& [k, c] : terms_) r.insert(k, c * s);
        return *this = r;
    }
    friend PiecewisePuiseux operator*(PiecewisePuiseux a, const SymbolicValue& s) {
        return a *= s;
    }
    friend PiecewisePuiseux operator*(const SymbolicValue& s, PiecewisePuiseux a) {
        return a *= s;
    }

    friend bool operator==(const PiecewisePuiseux& a, const PiecewisePuiseux& b) {
        return a.hi_ == b.hi_ && a.terms_ == b.terms_;
    }

    // The density with the variable substituted t -> scale*t, times the
    // Jacobian `scale`, i.e. the law of X/scale if this is the law of X.
    PiecewisePuiseux rescaled(const BigRational& scale) const;

    double evaluate(double t) const;

    // Numeric CDF: integral of the density from 0 to t.
    double cdf(double t) const;

    // Exact integral over the support of t^k times the function.
    SymbolicValue moment(unsigned k) const;

    std::vector<BigRational> breakpoints() const;

    struct TermView {
        SymbolicValue coef;
        BigRational b;
        long m;
        bool has_cut;
        BigRational cut;
    };
    std::vector<TermView> terms() const {
        std::vector<TermView> v;
        v.reserve(terms_.size());
        for (const auto& [k, c] : terms_) v.push_back({c, k.b, k.m, k.has_cut, k.cut});
        return v;
    }

    std::string to_string() const;

  private:
    static void check_power(long m) {
        if (m < -1) fail(errc::non_integrable, "piecewise power below -1/2");
    }

    void insert(const PuiseuxKey& k, const SymbolicValue& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<PuiseuxKey, SymbolicValue> terms_;
    BigRational hi_;
};

inline bool symbolic_equal(const PiecewisePuiseux& a, const PiecewisePuiseux& b) {
    return a == b;
}

// Exact equality as functions on (0, support_hi), independent of how the
// density happens to decompose into step and window terms.
bool functionally_equal(const PiecewisePuiseux& a, const PiecewisePuiseux& b);

inline SymbolicValue piecewise_moment(const PiecewisePuiseux& f, unsigned k) {
    return f.moment(k);
}

}  // namespace rmx
