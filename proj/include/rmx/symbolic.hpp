#pragma once

#include <compare>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "rmx/rational.hpp"

namespace rmx {

// One basis monomial: pi^(pi2/2) * sqrt(rad) * ln(2)^ln2 * eulergamma^gam,
// with rad a square-free positive integer (1 means no radical). The radical
// slot exists because intermediate antiderivatives carry factors sqrt(2pi/q);
// user-facing values must collapse back to rad in {1, 2}.
struct BasisKey {
    int pi2 = 0;
    unsigned long rad = 1;
    bool ln2 = false;
    bool gam = false;

    auto operator<=>(const BasisKey&) const = default;
};

// Exact linear combination of basis monomials with BigRational coefficients.
// Immutable value semantics; all arithmetic is exact.
class SymbolicValue {
  public:
    SymbolicValue() = default;
    SymbolicValue(long n) { add_term(BasisKey{}, BigRational(n)); }  // NOLINT
    SymbolicValue(const BigRational& r) { add_term(BasisKey{}, r); }  // NOLINT

    static SymbolicValue rational(const BigRational& r) { return SymbolicValue(r); }

    // pi^(k/2)
    static SymbolicValue pi_pow_half(int k) {
        SymbolicValue v;
        v.add_term(BasisKey{k, 1, false, false}, BigRational(1));
        return v;
    }

    static SymbolicValue ln_two() {
        SymbolicValue v;
        v.add_term(BasisKey{0, 1, true, false}, BigRational(1));
        return v;
    }

    static SymbolicValue euler_gamma() {
        SymbolicValue v;
        v.add_term(BasisKey{0, 1, false, true}, BigRational(1));
        return v;
    }

    // Exact sqrt(r) for a positive rational r: sqrt(n/d) = sqrt(n*d)/d.
    static SymbolicValue sqrt_rational(const BigRational& r) {
        if (r.sign() < 0) fail(errc::domain_error, "sqrt of a negative rational");
        if (r.is_zero()) return SymbolicValue();
        mpz_class nd = r.num() * r.den();
        auto [square, radicand] = split_square(nd);
        SymbolicValue v;
        v.add_term(BasisKey{0, radicand, false, false},
                   BigRational(square) / BigRational(r.den()));
        return v;
    }

    // 2^(k/2)
    static SymbolicValue two_pow_half(int k) {
        BigRational even = BigRational(2).pow(k >= 0 ? k / 2 : -((-k + 1) / 2));
        if (k % 2 == 0) return SymbolicValue(even);
        // odd k: 2^(k/2) = 2^((k-1)/2) * sqrt(2), with (k-1)/2 rounded down
        BigRational head = BigRational(2).pow((k - 1) / 2);
        SymbolicValue v;
        v.add_term(BasisKey{0, 2, false, false}, head);
        return v;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == BasisKey{});
    }

    // The coefficient of the trivial monomial (the rational part).
    BigRational rational_part() const {
        auto it = terms_.find(BasisKey{});
        return it == terms_.end() ? BigRational(0) : it->second;
    }

    // Requires is_rational(); returns the value as a BigRational.
    BigRational as_rational() const {
        if (!is_rational()) fail(errc::pi_residue, "value is not rational: " + to_string());
        return rational_part();
    }

    bool has_gamma() const {
        for (const auto& [k, c] : terms_)
            if (k.gam) return true;
        return false;
    }

    void assert_no_gamma(const std::string& context) const {
        if (has_gamma()) fail(errc::gamma_residue, context + ": " + to_string());
    }

    void assert_rational(const std::string& context) const {
        if (!is_rational()) fail(errc::pi_residue, context + ": " + to_string());
    }

    // User-facing values must live in the documented basis: no gamma, no
    // radical other than sqrt(2), pi exponent within +-16 (already enforced).
    void assert_presentable(const std::string& context) const {
        assert_no_gamma(context);
        for (const auto& [k, c] : terms_)
            if (k.rad != 1 && k.rad != 2)
                fail(errc::basis_violation, context + ": leftover radical in " + to_string());
    }

    SymbolicValue operator-() const {
        SymbolicValue r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    SymbolicValue& operator+=(const SymbolicValue& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    SymbolicValue& operator-=(const SymbolicValue& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }

    friend SymbolicValue operator+(SymbolicValue a, const SymbolicValue& b) { return a += b; }
    friend SymbolicValue operator-(SymbolicValue a, const SymbolicValue& b) { return a -= b; }

    friend SymbolicValue operator*(const SymbolicValue& a, const SymbolicValue& b) {
        SymbolicValue r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                auto [k, extra] = mul_keys(ka, kb);
                r.add_term(k, ca * cb * extra);
            }
        return r;
    }

    SymbolicValue& operator*=(const SymbolicValue& o) { return *this = *this * o; }

    SymbolicValue& operator*=(const BigRational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend SymbolicValue operator*(SymbolicValue a, const BigRational& s) { return a *= s; }
    friend SymbolicValue operator*(const BigRational& s, SymbolicValue a) { return a *= s; }

    // Division is defined only by a single-monomial value (sufficient for all
    // normalizations in scope).
    friend SymbolicValue operator/(const SymbolicValue& a, const SymbolicValue& b) {
        if (b.is_zero()) fail(errc::zero_divisor, "symbolic division by zero");
        if (b.terms_.size() != 1)
            fail(errc::basis_violation, "symbolic division by a non-monomial: " + b.to_string());
        const auto& [kb, cb] = *b.terms_.begin();
        if (kb.ln2 || kb.gam)
            fail(errc::basis_violation, "symbolic division by ln2/gamma monomial");
        SymbolicValue r;
        BasisKey inv = kb;
        inv.pi2 = -kb.pi2;
        for (const auto& [ka, ca] : a.terms_) {
            // sqrt(ra)/sqrt(rb) = sqrt(ra*rb)/rb
            auto [k, extra] = mul_keys(ka, inv);
            r.add_term(k, ca / cb * extra / BigRational(static_cast<long>(kb.rad)));
        }
        return r;
    }

    SymbolicValue& operator/=(const BigRational& s) {
        if (s.is_zero()) fail(errc::zero_divisor, "symbolic division by zero");
        for (auto& [k, c] : terms_) c /= s;
        return *this;
    }
    friend SymbolicValue operator/(SymbolicValue a, const BigRational& s) { return a /= s; }

    friend bool operator==(const SymbolicValue& a, const SymbolicValue& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const SymbolicValue& a, const SymbolicValue& b) { return !(a == b); }

    struct Term {
        BasisKey key;
        BigRational coef;
    };
    std::vector<Term> terms() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [k, c] : terms_) out.push_back({k, c});
        return out;
    }

    double to_double() const;

    // Deterministic decimal rendering: round-half-even at `sig_digits`
    // significant digits, plain (non-scientific) notation, trailing zeros in
    // the fractional part stripped.
    std::string decimal(int sig_digits = 30) const;

    std::string to_string() const;

    // n = square^2 * radicand with radicand square-free.
    static std::pair<mpz_class, unsigned long> split_square(const mpz_class& n);

  private:
    static void check_pi_range(int pi2) {
        if (pi2 > 16 || pi2 < -16)
            fail(errc::basis_violation, "pi exponent outside the supported basis");
    }

    // Combines two keys multiplicatively; returns the reduced key and the
    // rational factor extracted from the radical product.
    static std::pair<BasisKey, BigRational> mul_keys(const BasisKey& a, const BasisKey& b) {
        if (a.ln2 && b.ln2) fail(errc::basis_violation, "(ln 2)^2 is outside the basis");
        if (a.gam && b.gam) fail(errc::basis_violation, "gamma^2 is outside the basis");
        if ((a.ln2 && b.gam) || (a.gam && b.ln2))
            fail(errc::basis_violation, "gamma*ln2 is outside the basis");
        BasisKey k;
        k.pi2 = a.pi2 + b.pi2;
        check_pi_range(k.pi2);
        k.ln2 = a.ln2 || b.ln2;
        k.gam = a.gam || b.gam;
        unsigned long g = std::gcd(a.rad, b.rad);
        k.rad = (a.rad / g) * (b.rad / g);
        return {k, BigRational(static_cast<long>(g))};
    }

    void add_term(const BasisKey& k, const BigRational& c) {
        if (c.is_zero()) return;
        check_pi_range(k.pi2);
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<BasisKey, BigRational> terms_;
};

inline bool symbolic_equal(const SymbolicValue& a, const SymbolicValue& b) { return a == b; }

}  // namespace rmx
