#pragma once

#include <map>
#include <string>
#include <vector>

#include "rmx/rational.hpp"
#include "rmx/symbolic.hpp"

namespace rmx {

// One error-function factor erf(sqrt(q*s/2))^p with positive integer q, p.
struct ErfFactor {
    long q = 1;
    long p = 1;
    auto operator<=>(const ErfFactor&) const = default;
};

// Sorted by q, powers merged, p >= 1 throughout.
using ErfSet = std::vector<ErfFactor>;

ErfSet erfset_normalize(ErfSet e);
ErfSet erfset_merge(const ErfSet& a, const ErfSet& b);
// Removes one power of erfs[i]; adds one power of q (pass addQ = 0 to skip).
ErfSet erfset_step(const ErfSet& e, size_t i, long addQ);

// Key of an ordinary term coef * s^(m/2) * exp(-rate*s) * prod erf factors.
struct ErfTermKey {
    long m = 0;
    BigRational rate;
    ErfSet erfs;

    friend bool operator==(const ErfTermKey&, const ErfTermKey&) = default;
    friend bool operator<(const ErfTermKey& x, const ErfTermKey& y) {
        if (x.rate != y.rate) return x.rate < y.rate;
        if (x.m != y.m) return x.m < y.m;
        return x.erfs < y.erfs;
    }
};

// Key of a deferred definite integral ("atom"): the function
//   s^(m/2) * exp(-rate*s) * Integral_0^s x^(-1/2) exp(-a x) prod erf dx.
// Atoms appear when an antiderivative leaves the closed algebra; they are
// legitimate intermediate values but must cancel before finalization.
struct ErfAtomKey {
    long m = 0;
    BigRational rate;
    BigRational a;
    ErfSet erfs;

    friend bool operator==(const ErfAtomKey&, const ErfAtomKey&) = default;
    friend bool operator<(const ErfAtomKey& x, const ErfAtomKey& y) {
        if (x.rate != y.rate) return x.rate < y.rate;
        if (x.m != y.m) return x.m < y.m;
        if (x.a != y.a) return x.a < y.a;
        return x.erfs < y.erfs;
    }
};

// Finite sum of exponential/power/erf terms in s, closed under
// differentiation and (within the documented rule table) integration over
// [0, s]. Values are canonical at all times: identical keys merged, zero
// coefficients dropped.
class ErfExpoSum {
  public:
    ErfExpoSum() = default;

    static ErfExpoSum term(const SymbolicValue& coef, long m, const BigRational& rate,
                           ErfSet erfs = {}) {
        ErfExpoSum f;
        f.add_term(ErfTermKey{m, rate, erfset_normalize(std::move(erfs))}, coef);
        return f;
    }
    static ErfExpoSum one() { return term(SymbolicValue(1), 0, BigRational(0)); }

    // The deferred base integral Integral_0^s x^(-1/2) e^(-a x) prod erf dx
    // (an atom with a trivial envelope).
    static ErfExpoSum deferred(const SymbolicValue& coef, const BigRational& a, ErfSet erfs) {
        ErfExpoSum f;
        f.add_atom(ErfAtomKey{0, BigRational(0), a, erfset_normalize(std::move(erfs))}, coef);
        return f;
    }

    bool is_zero() const { return terms_.empty() && atoms_.empty(); }
    bool has_atoms() const { return !atoms_.empty(); }

    void assert_no_atoms(const std::string& context) const {
        if (has_atoms())
            fail(errc::unsupported_term,
                 context + ": uncancelled deferred integrals remain: " + to_string());
    }

    ErfExpoSum operator-() const {
        ErfExpoSum r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        for (const auto& [k, c] : atoms_) r.atoms_.emplace(k, -c);
        return r;
    }

    ErfExpoSum& operator+=(const ErfExpoSum& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        for (const auto& [k, c] : o.atoms_) add_atom(k, c);
        return *this;
    }
    ErfExpoSum& operator-=(const ErfExpoSum& o) { return *this += -o; }
    friend ErfExpoSum operator+(ErfExpoSum a, const ErfExpoSum& b) { return a += b; }
    friend ErfExpoSum operator-(ErfExpoSum a, const ErfExpoSum& b) { return a -= b; }

    friend ErfExpoSum operator*(const ErfExpoSum& a, const ErfExpoSum& b);

    ErfExpoSum& operator*=(const ErfExpoSum& o) { return *this = *this * o; }

    ErfExpoSum& operator*=(const SymbolicValue& s) {
        if (s.is_zero()) return *this = ErfExpoSum();
        ErfExpoSum r;
        for (const auto& [k, c] : terms_) r.add_term(k, c * s);
        for (const auto& [k, c] : atoms_) r.add_atom(k, c * s);
        return *this = r;
    }
    friend ErfExpoSum operator*(ErfExpoSum a, const SymbolicValue& s) { return a *= s; }
    friend ErfExpoSum operator*(const SymbolicValue& s, ErfExpoSum a) { return a *= s; }

    ErfExpoSum& operator*=(const BigRational& s) { return *this *= SymbolicValue(s); }
    friend ErfExpoSum operator*(ErfExpoSum a, const BigRational& s) { return a *= s; }
    friend ErfExpoSum operator*(const BigRational& s, ErfExpoSum a) { return a *= s; }

    // Multiplies by s^(dm/2).
    ErfExpoSum shifted_power(long dm) const {
        ErfExpoSum r;
        for (const auto& [k, c] : terms_) r.add_term(ErfTermKey{k.m + dm, k.rate, k.erfs}, c);
        for (const auto& [k, c] : atoms_)
            r.add_atom(ErfAtomKey{k.m + dm, k.rate, k.a, k.erfs}, c);
        return r;
    }

    friend bool operator==(const ErfExpoSum& a, const ErfExpoSum& b) {
        return a.terms_ == b.terms_ && a.atoms_ == b.atoms_;
    }

    ErfExpoSum differentiate() const;

    // Integral over [0, s] via the documented rule table. The input must be
    // atom-free; outputs may contain deferred atoms (see ErfAtomKey).
    ErfExpoSum antiderive_on_interval() const;

    double eval(double s) const;

    struct TermView {
        SymbolicValue coef;
        long m;
        BigRational rate;
        ErfSet erfs;
    };
    std::vector<TermView> terms() const {
        std::vector<TermView> v;
        v.reserve(terms_.size());
        for (const auto& [k, c] : terms_) v.push_back({c, k.m, k.rate, k.erfs});
        return v;
    }
    size_t term_count() const { return terms_.size(); }
    size_t atom_count() const { return atoms_.size(); }

    std::string to_string() const;

  private:
    void add_term(const ErfTermKey& k, const SymbolicValue& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    void add_atom(const ErfAtomKey& k, const SymbolicValue& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = atoms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) atoms_.erase(it);
        }
    }

    std::map<ErfTermKey, SymbolicValue> terms_;
    std::map<ErfAtomKey, SymbolicValue> atoms_;
};

inline bool symbolic_equal(const ErfExpoSum& a, const ErfExpoSum& b) { return a == b; }

}  // namespace rmx
