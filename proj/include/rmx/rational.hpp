#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "rmx/errors.hpp"

namespace rmx {

// Arbitrary-precision rational, always reduced, denominator always positive.
// Wraps mpq_class so the canonicalization invariant can never be skipped.
class BigRational {
  public:
    BigRational() : v_(0) {}
    BigRational(long n) : v_(n) {}  // NOLINT: implicit by design
    BigRational(const mpz_class& n) : v_(n) {}

    BigRational(long n, long d) : BigRational(mpz_class(n), mpz_class(d)) {}

    BigRational(const mpz_class& n, const mpz_class& d) {
        if (d == 0) fail(errc::zero_divisor, "rational with zero denominator");
        v_ = mpq_class(n, d);
        v_.canonicalize();
    }

    // Parses "n" or "n/d".
    static BigRational from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) fail(errc::bad_arguments, "unparsable rational '" + s + "'");
        if (q.get_den() == 0) fail(errc::zero_divisor, "rational with zero denominator");
        q.canonicalize();
        BigRational r;
        r.v_ = q;
        return r;
    }

    const mpz_class num() const { return v_.get_num(); }
    const mpz_class den() const { return v_.get_den(); }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    // Floor of the rational as an integer.
    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
        return q;
    }

    long to_long() const {
        if (!is_integer()) fail(errc::domain_error, "rational is not an integer");
        if (!v_.get_num().fits_slong_p()) fail(errc::too_large, "integer out of long range");
        return v_.get_num().get_si();
    }

    double to_double() const { return v_.get_d(); }

    std::string to_string() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    BigRational operator-() const {
        BigRational r;
        r.v_ = -v_;
        return r;
    }

    BigRational& operator+=(const BigRational& o) { v_ += o.v_; return *this; }
    BigRational& operator-=(const BigRational& o) { v_ -= o.v_; return *this; }
    BigRational& operator*=(const BigRational& o) { v_ *= o.v_; return *this; }
    BigRational& operator/=(const BigRational& o) {
        if (o.is_zero()) fail(errc::zero_divisor, "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
    friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
    friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
    friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }

    friend bool operator==(const BigRational& a, const BigRational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigRational& a, const BigRational& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigRational& a, const BigRational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigRational& a, const BigRational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigRational& a, const BigRational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigRational& a, const BigRational& b) { return a.v_ >= b.v_; }

    BigRational abs() const { return sign() < 0 ? -*this : *this; }

    BigRational inv() const {
        if (is_zero()) fail(errc::zero_divisor, "inverse of zero");
        return BigRational(1) / *this;
    }

    BigRational pow(long e) const {
        if (e == 0) return BigRational(1);
        if (is_zero()) {
            if (e < 0) fail(errc::zero_divisor, "zero to a negative power");
            return BigRational(0);
        }
        BigRational base = e < 0 ? inv() : *this;
        unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
        mpz_class n, d;
        mpz_pow_ui(n.get_mpz_t(), base.v_.get_num().get_mpz_t(), k);
        mpz_pow_ui(d.get_mpz_t(), base.v_.get_den().get_mpz_t(), k);
        BigRational r;
        r.v_ = mpq_class(n, d);  // powers of a canonical rational stay canonical
        return r;
    }

    // Exact square root if both numerator and denominator are perfect
    // squares; returns false otherwise.
    bool exact_sqrt(BigRational& out) const {
        if (sign() < 0) return false;
        mpz_class n = v_.get_num(), d = v_.get_den(), rn, rd;
        if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
        if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return false;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        out = BigRational(rn, rd);
        return true;
    }

  private:
    mpq_class v_;
};

inline mpz_class factorial_z(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline BigRational factorial(unsigned long n) { return BigRational(factorial_z(n)); }

inline BigRational binomial(long n, long k) {
    if (k < 0) return BigRational(0);
    if (n >= 0 && k > n) return BigRational(0);
    // Works for negative n as well via the falling-factorial definition.
    BigRational r(1);
    for (long i = 0; i < k; ++i) r *= BigRational(n - i, i + 1);
    return r;
}

// Rising factorial (a)_k = a (a+1) ... (a+k-1).
inline BigRational pochhammer(const BigRational& a, unsigned long k) {
    BigRational r(1);
    for (unsigned long i = 0; i < k; ++i) r *= a + BigRational(static_cast<long>(i));
    return r;
}

}  // namespace rmx
