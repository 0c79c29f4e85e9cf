#pragma once

#include <string>
#include <vector>

#include "rmx/rational.hpp"
#include "rmx/symbolic.hpp"

namespace rmx {

// Dense univariate polynomial over an exact coefficient ring R (BigRational
// or SymbolicValue). Coefficients ascend by degree; the zero polynomial has
// degree -1.
template <class R>
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::string var) : var_(std::move(var)) {}
    Poly(std::initializer_list<R> coefs, std::string var = "x")
        : c_(coefs), var_(std::move(var)) {
        strip();
    }

    static Poly constant(const R& v, std::string var = "x") {
        Poly p(std::move(var));
        p.c_.push_back(v);
        p.strip();
        return p;
    }

    // c * x^k
    static Poly monomial(const R& c, size_t k, std::string var = "x") {
        Poly p(std::move(var));
        p.c_.assign(k + 1, R(0));
        p.c_[k] = c;
        p.strip();
        return p;
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::string& var() const { return var_; }

    const R& coef(size_t i) const {
        static const R zero = R(0);
        return i < c_.size() ? c_[i] : zero;
    }

    void set_coef(size_t i, const R& v) {
        if (i >= c_.size()) c_.resize(i + 1, R(0));
        c_[i] = v;
        strip();
    }

    Poly operator-() const {
        Poly p = *this;
        for (auto& c : p.c_) c = -c;
        return p;
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        strip();
        return *this;
    }
    Poly& operator-=(const Poly& o) { return *this += -o; }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly(a.var_);
        Poly r(a.var_);
        r.c_.assign(a.c_.size() + b.c_.size() - 1, R(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        r.strip();
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly& operator*=(const R& s) {
        for (auto& c : c_) c = c * s;
        strip();
        return *this;
    }
    friend Poly operator*(Poly a, const R& s) { return a *= s; }
    friend Poly operator*(const R& s, Poly a) { return a *= s; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    template <class T>
    T eval(const T& x) const {
        T acc(0);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + T(c_[i]);
        return acc;
    }

    double eval_double(double x) const {
        double acc = 0;
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + coef_double(c_[i]);
        return acc;
    }

    Poly derivative() const {
        Poly p(var_);
        if (c_.size() <= 1) return p;
        p.c_.resize(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) p.c_[i - 1] = c_[i] * R(static_cast<long>(i));
        return p;
    }

    // p(x + a), exact.
    Poly shifted(const R& a) const {
        Poly r(var_);
        for (size_t i = c_.size(); i-- > 0;) {
            r *= Poly({a, R(1)}, var_);
            r += constant(c_[i], var_);
        }
        return r;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (is_zero_coef(c_[i])) continue;
            if (!out.empty()) out += " + ";
            out += coef_string(c_[i]);
            if (i >= 1) out += "*" + var_;
            if (i >= 2) out += "^" + std::to_string(i);
        }
        return out;
    }

  private:
    static bool is_zero_coef(const R& c) { return c.is_zero(); }
    static double coef_double(const BigRational& c) { return c.to_double(); }
    static double coef_double(const SymbolicValue& c) { return c.to_double(); }
    static std::string coef_string(const R& c) { return "(" + c.to_string() + ")"; }

    void strip() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<R> c_;
    std::string var_ = "x";
};

using UniPoly = Poly<BigRational>;
using SymPoly = Poly<SymbolicValue>;

}  // namespace rmx
