#include "rmx/erfexpo.hpp"

#include <algorithm>
#include <cmath>

#include "rmx/quadrature.hpp"

namespace rmx {

ErfSet erfset_normalize(ErfSet e) {
    std::sort(e.begin(), e.end());
    ErfSet out;
    for (const auto& f : e) {
        if (f.q <= 0) fail(errc::unsupported_term, "erf argument index must be positive");
        if (f.p == 0) continue;
        if (f.p < 0) fail(errc::unsupported_term, "negative erf power");
        if (!out.empty() && out.back().q == f.q)
            out.back().p += f.p;
        else
            out.push_back(f);
    }
    return out;
}

ErfSet erfset_merge(const ErfSet& a, const ErfSet& b) {
    ErfSet e = a;
    e.insert(e.end(), b.begin(), b.end());
    return erfset_normalize(std::move(e));
}

ErfSet erfset_step(const ErfSet& e, size_t i, long addQ) {
    ErfSet out = e;
    out[i].p -= 1;
    if (addQ > 0) out.push_back({addQ, 1});
    return erfset_normalize(std::move(out));
}

namespace {

// sqrt(q / (2 pi)) as an exact symbolic constant
SymbolicValue sqrt_q_over_2pi(long q) {
    return SymbolicValue::sqrt_rational(BigRational(q, 2)) * SymbolicValue::pi_pow_half(-1);
}

// sqrt(pi / a)
SymbolicValue sqrt_pi_over(const BigRational& a) {
    return SymbolicValue::pi_pow_half(1) * SymbolicValue::sqrt_rational(a.inv());
}

long rate_to_q(const BigRational& rho, const char* what) {
    BigRational q = rho * BigRational(2);
    if (!q.is_integer())
        fail(errc::unsupported_term,
             std::string(what) + ": exponential rate 2*rho is not an integer");
    return q.to_long();
}

}  // namespace

ErfExpoSum operator*(const ErfExpoSum& a, const ErfExpoSum& b) {
    ErfExpoSum r;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_)
            r.add_term(ErfTermKey{ka.m + kb.m, ka.rate + kb.rate, erfset_merge(ka.erfs, kb.erfs)},
                       ca * cb);
        for (const auto& [kb, cb] : b.atoms_) {
            if (!ka.erfs.empty())
                fail(errc::unsupported_term, "erf factor times deferred integral");
            r.add_atom(ErfAtomKey{ka.m + kb.m, ka.rate + kb.rate, kb.a, kb.erfs}, ca * cb);
        }
    }
    for (const auto& [ka, ca] : a.atoms_) {
        for (const auto& [kb, cb] : b.terms_) {
            if (!kb.erfs.empty())
                fail(errc::unsupported_term, "erf factor times deferred integral");
            r.add_atom(ErfAtomKey{ka.m + kb.m, ka.rate + kb.rate, ka.a, ka.erfs}, ca * cb);
        }
        if (!b.atoms_.empty())
            fail(errc::unsupported_term, "product of two deferred integrals");
    }
    return r;
}

ErfExpoSum ErfExpoSum::differentiate() const {
    ErfExpoSum r;
    for (const auto& [k, c] : terms_) {
        if (k.m != 0) r.add_term(ErfTermKey{k.m - 2, k.rate, k.erfs}, c * BigRational(k.m, 2));
        if (!k.rate.is_zero()) r.add_term(k, c * -k.rate);
        for (size_t i = 0; i < k.erfs.size(); ++i) {
            const auto& f = k.erfs[i];
            SymbolicValue coef = c * BigRational(f.p) * sqrt_q_over_2pi(f.q);
            r.add_term(ErfTermKey{k.m - 1, k.rate + BigRational(f.q, 2), erfset_step(k.erfs, i, 0)},
                       coef);
        }
    }
    for (const auto& [k, c] : atoms_) {
        if (k.m != 0) r.add_atom(ErfAtomKey{k.m - 2, k.rate, k.a, k.erfs}, c * BigRational(k.m, 2));
        if (!k.rate.is_zero()) r.add_atom(k, c * -k.rate);
        // derivative of the integral itself: the integrand at s
        r.add_term(ErfTermKey{k.m - 1, k.rate + k.a, k.erfs}, c);
    }
    return r;
}

namespace {

constexpr int kMaxReductionDepth = 64;

ErfExpoSum antiderive_term(const SymbolicValue& coef, long m, const BigRational& rho,
                           const ErfSet& erfs, int depth) {
    if (depth <= 0) fail(errc::unsupported_term, "antiderivative reduction did not terminate");
    if (m < -1) fail(errc::non_integrable, "power below -1/2 at the origin");

    if (erfs.empty()) {
        if (m % 2 == 0) {
            long h = m / 2;
            if (rho.is_zero())
                return ErfExpoSum::term(coef / BigRational(h + 1), m + 2, BigRational(0));
            // int_0^s x^h e^(-rho x) dx = h!/rho^(h+1) - e^(-rho s) sum_k h!/k! s^k/rho^(h+1-k)
            ErfExpoSum out;
            BigRational hf = factorial(static_cast<unsigned long>(h));
            out += ErfExpoSum::term(coef * (hf / rho.pow(h + 1)), 0, BigRational(0));
            for (long k = 0; k <= h; ++k) {
                BigRational c = hf / (factorial(static_cast<unsigned long>(k)) * rho.pow(h + 1 - k));
                out -= ErfExpoSum::term(coef * c, 2 * k, rho);
            }
            return out;
        }
        if (m == -1) {
            if (rho.is_zero()) return ErfExpoSum::term(coef * BigRational(2), 1, BigRational(0));
            long q = rate_to_q(rho, "half-power base rule");
            SymbolicValue c = coef * SymbolicValue::sqrt_rational(BigRational(2, q)) *
                              SymbolicValue::pi_pow_half(1);
            return ErfExpoSum::term(c, 0, BigRational(0), {{q, 1}});
        }
        // odd m >= 1
        if (rho.is_zero())
            return ErfExpoSum::term(coef * BigRational(2, m + 2), m + 2, BigRational(0));
        ErfExpoSum out = ErfExpoSum::term(coef * -rho.inv(), m, rho);
        out += antiderive_term(coef * BigRational(m, 2) * rho.inv(), m - 2, rho, erfs, depth - 1);
        return out;
    }

    // erf factors present
    if (m >= 1 || (m == 0 && rho.is_zero())) {
        if (rho.is_zero()) {
            // by parts, integrating the power factor
            BigRational pre(2, m + 2);
            ErfExpoSum out = ErfExpoSum::term(coef * pre, m + 2, BigRational(0), erfs);
            for (size_t i = 0; i < erfs.size(); ++i) {
                const auto& f = erfs[i];
                SymbolicValue c = coef * pre * BigRational(f.p) * sqrt_q_over_2pi(f.q);
                out -= antiderive_term(c, m + 1, BigRational(f.q, 2), erfset_step(erfs, i, 0),
                                       depth - 1);
            }
            return out;
        }
        // solve the by-parts identity for the integral at power m (m >= 1 here)
        ErfExpoSum out = ErfExpoSum::term(coef * -rho.inv(), m, rho, erfs);
        out += antiderive_term(coef * BigRational(m, 2) * rho.inv(), m - 2, rho, erfs, depth - 1);
        for (size_t i = 0; i < erfs.size(); ++i) {
            const auto& f = erfs[i];
            SymbolicValue c = coef * rho.inv() * BigRational(f.p) * sqrt_q_over_2pi(f.q);
            out += antiderive_term(c, m - 1, rho + BigRational(f.q, 2), erfset_step(erfs, i, 0),
                                   depth - 1);
        }
        return out;
    }

    if (m == 0) {
        // rho > 0: by parts, integrating the exponential
        ErfExpoSum out = ErfExpoSum::term(coef * -rho.inv(), 0, rho, erfs);
        for (size_t i = 0; i < erfs.size(); ++i) {
            const auto& f = erfs[i];
            SymbolicValue c = coef * rho.inv() * BigRational(f.p) * sqrt_q_over_2pi(f.q);
            out += antiderive_term(c, -1, rho + BigRational(f.q, 2), erfset_step(erfs, i, 0),
                                   depth - 1);
        }
        return out;
    }

    // m == -1 with erf factors: the base family
    const BigRational& a = rho;
    if (a.is_zero()) {
        ErfExpoSum out = ErfExpoSum::term(coef * BigRational(2), 1, BigRational(0), erfs);
        for (size_t i = 0; i < erfs.size(); ++i) {
            const auto& f = erfs[i];
            SymbolicValue c = coef * BigRational(2 * f.p) * sqrt_q_over_2pi(f.q);
            out -= antiderive_term(c, 0, BigRational(f.q, 2), erfset_step(erfs, i, 0), depth - 1);
        }
        return out;
    }
    long Q = rate_to_q(a, "erf base rule");
    long pQ = 0;
    for (const auto& f : erfs)
        if (f.q == Q) pQ = f.p;
    if (pQ == 0) {
        // Outside the closed algebra: defer. These must cancel in full sums.
        return ErfExpoSum::deferred(coef, a, erfs);
    }
    BigRational denom(pQ + 1);
    ErfSet bumped = erfset_merge(erfs, {{Q, 1}});
    ErfExpoSum out = ErfExpoSum::term(coef * sqrt_pi_over(a) / denom, 0, BigRational(0), bumped);
    for (size_t i = 0; i < erfs.size(); ++i) {
        const auto& f = erfs[i];
        if (f.q == Q) continue;
        SymbolicValue c =
            coef * sqrt_pi_over(a) * BigRational(f.p) * sqrt_q_over_2pi(f.q) / denom;
        out -= antiderive_term(c, -1, BigRational(f.q, 2), erfset_step(erfs, i, Q), depth - 1);
    }
    return out;
}

}  // namespace

ErfExpoSum ErfExpoSum::antiderive_on_interval() const {
    assert_no_atoms("antiderive_on_interval");
    ErfExpoSum out;
    for (const auto& [k, c] : terms_) {
        if (k.rate.sign() < 0) fail(errc::unsupported_term, "negative exponential rate");
        out += antiderive_term(c, k.m, k.rate, k.erfs, kMaxReductionDepth);
    }
    return out;
}

double ErfExpoSum::eval(double s) const {
    double total = 0;
    for (const auto& [k, c] : terms_) {
        double v = c.to_double();
        if (k.m != 0) v *= std::pow(s, 0.5 * static_cast<double>(k.m));
        v *= std::exp(-k.rate.to_double() * s);
        for (const auto& f : k.erfs)
            v *= std::pow(std::erf(std::sqrt(0.5 * static_cast<double>(f.q) * s)),
                          static_cast<double>(f.p));
        total += v;
    }
    for (const auto& [k, c] : atoms_) {
        double a = k.a.to_double();
        ErfSet erfs = k.erfs;
        // integral transformed by x = u^2 to remove the endpoint singularity
        auto g = [a, &erfs](double u) {
            double v = 2.0 * std::exp(-a * u * u);
            for (const auto& f : erfs)
                v *= std::pow(std::erf(std::sqrt(0.5 * static_cast<double>(f.q)) * u),
                              static_cast<double>(f.p));
            return v;
        };
        double v = integrate_adaptive(g, 0.0, std::sqrt(s), 1e-13);
        v *= c.to_double();
        if (k.m != 0) v *= std::pow(s, 0.5 * static_cast<double>(k.m));
        v *= std::exp(-k.rate.to_double() * s);
        total += v;
    }
    return total;
}

std::string ErfExpoSum::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    auto join = [&out](const std::string& piece) {
        if (out.empty())
            out = piece;
        else
            out += " + " + piece;
    };
    auto power_str = [](long m) {
        if (m == 0) return std::string();
        if (m % 2 == 0) return "*s^" + std::to_string(m / 2);
        return "*s^(" + std::to_string(m) + "/2)";
    };
    auto erf_str = [](const ErfSet& erfs) {
        std::string r;
        for (const auto& f : erfs) {
            r += "*erf(sqrt(" + std::to_string(f.q) + "s/2))";
            if (f.p != 1) r += "^" + std::to_string(f.p);
        }
        return r;
    };
    for (const auto& [k, c] : terms_) {
        std::string piece = "(" + c.to_string() + ")" + power_str(k.m);
        if (!k.rate.is_zero()) piece += "*exp(-" + k.rate.to_string() + "s)";
        piece += erf_str(k.erfs);
        join(piece);
    }
    for (const auto& [k, c] : atoms_) {
        std::string piece = "(" + c.to_string() + ")" + power_str(k.m);
        if (!k.rate.is_zero()) piece += "*exp(-" + k.rate.to_string() + "s)";
        piece += "*DEFER[x^(-1/2)*exp(-" + k.a.to_string() + "x)" + erf_str(k.erfs) + "]";
        join(piece);
    }
    return out;
}

}  // namespace rmx
