#include "rmx/puiseux.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace rmx {

PiecewisePuiseux PiecewisePuiseux::rescaled(const BigRational& scale) const {
    if (scale.sign() <= 0) fail(errc::domain_error, "rescale factor must be positive");
    PiecewisePuiseux r(hi_ / scale);
    for (const auto& [k, c] : terms_) {
        // (scale*t - b)^(m/2) = scale^(m/2) * (t - b/scale)^(m/2)
        SymbolicValue coef = c * pow_half(scale, k.m) * SymbolicValue(scale);
        if (k.has_cut)
            r.add_window(coef, k.b / scale, k.m, k.cut / scale);
        else
            r.add_term(coef, k.b / scale, k.m);
    }
    return r;
}

double PiecewisePuiseux::evaluate(double t) const {
    if (t <= 0 || t > hi_.to_double()) return 0.0;
    double total = 0;
    for (const auto& [k, c] : terms_) {
        double b = k.b.to_double();
        if (t <= b) continue;
        if (k.has_cut && t >= k.cut.to_double()) continue;
        total += c.to_double() * std::pow(t - b, 0.5 * static_cast<double>(k.m));
    }
    return total;
}

double PiecewisePuiseux::cdf(double t) const {
    if (t <= 0) return 0.0;
    t = std::min(t, hi_.to_double());
    double total = 0;
    for (const auto& [k, c] : terms_) {
        double b = k.b.to_double();
        if (t <= b) continue;
        double upper = t;
        if (k.has_cut) upper = std::min(upper, k.cut.to_double());
        double e = 0.5 * static_cast<double>(k.m) + 1.0;
        total += c.to_double() * std::pow(upper - b, e) / e;
    }
    return total;
}

SymbolicValue PiecewisePuiseux::moment(unsigned k) const {
    SymbolicValue total;
    for (const auto& [key, c] : terms_) {
        BigRational upper = hi_;
        if (key.has_cut && key.cut < upper) upper = key.cut;
        if (upper <= key.b) continue;
        BigRational w = upper - key.b;
        // t^k = ((t-b) + b)^k expanded binomially
        for (unsigned i = 0; i <= k; ++i) {
            BigRational exponent2 = BigRational(2 * static_cast<long>(i) + key.m + 2, 2);
            SymbolicValue piece = c * binomial(static_cast<long>(k), static_cast<long>(i)) *
                                  key.b.pow(static_cast<long>(k - i)) *
                                  pow_half(w, 2 * static_cast<long>(i) + key.m + 2) /
                                  exponent2;
            total += piece;
        }
    }
    return total;
}

std::vector<BigRational> PiecewisePuiseux::breakpoints() const {
    std::vector<BigRational> pts;
    pts.push_back(BigRational(0));
    for (const auto& [k, c] : terms_) {
        pts.push_back(k.b);
        if (k.has_cut) pts.push_back(k.cut);
    }
    pts.push_back(hi_);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

bool functionally_equal(const PiecewisePuiseux& a, const PiecewisePuiseux& b) {
    if (a.support_hi() != b.support_hi()) return false;
    PiecewisePuiseux d = a - b;
    if (d.is_zero()) return true;
    const auto terms = d.terms();

    std::vector<BigRational> brk = d.breakpoints();
    for (size_t i = 0; i + 1 < brk.size(); ++i) {
        const BigRational& lo = brk[i];
        const BigRational& hi = brk[i + 1];
        if (hi > d.support_hi()) break;

        // On (lo, hi) the even powers form one polynomial while each odd
        // power is analytically independent through its branch point.
        std::map<long, SymbolicValue> poly;
        std::map<std::pair<BigRational, long>, SymbolicValue> odd;
        for (const auto& t : terms) {
            bool active = t.b <= lo && (!t.has_cut || t.cut >= hi);
            if (!active) continue;
            if (t.m % 2 != 0) {
                auto [it, fresh] = odd.emplace(std::make_pair(t.b, t.m), t.coef);
                if (!fresh) it->second += t.coef;
                continue;
            }
            long h = t.m / 2;
            for (long j = 0; j <= h; ++j) {
                SymbolicValue c = t.coef * binomial(h, j) * (-t.b).pow(h - j);
                auto [it, fresh] = poly.emplace(j, c);
                if (!fresh) it->second += c;
            }
        }
        for (const auto& [deg, c] : poly)
            if (!c.is_zero()) return false;
        for (const auto& [key, c] : odd)
            if (!c.is_zero()) return false;
    }
    return true;
}

std::string PiecewisePuiseux::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
        std::string piece = "(" + c.to_string() + ")";
        if (k.m != 0) {
            piece += "*(t";
            if (!k.b.is_zero()) piece += "-" + k.b.to_string();
            piece += ")^";
            piece += (k.m % 2 == 0) ? std::to_string(k.m / 2)
                                    : "(" + std::to_string(k.m) + "/2)";
        }
        if (k.has_cut)
            piece += "*win(" + k.b.to_string() + "," + k.cut.to_string() + ")";
        else
            piece += "*step(" + k.b.to_string() + ")";
        out += out.empty() ? piece : " + " + piece;
    }
    return out + "  on [0," + hi_.to_string() + "]";
}

}  // namespace rmx
