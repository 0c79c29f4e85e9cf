#include "rmx/crossover.hpp"

#include <algorithm>
#include <cmath>

#include "rmx/quadrature.hpp"

namespace rmx {

namespace {

long double bracket_term(long double a, long double b, long double c) {
    long double a2 = a * a;
    long double bc2 = b * b * c * c;
    long double den = a2 + bc2;
    return b * (5.0L * a2 + 3.0L * bc2) / (a2 * a2 * den * den);
}

constexpr long double kPi = 3.141592653589793238462643383279503L;

long double ratio_pdf_ld(long double alpha, long double r) {
    long double a = sqrtl((r * r + r + 1.0L) / 6.0L);
    long double one_m_a2 = (1.0L - alpha) * (1.0L + alpha);
    long double b = sqrtl(one_m_a2 / (8.0L * alpha * alpha));

    long double bracket = bracket_term(a, b, 1.0L) + r * bracket_term(a, b, r) -
                          (r + 1.0L) * bracket_term(a, b, r + 1.0L);
    long double a3 = a * a * a;
    long double arg =
        b * b * b * r * (r + 1.0L) / (a3 + a * b * b * (r * r + r + 1.0L));
    bracket += 3.0L / (a3 * a * a) * atanl(arg);

    long double pref = r * (r + 1.0L) /
                       (16.0L * sqrtl(6.0L) * kPi * one_m_a2 * sqrtl(one_m_a2));
    return pref * bracket;
}

// Local log-log slope of the ratio density, used to test integrability of
// r^q * pdf before committing to quadrature.
double log_slope(const CrossoverParams& params, double r) {
    double p1 = ratio_pdf(params, r);
    double p2 = ratio_pdf(params, 2.0 * r);
    return std::log(p2 / p1) / std::log(2.0);
}

}  // namespace

double ratio_pdf(const CrossoverParams& params, double r) {
    params.validate();
    if (!(r > 0.0)) fail(errc::domain_error, "spacing ratio must be positive");

    long double alpha = params.alpha;
    if (alpha == 0.0L)
        alpha = kAlphaEndpointOffset;
    else if (alpha == 1.0L)
        alpha = 1.0L - kAlphaEndpointOffset;

    long double v = ratio_pdf_ld(alpha, static_cast<long double>(r));
    if (v < 0.0L) v = 0.0L;
    return static_cast<double>(v);
}

double ratio_fractional_moment(const CrossoverParams& params, double q) {
    params.validate();

    // The tails behave like r^2 at the origin and r^-4 at infinity for every
    // interior alpha, so the moment exists only for -3 < q < 3.  The slopes
    // are measured rather than assumed.
    double s_hi = log_slope(params, 1e5);
    if (q + s_hi >= -1.0 - 0.02)
        fail(errc::divergent, "r^q tail at infinity is not integrable");
    double s_lo = log_slope(params, 1e-6);
    if (q + s_lo <= -1.0 + 0.02)
        fail(errc::divergent, "r^q tail at the origin is not integrable");

    auto pdf = [&](double r) { return ratio_pdf(params, r); };

    // Power substitutions flatten the endpoint behaviour when q sits close to
    // either edge of the integrability window.
    long ml = std::clamp(
        static_cast<long>(std::ceil(2.0 / (q + s_lo + 1.0))), 1L, 32L);
    long mu = std::clamp(
        static_cast<long>(std::ceil(2.0 / (-q - s_hi - 1.0))), 1L, 32L);

    auto lower = [&](double u) {
        double r = std::pow(u, static_cast<double>(ml));
        if (r <= 0.0) return 0.0;
        return std::pow(r, q) * pdf(r) * static_cast<double>(ml) *
               std::pow(u, static_cast<double>(ml - 1));
    };
    auto upper = [&](double v) {
        double w = std::pow(v, static_cast<double>(mu));
        if (w <= 0.0) return 0.0;
        return std::pow(w, -q - 2.0) * pdf(1.0 / w) * static_cast<double>(mu) *
               std::pow(v, static_cast<double>(mu - 1));
    };
    return integrate_adaptive(lower, 0.0, 1.0, 5e-11) +
           integrate_adaptive(upper, 0.0, 1.0, 5e-11);
}

double eigvec_component_pdf_eps(double epsilon, double x) {
    if (!(epsilon > 0.0)) fail(errc::domain_error, "epsilon must be positive");
    if (!(x > 0.0)) fail(errc::domain_error, "component value must be positive");

    auto f = [&](double phi) {
        double sh = std::sin(0.5 * phi);
        double sn = std::sin(phi);
        double t = epsilon + 2.0 * x * sh * sh;
        double w = t / (sn * sn);
        double e = epsilon - w;
        if (e < -700.0) return 0.0;
        return std::exp(e) * (2.0 * w + 1.0) / (t * std::sqrt(t));
    };

    // The csc^2 growth at both endpoints is killed by the exponential; the
    // split keeps the adaptive panels away from straddling the peak.
    double half = 0.5 * M_PI;
    double integral = integrate_adaptive(f, 0.0, half, 1e-10) +
                      integrate_adaptive(f, half, M_PI, 1e-10);
    return epsilon / (2.0 * std::sqrt(M_PI)) * integral;
}

}  // namespace rmx
