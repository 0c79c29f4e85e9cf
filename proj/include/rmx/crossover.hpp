#pragma once

#include <cmath>

#include "rmx/errors.hpp"

namespace rmx {

// The closed ratio-statistic form has 0*inf structure at alpha = 0 and 1;
// exact endpoint requests are evaluated at this offset instead.
inline constexpr double kAlphaEndpointOffset = 1e-4;

// Interpolating ensemble weight sqrt((1-alpha)/2) A + alpha B with A drawn
// from the GOE and B from the GUE; alpha = 0 is pure GOE statistics, alpha = 1
// pure GUE.
struct CrossoverParams {
    double alpha = 0.5;
    long N = 3;

    double a_of_r(double r) const { return std::sqrt((r * r + r + 1.0) / 6.0); }

    double b() const {
        if (!(alpha > 0.0)) fail(errc::domain_error, "b is finite only for alpha > 0");
        return std::sqrt((1.0 - alpha * alpha) / (8.0 * alpha * alpha));
    }

    double epsilon() const { return static_cast<double>(N) * alpha * alpha; }

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0))
            fail(errc::domain_error, "alpha must lie in [0, 1]");
        if (N < 1) fail(errc::domain_error, "N must be positive");
    }
};

// Density of the consecutive-spacing ratio (l3-l2)/(l2-l1) for N = 3.
double ratio_pdf(const CrossoverParams& params, double r);

// int_0^inf r^q ratio_pdf(r) dr by adaptive quadrature with tail splitting;
// throws Divergent outside the integrability window of the tails.
double ratio_fractional_moment(const CrossoverParams& params, double q);

// Density of a scaled squared eigenvector component x = N |c|^2 at crossover
// parameter epsilon = N alpha^2.
double eigvec_component_pdf_eps(double epsilon, double x);

inline double eigvec_component_pdf(const CrossoverParams& params, double x) {
    params.validate();
    return eigvec_component_pdf_eps(params.epsilon(), x);
}

}  // namespace rmx
