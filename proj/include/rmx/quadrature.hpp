#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "rmx/errors.hpp"

namespace rmx {

// Adaptive Gauss-Kronrod 15(7) quadrature with an absolute-tolerance budget
// split across bisected panels. Deterministic and dependency-free.
namespace quad_detail {

// Standard 15-point Kronrod abscissae and weights on [-1, 1], with the
// embedded 7-point Gauss weights used for the error estimate.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double integral;
    double error;
};

template <class F>
PanelResult kronrod_panel(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * xgk[i]);
        fv[14 - i] = f(c + h * xgk[i]);
    }
    fv[7] = f(c);
    double k = wgk[7] * fv[7];
    double g = wg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        k += wgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) g += wg[i / 2] * (fv[i] + fv[14 - i]);
    }
    return {k * h, std::abs(k - g) * h};
}

template <class F>
double adaptive(const F& f, double a, double b, double tol, int depth) {
    auto r = kronrod_panel(f, a, b);
    if (r.error <= tol || b - a < 1e-300) return r.integral;
    if (depth <= 0)
        fail(errc::quadrature_failure, "tolerance unattainable on panel");
    return adaptive(f, a, 0.5 * (a + b), 0.5 * tol, depth - 1) +
           adaptive(f, 0.5 * (a + b), b, 0.5 * tol, depth - 1);
}

}  // namespace quad_detail

template <class F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol = 1e-11,
                          int max_depth = 48) {
    if (a == b) return 0.0;
    return quad_detail::adaptive(f, a, b, abs_tol, max_depth);
}

// Integrates with forced subdivision at the given interior points (useful for
// integrands with known kinks or near-singular spots).
template <class F>
double integrate_split(const F& f, const std::vector<double>& pts, double abs_tol = 1e-11,
                       int max_depth = 48) {
    double total = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate_adaptive(f, pts[i], pts[i + 1],
                                    abs_tol / static_cast<double>(pts.size() - 1), max_depth);
    return total;
}

}  // namespace rmx
