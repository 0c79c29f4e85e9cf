#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rmx/crossover.hpp"
#include "rmx/quadrature.hpp"

using namespace rmx;

namespace {

// Known N = 3 spacing-ratio laws for the pure ensembles, written down
// independently of the crossover formula they bound.
double goe_ratio_law(double r) {
    double s = 1.0 + r + r * r;
    return 27.0 * (r + r * r) / (8.0 * std::pow(s, 2.5));
}

double gue_ratio_law(double r) {
    double s = 1.0 + r + r * r;
    double t = r + r * r;
    return 81.0 * std::sqrt(3.0) / (4.0 * M_PI) * t * t / (s * s * s * s);
}

double eigvec_mass(double eps, double hi) {
    auto f = [&](double x) { return eigvec_component_pdf_eps(eps, x); };
    return integrate_adaptive(f, 1e-12, 1.0, 1e-9) +
           integrate_adaptive(f, 1.0, hi, 1e-9);
}

double eigvec_mean(double eps, double hi) {
    auto f = [&](double x) { return x * eigvec_component_pdf_eps(eps, x); };
    return integrate_adaptive(f, 1e-12, 1.0, 1e-9) +
           integrate_adaptive(f, 1.0, hi, 1e-9);
}

}  // namespace

TEST_CASE("ratio pdf approaches the pure-ensemble laws at the ends") {
    for (double r : {0.3, 0.7, 1.0, 1.9, 2.7}) {
        CrossoverParams goe{1e-5, 3};
        CHECK(ratio_pdf(goe, r) ==
              doctest::Approx(goe_ratio_law(r)).epsilon(1e-3));
        CrossoverParams gue{1.0 - 1e-6, 3};
        CHECK(ratio_pdf(gue, r) ==
              doctest::Approx(gue_ratio_law(r)).epsilon(1e-4));
    }

    // exact endpoint arguments are mapped onto the configured offset
    for (double r : {0.4, 1.0, 2.2}) {
        CHECK(ratio_pdf({0.0, 3}, r) ==
              doctest::Approx(ratio_pdf({kAlphaEndpointOffset, 3}, r))
                  .epsilon(1e-15));
        CHECK(ratio_pdf({1.0, 3}, r) ==
              doctest::Approx(ratio_pdf({1.0 - kAlphaEndpointOffset, 3}, r))
                  .epsilon(1e-15));
    }
}

TEST_CASE("ratio pdf is normalized and satisfies the inversion symmetry") {
    for (double alpha : {0.1, 0.5, 0.9}) {
        CrossoverParams p{alpha, 3};
        CHECK(ratio_fractional_moment(p, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
    }

    for (double alpha : {0.3, 0.5, 0.7, 0.95}) {
        CrossoverParams p{alpha, 3};
        for (double r : {1.0 / 3.0, 0.5, 2.0, 3.0}) {
            double lhs = ratio_pdf(p, r);
            double rhs = ratio_pdf(p, 1.0 / r) / (r * r);
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("ratio pdf is nonnegative and decays at both ends") {
    CrossoverParams p{0.4, 3};
    double prev = ratio_pdf(p, 8.0);
    for (double r : {16.0, 32.0, 64.0}) {
        double cur = ratio_pdf(p, r);
        CHECK(cur >= 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(ratio_pdf(p, 1e-9) < 1e-6);
    CHECK(ratio_pdf(p, 1.0) > 0.3);
}

TEST_CASE("fractional moments match the inversion symmetry") {
    CrossoverParams p{0.5, 3};
    double m_plus = ratio_fractional_moment(p, 1.0);
    double m_minus = ratio_fractional_moment(p, -1.0);
    CHECK(m_plus == doctest::Approx(m_minus).epsilon(1e-8));
    CHECK(m_plus > 1.0);
    CHECK(ratio_fractional_moment(p, 2.0) ==
          doctest::Approx(ratio_fractional_moment(p, -2.0)).epsilon(1e-8));

    CrossoverParams g{0.9, 3};
    CHECK(ratio_fractional_moment(g, 0.5) > 0.0);
    CHECK(ratio_fractional_moment(g, 0.5) <
          ratio_fractional_moment(g, 1.0) + 1.0);
}

TEST_CASE("moments outside the integrability window are rejected") {
    CrossoverParams p{0.5, 3};
    CHECK_THROWS_AS(ratio_fractional_moment(p, 3.2), const error&);
    CHECK_THROWS_AS(ratio_fractional_moment(p, 3.0), const error&);
    CHECK_THROWS_AS(ratio_fractional_moment(p, -3.0), const error&);
    CHECK_THROWS_AS(ratio_fractional_moment(p, -3.5), const error&);
    try {
        ratio_fractional_moment(p, 5.0);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::divergent);
    }
}

TEST_CASE("ratio pdf input validation") {
    CrossoverParams p{0.5, 3};
    CHECK_THROWS_AS(ratio_pdf(p, 0.0), const error&);
    CHECK_THROWS_AS(ratio_pdf(p, -1.0), const error&);
    CHECK_THROWS_AS(ratio_pdf({-0.1, 3}, 1.0), const error&);
    CHECK_THROWS_AS(ratio_pdf({1.1, 3}, 1.0), const error&);
    try {
        ratio_pdf({2.0, 3}, 1.0);
        CHECK(false);
    } catch (const error& e) {
        CHECK(e.code() == errc::domain_error);
    }
    CHECK_THROWS_AS(CrossoverParams{0.0}.b(), const error&);
    CHECK(CrossoverParams{0.5, 3}.epsilon() == doctest::Approx(0.75));
}

TEST_CASE("eigenvector component density has unit mass and unit mean") {
    CHECK(eigvec_mass(1.0, 90.0) == doctest::Approx(1.0).epsilon(1e-6));
    for (double eps : {0.5, 1.0, 2.0}) {
        CHECK(eigvec_mean(eps, 120.0) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("eigenvector component density shape") {
    for (double x : {1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 8.0}) {
        CHECK(eigvec_component_pdf_eps(1.0, x) >= 0.0);
    }
    // far into the unitary regime the density approaches exp(-x)
    for (double x : {0.5, 1.0, 2.0}) {
        CHECK(eigvec_component_pdf_eps(60.0, x) ==
              doctest::Approx(std::exp(-x)).epsilon(0.05));
    }
    // deep in the orthogonal regime mass piles up near the origin
    CHECK(eigvec_component_pdf_eps(0.02, 0.01) >
          eigvec_component_pdf_eps(0.02, 1.0));

    CHECK_THROWS_AS(eigvec_component_pdf_eps(0.0, 1.0), const error&);
    CHECK_THROWS_AS(eigvec_component_pdf_eps(1.0, -1.0), const error&);
    CHECK(eigvec_component_pdf(CrossoverParams{0.5, 4}, 1.0) ==
          doctest::Approx(eigvec_component_pdf_eps(1.0, 1.0)));
}
