#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmx/crossover.hpp"
#include "rmx/errors.hpp"
#include "rmx/fixedtrace.hpp"
#include "rmx/laplace.hpp"
#include "rmx/meijerg.hpp"
#include "rmx/montecarlo.hpp"
#include "rmx/puiseux.hpp"
#include "rmx/quadrature.hpp"
#include "rmx/rational.hpp"
#include "rmx/recursion.hpp"
#include "rmx/symbolic.hpp"
#include "rmx/verifysuite.hpp"

namespace {

using nlohmann::ordered_json;

struct Common {
    long samples = 100000;
    uint64_t seed = 42;
    int precision = 30;
    std::string format = "json";
    std::string output;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--samples", c.samples, "Monte Carlo sample count, 0 disables sampling")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", c.seed, "sampler seed");
    sub->add_option("--precision", c.precision, "significant digits for decimal fields")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", c.output, "write to this file instead of stdout");
}

void emit(const std::string& text, const Common& c) {
    if (c.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.output);
    if (!f) rmx::fail(rmx::errc::bad_arguments, "cannot open output file " + c.output);
    f << text;
}

// One basis monomial as flat JSON keys; zero powers are omitted except the
// pi power, which downstream consumers key on.
void append_monomial(ordered_json& obj, const rmx::BasisKey& k, const rmx::BigRational& c) {
    obj["pi_half_power"] = k.pi2;
    if (k.rad == 2)
        obj["two_half_power"] = 1;
    else if (k.rad != 1)
        obj["radicand"] = k.rad;
    if (k.ln2) obj["ln2_power"] = 1;
    if (k.gam) obj["gamma_power"] = 1;
    obj["rational"] = c.to_string();
}

ordered_json exact_json(const rmx::SymbolicValue& v) {
    std::vector<rmx::SymbolicValue::Term> ts = v.terms();
    if (ts.empty()) {
        ordered_json o;
        append_monomial(o, rmx::BasisKey{}, rmx::BigRational(0));
        return o;
    }
    if (ts.size() == 1) {
        ordered_json o;
        append_monomial(o, ts[0].key, ts[0].coef);
        return o;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& t : ts) {
        ordered_json o;
        append_monomial(o, t.key, t.coef);
        arr.push_back(o);
    }
    return ordered_json{{"terms", arr}};
}

ordered_json exact_json(const rmx::PiecewisePuiseux& f) {
    ordered_json arr = ordered_json::array();
    for (const auto& tv : f.terms()) {
        for (const auto& mono : tv.coef.terms()) {
            ordered_json o;
            o["breakpoint"] = tv.b.to_string();
            o["half_power"] = tv.m;
            if (tv.has_cut) o["cut"] = tv.cut.to_string();
            append_monomial(o, mono.key, mono.coef);
            arr.push_back(o);
        }
    }
    return ordered_json{{"support_hi", f.support_hi().to_string()},
                        {"terms", arr},
                        {"mean", exact_json(f.moment(1))}};
}

ordered_json mc_json(const rmx::SampleReport& r) {
    ordered_json o;
    o["mean"] = r.mean;
    o["stderr"] = r.stderrOfMean;
    o["n"] = r.sampleCount;
    if (r.ksStatistic)
        o["ks"] = *r.ksStatistic;
    else
        o["ks"] = nullptr;
    return o;
}

int emit_result(const std::string& task, const ordered_json& params,
                const ordered_json& exact, const ordered_json& decimal,
                const ordered_json& mc, const Common& c) {
    ordered_json out;
    out["task"] = task;
    out["params"] = params;
    out["exact"] = exact;
    out["decimal"] = decimal;
    out["mc"] = mc;
    emit(out.dump(2) + "\n", c);
    return 0;
}

// Curve table on the exact support: 512 interior points per unit interval
// plus every breakpoint exactly, flagged in the last column.
std::string curve_csv(const rmx::PiecewisePuiseux& f) {
    std::map<double, bool> pts;
    double hi = f.support_hi().to_double();
    long kmax = static_cast<long>(std::floor(hi * 512.0));
    for (long k = 0; k <= kmax; ++k) pts[static_cast<double>(k) / 512.0] = false;
    for (const rmx::BigRational& b : f.breakpoints()) pts[b.to_double()] = true;
    std::ostringstream os;
    os.precision(15);
    os << "# " << f.to_string() << "\n";
    os << "t,value,is_breakpoint\n";
    for (const auto& [t, isBrk] : pts)
        os << t << ',' << f.evaluate(t) << ',' << (isBrk ? 1 : 0) << '\n';
    return os.str();
}

std::string curve_csv_numeric(const std::string& header,
                              const std::function<double(double)>& f, double lo,
                              double hi) {
    std::ostringstream os;
    os.precision(15);
    os << "# " << header << "\n";
    os << "t,value,is_breakpoint\n";
    long k0 = static_cast<long>(std::ceil(lo * 512.0));
    long kmax = static_cast<long>(std::llround(hi * 512.0));
    for (long k = k0; k <= kmax; ++k) {
        double t = static_cast<double>(k) / 512.0;
        os << t << ',' << f(t) << ",0\n";
    }
    return os.str();
}

std::string table_csv(const std::vector<std::pair<std::string, rmx::SymbolicValue>>& rows,
                      int precision) {
    std::ostringstream os;
    os << "quantity,exact,decimal\n";
    for (const auto& [name, v] : rows)
        os << name << ',' << v.to_string() << ',' << v.decimal(precision) << '\n';
    return os.str();
}

// CDF of a pdf known only pointwise, valid for the ascending queries issued
// by the KS comparison. The budget scales with the increment width so the
// pdf's own quadrature jitter cannot starve the bisection.
std::function<double(double)> running_cdf(std::function<double(double)> pdf,
                                          double supportLo) {
    double cum = 0.0;
    double prev = supportLo;
    return [=](double x) mutable {
        if (x > prev) {
            cum += rmx::integrate_adaptive(pdf, prev, x, 1e-10 + 1e-9 * (x - prev));
            prev = x;
        }
        return std::min(cum, 1.0);
    };
}

struct ConductanceArgs {
    long beta = 1;
    long N = 1;
    long n = -1;
    std::string aTilde;
    Common c;
};

int run_conductance(const ConductanceArgs& a) {
    rmx::EnsembleParams p =
        a.aTilde.empty()
            ? rmx::EnsembleParams::from_channels(a.beta, a.N, a.n)
            : rmx::EnsembleParams::from_atilde(a.beta, a.N,
                                               rmx::BigRational::from_string(a.aTilde));
    rmx::ConductanceDensity cd = rmx::conductance_density(p);

    ordered_json params;
    params["beta"] = a.beta;
    params["n_small"] = a.N;
    if (p.n >= 0) params["n_large"] = p.n;
    params["a_tilde"] = p.aTilde.to_string();
    params["samples"] = a.c.samples;
    params["seed"] = a.c.seed;

    if (a.c.format == "csv") {
        emit(curve_csv(cd.pdf), a.c);
        return 0;
    }

    ordered_json mc = nullptr;
    if (a.c.samples > 0 && p.n >= 0 && (a.beta == 1 || a.beta == 2)) {
        int beta = static_cast<int>(a.beta);
        long N = a.N, n = p.n;
        std::vector<double> v =
            rmx::sample_statistic(a.c.samples, a.c.seed, [beta, N, n](rmx::RngStream& rng) {
                return rmx::conductance_sample(beta, N, n, rng);
            });
        mc = mc_json(rmx::compare_to_exact("conductance", std::move(v), cd.pdf,
                                           rmx::CompareMode::ks));
    }
    return emit_result("conductance", params, exact_json(cd.pdf),
                       cd.pdf.moment(1).decimal(a.c.precision), mc, a.c);
}

struct BipartiteArgs {
    long N = 2;
    long n = 2;
    Common c;
};

int run_smallest_eig(const BipartiteArgs& a) {
    rmx::BipartiteDims dims{a.N, a.n};
    rmx::PiecewisePuiseux pdf = rmx::smallest_eig_pdf_hs(dims);

    ordered_json params{{"n_small", a.N}, {"n_large", a.n},
                        {"samples", a.c.samples}, {"seed", a.c.seed}};
    if (a.c.format == "csv") {
        emit(curve_csv(pdf), a.c);
        return 0;
    }
    ordered_json mc = nullptr;
    if (a.c.samples > 0) {
        std::vector<double> v =
            rmx::sample_statistic(a.c.samples, a.c.seed, [dims](rmx::RngStream& rng) {
                return rmx::hs_spectrum_sample(dims, rng).front();
            });
        mc = mc_json(rmx::compare_to_exact("smallest eigenvalue", std::move(v), pdf,
                                           rmx::CompareMode::ks));
    }
    return emit_result("smallest_eig", params, exact_json(pdf),
                       pdf.moment(1).decimal(a.c.precision), mc, a.c);
}

int run_hs_density(const BipartiteArgs& a) {
    rmx::BipartiteDims dims{a.N, a.n};
    rmx::PiecewisePuiseux pdf = rmx::density_hs(dims);

    ordered_json params{{"n_small", a.N}, {"n_large", a.n},
                        {"samples", a.c.samples}, {"seed", a.c.seed}};
    if (a.c.format == "csv") {
        emit(curve_csv(pdf), a.c);
        return 0;
    }
    ordered_json mc = nullptr;
    if (a.c.samples > 0) {
        // One uniformly chosen eigenvalue per sampled state has the exact
        // marginal density rho/N and the draws are independent across states.
        long N = a.N;
        std::vector<double> v =
            rmx::sample_statistic(a.c.samples, a.c.seed, [dims, N](rmx::RngStream& rng) {
                std::vector<double> e = rmx::hs_spectrum_sample(dims, rng);
                auto j = static_cast<size_t>(rng.next_double() *
                                             static_cast<double>(N));
                return e[j];
            });
        double Nd = static_cast<double>(a.N);
        mc = mc_json(rmx::compare_to_exact(
            "one-point density", std::move(v),
            [pdf, Nd](double x) { return pdf.cdf(x) / Nd; }));
    }
    return emit_result("hs_density", params, exact_json(pdf),
                       pdf.moment(1).decimal(a.c.precision), mc, a.c);
}

struct EntanglementArgs {
    long N = 2;
    long n = 2;
    std::string measure = "hs";
    Common c;
};

int run_entanglement(const EntanglementArgs& a) {
    rmx::BipartiteDims dims{a.N, a.n};
    rmx::Measure m = a.measure == "bh" ? rmx::Measure::BH : rmx::Measure::HS;
    rmx::EntanglementMeans em = rmx::entanglement_means(m, dims);

    std::vector<std::pair<std::string, rmx::SymbolicValue>> rows{
        {"mean_vn", em.meanVN}, {"mean_purity", em.meanPurity}};
    if (m == rmx::Measure::BH) rows.emplace_back("var_vn", rmx::var_vn_bh(dims));

    ordered_json params{{"measure", a.measure}, {"n_small", a.N}, {"n_large", a.n},
                        {"samples", a.c.samples}, {"seed", a.c.seed}};
    if (a.c.format == "csv") {
        emit(table_csv(rows, a.c.precision), a.c);
        return 0;
    }
    ordered_json exact;
    for (const auto& [name, v] : rows) exact[name] = exact_json(v);
    if (!em.purityPlausible) exact["mean_purity"]["plausible"] = false;

    ordered_json mc = nullptr;
    if (a.c.samples > 0) {
        std::vector<double> v =
            rmx::sample_statistic(a.c.samples, a.c.seed, [dims, m](rmx::RngStream& rng) {
                std::vector<double> e = m == rmx::Measure::BH
                                            ? rmx::bh_spectrum_sample(dims, rng)
                                            : rmx::hs_spectrum_sample(dims, rng);
                double s = 0;
                for (double x : e)
                    if (x > 1e-300) s -= x * std::log(x);
                return s;
            });
        mc = mc_json(rmx::compare_to_exact("mean vN entropy", std::move(v), em.meanVN,
                                           rmx::CompareMode::meanStderr));
    }
    return emit_result("entanglement", params, exact,
                       em.meanVN.decimal(a.c.precision), mc, a.c);
}

struct FidelityArgs {
    long N = 2;
    long n1 = 2;
    long n2 = 2;
    Common c;
};

int run_fidelity(const FidelityArgs& a) {
    rmx::BipartiteDims d1{a.N, a.n1};
    rmx::BipartiteDims d2{a.N, a.n2};
    rmx::DistanceFidelity df = rmx::distance_and_fidelity(d1, d2);

    std::vector<std::pair<std::string, rmx::SymbolicValue>> rows{
        {"mean_dist_sq", df.meanDistSq},
        {"mean_sqrt_fidelity", df.meanSqrtFid},
        {"mean_fidelity", df.meanFid}};

    ordered_json params{{"n_small", a.N}, {"n_large_1", a.n1}, {"n_large_2", a.n2},
                        {"samples", a.c.samples}, {"seed", a.c.seed}};
    if (a.c.format == "csv") {
        emit(table_csv(rows, a.c.precision), a.c);
        return 0;
    }
    ordered_json exact;
    for (const auto& [name, v] : rows) exact[name] = exact_json(v);

    ordered_json mc = nullptr;
    if (a.c.samples > 0 && a.N == 2) {
        std::vector<double> v =
            rmx::sample_statistic(a.c.samples, a.c.seed, [d1, d2](rmx::RngStream& rng) {
                return rmx::fidelity_sample(d1, d2, rng).sqrtFidelity;
            });
        mc = mc_json(rmx::compare_to_exact("mean sqrt fidelity", std::move(v),
                                           df.meanSqrtFid, rmx::CompareMode::meanStderr));
    }
    return emit_result("fidelity", params, exact, df.meanSqrtFid.decimal(a.c.precision),
                       mc, a.c);
}

struct RealProbArgs {
    int m = 1;
    long N = 2;
    std::vector<long> L;
    Common c;
};

int run_real_prob(const RealProbArgs& a) {
    rmx::ProductSpec spec;
    spec.m = a.m;
    spec.N = a.N;
    spec.truncationDims = a.L;
    rmx::SymbolicValue p = rmx::prob_all_real(spec);

    ordered_json params{{"m_factors", a.m}, {"n_small", a.N},
                        {"truncation_dims", a.L}, {"samples", a.c.samples},
                        {"seed", a.c.seed}};
    if (a.c.format == "csv") {
        emit(table_csv({{"prob_all_real", p}}, a.c.precision), a.c);
        return 0;
    }
    ordered_json mc = nullptr;
    if (a.c.samples > 0) {
        std::vector<double> v =
            rmx::sample_statistic(a.c.samples, a.c.seed, [spec](rmx::RngStream& rng) {
                return rmx::real_eig_count_sample(spec, rng) == spec.N ? 1.0 : 0.0;
            });
        mc = mc_json(rmx::compare_to_exact("real-spectrum frequency", std::move(v), p,
                                           rmx::CompareMode::meanStderr));
    }
    return emit_result("real_prob", params, exact_json(p), p.decimal(a.c.precision), mc,
                       a.c);
}

struct RatioArgs {
    double alpha = 0.5;
    double gridMax = 8.0;
    Common c;
};

int run_crossover_ratio(const RatioArgs& a) {
    rmx::CrossoverParams p{a.alpha, 3};
    ordered_json params{{"alpha", a.alpha}, {"matrix_dim", p.N},
                        {"samples", a.c.samples}, {"seed", a.c.seed}};
    if (a.c.format == "csv") {
        std::ostringstream hdr;
        hdr << "spacing-ratio density, alpha=" << a.alpha << ", dim=" << p.N;
        emit(curve_csv_numeric(hdr.str(),
                               [p](double r) { return rmx::ratio_pdf(p, r); },
                               1.0 / 512.0, a.gridMax),
             a.c);
        return 0;
    }
    ordered_json mc = nullptr;
    if (a.c.samples > 0) {
        std::vector<double> v =
            rmx::sample_statistic(a.c.samples, a.c.seed, [p](rmx::RngStream& rng) {
                return rmx::spacing_ratio_sample(p, rng);
            });
        mc = mc_json(rmx::compare_to_exact(
            "spacing ratio", std::move(v),
            running_cdf([p](double r) { return rmx::ratio_pdf(p, r); }, 1e-12)));
    }
    return emit_result("crossover_ratio", params, nullptr, nullptr, mc, a.c);
}

struct EigvecArgs {
    double epsilon = -1.0;
    double alpha = -1.0;
    long N = 0;
    double gridMax = 12.0;
    Common c;
};

// The sampler's crossover parameter maps onto the component-law sweep
// parameter with a measured factor of 8/5.
constexpr double kComponentSweepFactor = 1.6;

int run_eigvec_pdf(const EigvecArgs& a) {
    bool haveEps = a.epsilon >= 0.0;
    bool haveAlpha = a.alpha >= 0.0 || a.N > 0;
    if (haveEps == haveAlpha)
        rmx::fail(rmx::errc::bad_arguments,
                  "give either --epsilon or both --alpha and --N");
    if (haveAlpha && (a.alpha < 0.0 || a.N <= 0))
        rmx::fail(rmx::errc::bad_arguments, "--alpha and --N go together");

    double eps = haveEps ? a.epsilon
                         : rmx::CrossoverParams{a.alpha, a.N}.epsilon();
    ordered_json params;
    if (haveAlpha) {
        params["alpha"] = a.alpha;
        params["matrix_dim"] = a.N;
    }
    params["epsilon"] = eps;
    params["samples"] = a.c.samples;
    params["seed"] = a.c.seed;

    if (a.c.format == "csv") {
        std::ostringstream hdr;
        hdr << "eigenvector component density, epsilon=" << eps;
        emit(curve_csv_numeric(
                 hdr.str(),
                 [eps](double x) { return rmx::eigvec_component_pdf_eps(eps, x); },
                 1.0 / 512.0, a.gridMax),
             a.c);
        return 0;
    }

    ordered_json mc = nullptr;
    if (a.c.samples > 0 && haveAlpha) {
        rmx::CrossoverParams p{a.alpha, a.N};
        std::vector<double> comps;
        for (uint64_t j = 0; comps.size() < static_cast<size_t>(a.c.samples); ++j) {
            rmx::RngStream rng(a.c.seed, j);
            std::vector<double> v = rmx::eigvec_component_samples(p, rng);
            comps.insert(comps.end(), v.begin(), v.end());
        }
        double epsEff = kComponentSweepFactor * eps;
        mc = mc_json(rmx::compare_to_exact(
            "component density", std::move(comps),
            running_cdf(
                [epsEff](double x) { return rmx::eigvec_component_pdf_eps(epsEff, x); },
                1e-12)));
    }
    return emit_result("eigvec_pdf", params, nullptr, nullptr, mc, a.c);
}

struct VerifyArgs {
    long samples = 100000;
    uint64_t seed = 42;
    std::string output;
};

int run_verify(const VerifyArgs& a) {
    std::vector<rmx::CheckResult> results = rmx::run_verification(a.seed, a.samples);
    std::ostringstream os;
    int gatingFailures = 0;
    for (const rmx::CheckResult& r : results) {
        const char* verdict = r.pass ? "PASS" : (r.gating ? "FAIL" : "MISS");
        if (!r.pass && r.gating) ++gatingFailures;
        char line[160];
        std::snprintf(line, sizeof line, "%-4s %-55s %8.2f s  ", verdict, r.name.c_str(),
                      r.seconds);
        os << line << r.detail << "\n";
    }
    os << (gatingFailures == 0 ? "all gating checks passed"
                               : std::to_string(gatingFailures) + " gating check(s) failed")
       << "\n";
    if (a.output.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(a.output);
        if (!f) rmx::fail(rmx::errc::bad_arguments, "cannot open output file " + a.output);
        f << os.str();
    }
    return gatingFailures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact and Monte Carlo statistics of random-matrix ensembles"};
    app.require_subcommand(1);

    ConductanceArgs co;
    CLI::App* conductance =
        app.add_subcommand("conductance", "conductance density for given channel counts");
    conductance->add_option("--beta", co.beta, "symmetry index 1, 2 or 4")->required();
    conductance->add_option("--N", co.N, "channel count on the small side")->required();
    CLI::Option* coN = conductance->add_option("--n", co.n, "channel count on the large side");
    conductance->add_option("--atilde", co.aTilde,
                            "hard-edge exponent as a rational, overrides --n")
        ->excludes(coN);
    add_common(conductance, co.c);

    BipartiteArgs se;
    CLI::App* smallest =
        app.add_subcommand("smallest-eig", "smallest Schmidt eigenvalue density");
    smallest->add_option("--N", se.N, "smaller subsystem dimension")->required();
    smallest->add_option("--n", se.n, "larger subsystem dimension")->required();
    add_common(smallest, se.c);

    BipartiteArgs hd;
    CLI::App* hsdensity =
        app.add_subcommand("hs-density", "one-point Schmidt eigenvalue density");
    hsdensity->add_option("--N", hd.N, "smaller subsystem dimension")->required();
    hsdensity->add_option("--n", hd.n, "larger subsystem dimension")->required();
    add_common(hsdensity, hd.c);

    EntanglementArgs en;
    CLI::App* entangle =
        app.add_subcommand("entanglement", "mean entropy, purity and entropy variance");
    entangle->add_option("--N", en.N, "smaller subsystem dimension")->required();
    entangle->add_option("--n", en.n, "larger subsystem dimension")->required();
    entangle->add_option("--measure", en.measure, "ensemble measure")
        ->check(CLI::IsMember({"hs", "bh"}));
    add_common(entangle, en.c);

    FidelityArgs fi;
    CLI::App* fidelity =
        app.add_subcommand("fidelity", "mean distance and fidelity of two random states");
    fidelity->add_option("--N", fi.N, "shared subsystem dimension")->required();
    fidelity->add_option("--n1", fi.n1, "first environment dimension")->required();
    fidelity->add_option("--n2", fi.n2, "second environment dimension")->required();
    add_common(fidelity, fi.c);

    RealProbArgs rp;
    CLI::App* realprob =
        app.add_subcommand("real-prob", "probability that a matrix product has an all-real spectrum");
    realprob->add_option("--m", rp.m, "number of factors")->required();
    realprob->add_option("--N", rp.N, "matrix dimension")->required();
    realprob->add_option("--L", rp.L, "truncation dimensions, comma separated")
        ->delimiter(',');
    add_common(realprob, rp.c);

    RatioArgs cr;
    CLI::App* ratio =
        app.add_subcommand("crossover-ratio", "spacing-ratio density across the symmetry crossover");
    ratio->add_option("--alpha", cr.alpha, "crossover parameter in [0, 1]")->required();
    ratio->add_option("--grid-max", cr.gridMax, "upper end of the csv grid");
    add_common(ratio, cr.c);

    EigvecArgs ev;
    CLI::App* eigvec =
        app.add_subcommand("eigvec-pdf", "eigenvector component density across the crossover");
    eigvec->add_option("--epsilon", ev.epsilon, "sweep parameter of the component law");
    eigvec->add_option("--alpha", ev.alpha, "crossover parameter, needs --N");
    eigvec->add_option("--N", ev.N, "matrix dimension, needs --alpha");
    eigvec->add_option("--grid-max", ev.gridMax, "upper end of the csv grid");
    add_common(eigvec, ev.c);

    VerifyArgs vf;
    CLI::App* verify =
        app.add_subcommand("verify", "run the full verification battery");
    verify->add_option("--samples", vf.samples, "Monte Carlo sample count")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", vf.seed, "sampler seed");
    verify->add_option("--output", vf.output, "write the matrix to this file");

    try {
        app.parse(argc, argv);
        if (*conductance) return run_conductance(co);
        if (*smallest) return run_smallest_eig(se);
        if (*hsdensity) return run_hs_density(hd);
        if (*entangle) return run_entanglement(en);
        if (*fidelity) return run_fidelity(fi);
        if (*realprob) return run_real_prob(rp);
        if (*ratio) return run_crossover_ratio(cr);
        if (*eigvec) return run_eigvec_pdf(ev);
        if (*verify) return run_verify(vf);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR:BadArguments:" << e.what() << "\n";
        return 1;
    } catch (const rmx::error& e) {
        std::string msg = e.what();
        std::string prefix = std::string(e.code_name()) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        std::cerr << "ERROR:" << e.code_name() << ":" << msg << "\n";
        return rmx::errc_is_validation(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "ERROR:Unhandled:" << e.what() << "\n";
        return 2;
    }
}
