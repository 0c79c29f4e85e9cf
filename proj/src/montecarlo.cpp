#include "rmx/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace rmx {

namespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(uint64_t seed, uint64_t streamId) {
    uint64_t state = seed ^ (streamId * 0x9E3779B97F4A7C15ULL + 0x1F123BB5159A55E5ULL);
    for (auto& word : s_) word = splitmix64(state);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

uint64_t RngStream::next_u64() {
    uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    if (haveCache_) {
        haveCache_ = false;
        return cache_;
    }
    while (true) {
        double u = 2.0 * next_double() - 1.0;
        double v = 2.0 * next_double() - 1.0;
        double s = u * u + v * v;
        if (s <= 0.0 || s >= 1.0) continue;
        double f = std::sqrt(-2.0 * std::log(s) / s);
        cache_ = v * f;
        haveCache_ = true;
        return u * f;
    }
}

std::complex<double> RngStream::next_complex_gaussian() {
    constexpr double invSqrt2 = 0.70710678118654752440;
    return {next_gaussian() * invSqrt2, next_gaussian() * invSqrt2};
}

ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) fail(errc::bad_arguments, "matmul shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long k = 0; k < a.cols(); ++k) {
            std::complex<double> f = a(i, k);
            if (f == 0.0) continue;
            for (long j = 0; j < b.cols(); ++j) c(i, j) += f * b(k, j);
        }
    return c;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
    if (a.cols() != b.rows()) fail(errc::bad_arguments, "matmul shape mismatch");
    RealMatrix c(a.rows(), b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long k = 0; k < a.cols(); ++k) {
            double f = a(i, k);
            for (long j = 0; j < b.cols(); ++j) c(i, j) += f * b(k, j);
        }
    return c;
}

RealMatrix sample_real_ginibre(long rows, long cols, RngStream& rng) {
    RealMatrix g(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) g(i, j) = rng.next_gaussian();
    return g;
}

ComplexMatrix sample_complex_ginibre(long rows, long cols, RngStream& rng) {
    ComplexMatrix g(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) g(i, j) = rng.next_complex_gaussian();
    return g;
}

RealMatrix sample_goe(long N, RngStream& rng) {
    RealMatrix a(N, N);
    for (long i = 0; i < N; ++i) {
        a(i, i) = rng.next_gaussian();
        for (long j = i + 1; j < N; ++j) {
            double x = rng.next_gaussian() * 0.70710678118654752440;
            a(i, j) = x;
            a(j, i) = x;
        }
    }
    return a;
}

ComplexMatrix sample_gue(long N, RngStream& rng) {
    ComplexMatrix b(N, N);
    for (long i = 0; i < N; ++i) {
        b(i, i) = rng.next_gaussian() * 0.70710678118654752440;
        for (long j = i + 1; j < N; ++j) {
            std::complex<double> z = rng.next_complex_gaussian() *
                                     std::complex<double>(0.70710678118654752440, 0.0);
            b(i, j) = z;
            b(j, i) = std::conj(z);
        }
    }
    return b;
}

namespace {

// Modified Gram-Schmidt with one re-orthogonalization pass; dividing by the
// positive column norm pins the R diagonal positive, which is the unique QR
// convention under which Q of a Ginibre sample is Haar.
template <typename T>
void gram_schmidt(DenseMatrix<T>& g) {
    long n = g.rows();
    for (long j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (long k = 0; k < j; ++k) {
                T dot{};
                for (long i = 0; i < n; ++i) {
                    if constexpr (std::is_same_v<T, std::complex<double>>)
                        dot += std::conj(g(i, k)) * g(i, j);
                    else
                        dot += g(i, k) * g(i, j);
                }
                for (long i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
            }
        }
        double norm = 0.0;
        for (long i = 0; i < n; ++i) norm += std::norm(g(i, j));
        norm = std::sqrt(norm);
        if (norm < 1e-150) fail(errc::ill_conditioned, "degenerate QR sample");
        for (long i = 0; i < n; ++i) g(i, j) /= norm;
    }
}

}  // namespace

ComplexMatrix sample_haar_unitary(long N, RngStream& rng) {
    ComplexMatrix g = sample_complex_ginibre(N, N, rng);
    gram_schmidt(g);
    return g;
}

RealMatrix sample_haar_orthogonal(long N, RngStream& rng) {
    RealMatrix g = sample_real_ginibre(N, N, rng);
    gram_schmidt(g);
    return g;
}

RealMatrix sample_truncated_orthogonal(long L, long N, RngStream& rng) {
    if (L < 1 || N < 1) fail(errc::domain_error, "need L >= 1, N >= 1");
    RealMatrix o = sample_haar_orthogonal(L + N, rng);
    RealMatrix t(N, N);
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) t(i, j) = o(i, j);
    return t;
}

ComplexMatrix sample_fixed_trace_hs(const BipartiteDims& dims, RngStream& rng) {
    dims.validate();
    ComplexMatrix x = sample_complex_ginibre(dims.N, dims.n, rng);
    ComplexMatrix w(dims.N, dims.N);
    double trace = 0.0;
    for (long i = 0; i < dims.N; ++i) {
        for (long j = 0; j < dims.N; ++j) {
            std::complex<double> s{};
            for (long k = 0; k < dims.n; ++k) s += x(i, k) * std::conj(x(j, k));
            w(i, j) = s;
        }
        trace += w(i, i).real();
    }
    for (long i = 0; i < dims.N; ++i)
        for (long j = 0; j < dims.N; ++j) w(i, j) /= trace;
    return w;
}

namespace {

std::complex<double> det_small(ComplexMatrix a) {
    long n = a.rows();
    std::complex<double> det = 1.0;
    for (long c = 0; c < n; ++c) {
        long piv = c;
        for (long r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (piv != c) {
            for (long j = c; j < n; ++j) std::swap(a(c, j), a(piv, j));
            det = -det;
        }
        if (a(c, c) == 0.0) return 0.0;
        det *= a(c, c);
        for (long r = c + 1; r < n; ++r) {
            std::complex<double> f = a(r, c) / a(c, c);
            for (long j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

}  // namespace

ComplexMatrix sample_fixed_trace_bh(const BipartiteDims& dims, RngStream& rng) {
    dims.validate();
    long N = dims.N;
    long excess = dims.n - N;
    ComplexMatrix u(N, N);
    while (true) {
        u = sample_haar_unitary(N, rng);
        if (excess == 0) break;
        ComplexMatrix onePlus = ComplexMatrix::identity(N);
        for (long i = 0; i < N; ++i)
            for (long j = 0; j < N; ++j) onePlus(i, j) += u(i, j);
        // |det(1+U)|^(2 excess) <= 2^(2 N excess)
        double logw = 2.0 * excess * std::log(std::abs(det_small(onePlus)));
        double logEnvelope = 2.0 * N * excess * std::log(2.0);
        if (std::log(std::max(rng.next_double(), 1e-300)) < logw - logEnvelope) break;
    }
    ComplexMatrix g = sample_complex_ginibre(N, dims.n, rng);
    ComplexMatrix a(N, dims.n);
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < dims.n; ++j) {
            std::complex<double> s = g(i, j);
            for (long k = 0; k < N; ++k) s += u(i, k) * g(k, j);
            a(i, j) = s;
        }
    ComplexMatrix w(N, N);
    double trace = 0.0;
    for (long i = 0; i < N; ++i) {
        for (long j = 0; j < N; ++j) {
            std::complex<double> s{};
            for (long k = 0; k < dims.n; ++k) s += a(i, k) * std::conj(a(j, k));
            w(i, j) = s;
        }
        trace += w(i, i).real();
    }
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) w(i, j) /= trace;
    return w;
}

ComplexMatrix sample_scattering_block(int beta, long nLeft, long nRight,
                                      RngStream& rng) {
    if (beta != 1 && beta != 2)
        fail(errc::unsupported_family, "scattering block needs beta in {1,2}");
    if (nLeft < 1 || nRight < 1) fail(errc::domain_error, "need channel counts >= 1");
    long total = nLeft + nRight;
    ComplexMatrix s = sample_haar_unitary(total, rng);
    if (beta == 1) {
        ComplexMatrix sym(total, total);
        for (long i = 0; i < total; ++i)
            for (long j = 0; j < total; ++j) {
                std::complex<double> acc{};
                for (long k = 0; k < total; ++k) acc += s(k, i) * s(k, j);
                sym(i, j) = acc;
            }
        s = sym;
    }
    ComplexMatrix t(nRight, nLeft);
    for (long i = 0; i < nRight; ++i)
        for (long j = 0; j < nLeft; ++j) t(i, j) = s(nLeft + i, j);
    return t;
}

ComplexMatrix sample_crossover(const CrossoverParams& params, RngStream& rng) {
    params.validate();
    long N = params.N;
    RealMatrix a = sample_goe(N, rng);
    ComplexMatrix b = sample_gue(N, rng);
    // sqrt((1-alpha^2)/2) A + alpha B: the combination whose N=3 spacing-ratio
    // statistics reproduce the closed-form density for interior alpha, keeping
    // the e^{-sum lambda^2} weight at both endpoints
    double wa = std::sqrt((1.0 - params.alpha * params.alpha) / 2.0);
    double wb = params.alpha;
    ComplexMatrix h(N, N);
    for (long i = 0; i < N; ++i)
        for (long j = 0; j < N; ++j) h(i, j) = wa * a(i, j) + wb * b(i, j);
    return h;
}

ComplexMatrix sample_ensemble(Family family, const FamilyParams& params,
                              RngStream& rng) {
    auto ensemble = [&]() -> const EnsembleParams& {
        if (auto* p = std::get_if<EnsembleParams>(&params)) return *p;
        fail(errc::unsupported_family, "family needs EnsembleParams");
    };
    auto bipartite = [&]() -> const BipartiteDims& {
        if (auto* p = std::get_if<BipartiteDims>(&params)) return *p;
        fail(errc::unsupported_family, "family needs BipartiteDims");
    };

    switch (family) {
        case Family::realGinibre:
            if (auto* spec = std::get_if<ProductSpec>(&params)) {
                RealMatrix prod = sample_real_ginibre(spec->N, spec->N, rng);
                for (long f = 1; f < spec->m; ++f)
                    prod = matmul(prod, sample_real_ginibre(spec->N, spec->N, rng));
                return to_complex(prod);
            }
            return to_complex(sample_real_ginibre(ensemble().N, ensemble().N, rng));
        case Family::complexGinibre:
            return sample_complex_ginibre(ensemble().N, ensemble().N, rng);
        case Family::goe:
            return to_complex(sample_goe(ensemble().N, rng));
        case Family::gue:
            return sample_gue(ensemble().N, rng);
        case Family::haarUnitary:
            return sample_haar_unitary(ensemble().N, rng);
        case Family::haarOrthogonal:
            return to_complex(sample_haar_orthogonal(ensemble().N, rng));
        case Family::truncatedOrthogonal: {
            if (auto* spec = std::get_if<ProductSpec>(&params)) {
                if (spec->truncationDims.size() != static_cast<size_t>(spec->m))
                    fail(errc::unsupported_family, "need one truncation per factor");
                RealMatrix prod =
                    sample_truncated_orthogonal(spec->truncationDims[0], spec->N, rng);
                for (long f = 1; f < spec->m; ++f)
                    prod = matmul(prod, sample_truncated_orthogonal(
                                            spec->truncationDims[f], spec->N, rng));
                return to_complex(prod);
            }
            fail(errc::unsupported_family, "truncatedOrthogonal needs ProductSpec");
        }
        case Family::fixedTraceHS:
            return sample_fixed_trace_hs(bipartite(), rng);
        case Family::fixedTraceBH:
            return sample_fixed_trace_bh(bipartite(), rng);
        case Family::scatteringBlock: {
            const EnsembleParams& p = ensemble();
            long nRight = p.n >= 0 ? p.n : p.N;
            return sample_scattering_block(static_cast<int>(p.beta), p.N, nRight, rng);
        }
        case Family::crossover:
            if (auto* p = std::get_if<CrossoverParams>(&params))
                return sample_crossover(*p, rng);
            fail(errc::unsupported_family, "crossover needs CrossoverParams");
    }
    fail(errc::unsupported_family, "unknown ensemble family");
}

std::vector<double> hermitian_eigen(const ComplexMatrix& M, double tol,
                                    ComplexMatrix* eigenvectors) {
    if (M.rows() != M.cols()) fail(errc::not_hermitian, "matrix is not square");
    long n = M.rows();
    double scale = 0.0;
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) scale = std::max(scale, std::abs(M(i, j)));
    double bound = tol * std::max(1.0, scale);
    for (long i = 0; i < n; ++i)
        for (long j = i; j < n; ++j)
            if (std::abs(M(i, j) - std::conj(M(j, i))) > bound)
                fail(errc::not_hermitian, "matrix deviates from Hermitian symmetry");

    ComplexMatrix a(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) a(i, j) = 0.5 * (M(i, j) + std::conj(M(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    for (int sweep = 0; sweep < 80; ++sweep) {
        double off = 0.0;
        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) off += 2.0 * std::norm(a(p, q));
        off = std::sqrt(off);
        if (off <= tol * std::max(1.0, scale)) break;
        if (sweep == 79)
            fail(errc::ill_conditioned, "jacobi sweep limit reached");

        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) {
                double g = std::abs(a(p, q));
                if (g < 1e-300) continue;
                std::complex<double> phase = a(p, q) / g;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double tau = (aqq - app) / (2.0 * g);
                double t = (tau >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double sReal = t * c;
                std::complex<double> s = sReal * phase;

                // columns: (AR) with R = [[c, s'],[ -conj(s'), c]] structure
                for (long i = 0; i < n; ++i) {
                    std::complex<double> aip = a(i, p);
                    std::complex<double> aiq = a(i, q);
                    a(i, p) = c * aip - std::conj(s) * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (long j = 0; j < n; ++j) {
                    std::complex<double> apj = a(p, j);
                    std::complex<double> aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = std::conj(s) * apj + c * aqj;
                }
                if (eigenvectors) {
                    for (long i = 0; i < n; ++i) {
                        std::complex<double> vip = v(i, p);
                        std::complex<double> viq = v(i, q);
                        v(i, p) = c * vip - std::conj(s) * viq;
                        v(i, q) = s * vip + c * viq;
                    }
                }
            }
    }

    std::vector<long> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0L);
    std::sort(order.begin(), order.end(),
              [&](long x, long y) { return a(x, x).real() < a(y, y).real(); });
    std::vector<double> eigs(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) eigs[static_cast<size_t>(i)] = a(order[i], order[i]).real();
    if (eigenvectors) {
        *eigenvectors = ComplexMatrix(n, n);
        for (long j = 0; j < n; ++j)
            for (long i = 0; i < n; ++i) (*eigenvectors)(i, j) = v(i, order[j]);
    }
    return eigs;
}

std::vector<double> symmetric_eigen(const RealMatrix& M, double tol,
                                    RealMatrix* eigenvectors) {
    ComplexMatrix vc;
    std::vector<double> eigs =
        hermitian_eigen(to_complex(M), tol, eigenvectors ? &vc : nullptr);
    if (eigenvectors) {
        *eigenvectors = RealMatrix(M.rows(), M.cols());
        for (long i = 0; i < M.rows(); ++i)
            for (long j = 0; j < M.cols(); ++j) (*eigenvectors)(i, j) = vc(i, j).real();
    }
    return eigs;
}

namespace {

using LPoly = std::vector<long double>;  // coefficient of x^k at index k

long degree(const LPoly& p) { return static_cast<long>(p.size()) - 1; }

void normalize_max(LPoly& p) {
    long double m = 0.0L;
    for (long double c : p) m = std::max(m, std::fabs(c));
    if (m > 0.0L)
        for (long double& c : p) c /= m;
}

// Remainder of a by b (b has nonzero leading coefficient), in place of a.
void rem_inplace(LPoly& a, const LPoly& b) {
    long db = degree(b);
    while (degree(a) >= db) {
        long da = degree(a);
        long double f = a.back() / b.back();
        for (long k = 0; k <= db; ++k) a[static_cast<size_t>(da - db + k)] -= f * b[static_cast<size_t>(k)];
        a.pop_back();
        while (a.size() > 1 && a.back() == 0.0L) a.pop_back();
    }
}

int sign_of(long double x) { return x > 0.0L ? 1 : (x < 0.0L ? -1 : 0); }

// Real roots of p counted with multiplicity: the Sturm chain counts the
// distinct ones, and when it bottoms out at a nontrivial gcd(p, p') the
// repeated roots are exactly the roots of that gcd, counted recursively.
long real_root_count(const LPoly& p, double tol) {
    if (degree(p) < 1) return 0;

    LPoly d(static_cast<size_t>(degree(p)));
    for (long k = 1; k <= degree(p); ++k)
        d[static_cast<size_t>(k - 1)] = p[static_cast<size_t>(k)] * k;
    normalize_max(d);

    std::vector<LPoly> chain{p, d};
    LPoly gcd;
    while (degree(chain.back()) > 0) {
        LPoly r = chain[chain.size() - 2];
        rem_inplace(r, chain.back());
        long double m = 0.0L;
        for (long double x : r) m = std::max(m, std::fabs(x));
        if (m <= 1e-14L) {  // numerically a gcd: square-free part reached
            gcd = chain.back();
            break;
        }
        // drop hard zeros, then reject an ambiguous leading sign
        while (r.size() > 1 && std::fabs(r.back()) <= 1e-17L * m) r.pop_back();
        if (std::fabs(r.back()) < tol * m)
            fail(errc::ill_conditioned, "ambiguous Sturm sign");
        for (long double& x : r) x = -x / m;
        chain.push_back(std::move(r));
    }

    int prevNeg = 0, prevPos = 0, changesNeg = 0, changesPos = 0;
    for (const LPoly& f : chain) {
        int lead = sign_of(f.back());
        if (lead == 0) continue;
        int atNeg = (degree(f) % 2 == 0) ? lead : -lead;
        if (prevNeg != 0 && atNeg != prevNeg) ++changesNeg;
        if (prevPos != 0 && lead != prevPos) ++changesPos;
        prevNeg = atNeg;
        prevPos = lead;
    }
    long distinct = changesNeg - changesPos;
    return distinct + real_root_count(gcd, tol);
}

}  // namespace

long count_real_eigs(const RealMatrix& M, double tol) {
    long n = M.rows();
    if (n != M.cols()) fail(errc::bad_arguments, "matrix is not square");
    if (n > 8) fail(errc::too_large, "real-eigenvalue count supports N <= 8");
    if (n == 0) return 0;

    // Faddeev-LeVerrier: p(x) = x^n + c[1] x^(n-1) + ... + c[n]
    std::vector<long double> ak(static_cast<size_t>(n * n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) ak[static_cast<size_t>(i * n + j)] = M(i, j);
    std::vector<long double> c(static_cast<size_t>(n + 1));
    c[0] = 1.0L;
    std::vector<long double> next(static_cast<size_t>(n * n));
    for (long k = 1; k <= n; ++k) {
        long double trace = 0.0L;
        for (long i = 0; i < n; ++i) trace += ak[static_cast<size_t>(i * n + i)];
        c[static_cast<size_t>(k)] = -trace / k;
        if (k == n) break;
        for (long i = 0; i < n; ++i)
            ak[static_cast<size_t>(i * n + i)] += c[static_cast<size_t>(k)];
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j) {
                long double s = 0.0L;
                for (long l = 0; l < n; ++l)
                    s += M(i, l) * ak[static_cast<size_t>(l * n + j)];
                next[static_cast<size_t>(i * n + j)] = s;
            }
        ak.swap(next);
    }

    LPoly p(static_cast<size_t>(n + 1));
    for (long k = 0; k <= n; ++k) p[static_cast<size_t>(n - k)] = c[static_cast<size_t>(k)];
    normalize_max(p);

    return real_root_count(p, tol);
}

SampleReport compare_to_exact(const std::string& name, std::vector<double> samples,
                              const std::function<double(double)>& exactCdf) {
    long n = static_cast<long>(samples.size());
    if (n < 1000) fail(errc::bad_arguments, "need at least 10^3 samples");
    SampleReport report;
    report.statisticName = name;
    report.sampleCount = n;

    double sum = 0.0;
    for (double x : samples) sum += x;
    report.mean = sum / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - report.mean) * (x - report.mean);
    report.stderrOfMean = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));

    std::sort(samples.begin(), samples.end());
    double ks = 0.0;
    for (long i = 0; i < n; ++i) {
        double f = exactCdf(samples[static_cast<size_t>(i)]);
        double hi = static_cast<double>(i + 1) / n - f;
        double lo = f - static_cast<double>(i) / n;
        ks = std::max(ks, std::max(hi, lo));
    }
    report.ksStatistic = ks;
    report.pass = ks * std::sqrt(static_cast<double>(n)) <= kKsCritical;

    const int bins = 40;
    double lo = samples.front(), hi = samples.back();
    double width = (hi - lo) > 0 ? (hi - lo) : 1.0;
    report.histogramEdges.resize(bins + 1);
    report.histogramCounts.assign(bins, 0);
    for (int b = 0; b <= bins; ++b)
        report.histogramEdges[static_cast<size_t>(b)] = lo + width * b / bins;
    for (double x : samples) {
        int b = static_cast<int>((x - lo) / width * bins);
        b = std::clamp(b, 0, bins - 1);
        ++report.histogramCounts[static_cast<size_t>(b)];
    }
    return report;
}

SampleReport compare_to_exact(const std::string& name, std::vector<double> samples,
                              const PiecewisePuiseux& exact, CompareMode mode) {
    if (mode == CompareMode::ks)
        return compare_to_exact(name, std::move(samples),
                                [&exact](double t) { return exact.cdf(t); });
    return compare_to_exact(name, std::move(samples), exact.moment(1), mode);
}

SampleReport compare_to_exact(const std::string& name, std::vector<double> samples,
                              const SymbolicValue& exactMean, CompareMode mode) {
    if (mode != CompareMode::meanStderr)
        fail(errc::bad_arguments, "a scalar exact value only supports meanStderr");
    long n = static_cast<long>(samples.size());
    if (n < 1000) fail(errc::bad_arguments, "need at least 10^3 samples");
    SampleReport report;
    report.statisticName = name;
    report.sampleCount = n;
    double sum = 0.0;
    for (double x : samples) sum += x;
    report.mean = sum / n;
    double ss = 0.0;
    for (double x : samples) ss += (x - report.mean) * (x - report.mean);
    report.stderrOfMean = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    report.pass =
        std::abs(report.mean - exactMean.to_double()) <= kMeanSigmas * report.stderrOfMean;

    const int bins = 40;
    auto [mnIt, mxIt] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mnIt, hi = *mxIt;
    double width = (hi - lo) > 0 ? (hi - lo) : 1.0;
    report.histogramEdges.resize(bins + 1);
    report.histogramCounts.assign(bins, 0);
    for (int b = 0; b <= bins; ++b)
        report.histogramEdges[static_cast<size_t>(b)] = lo + width * b / bins;
    for (double x : samples) {
        int b = static_cast<int>((x - lo) / width * bins);
        b = std::clamp(b, 0, bins - 1);
        ++report.histogramCounts[static_cast<size_t>(b)];
    }
    return report;
}

long thread_cap() {
    long hw = static_cast<long>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("RMT_EXACT_THREADS")) {
        char* end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) return std::min(cap, hw);
    }
    return hw;
}

std::vector<double> sample_statistic(long count, uint64_t seed,
                                     const std::function<double(RngStream&)>& statistic) {
    if (count <= 0) return {};
    std::vector<double> out(static_cast<size_t>(count));
    long jobs = std::min<long>(64, count);
    std::atomic<long> nextJob{0};
    auto worker = [&]() {
        while (true) {
            long j = nextJob.fetch_add(1);
            if (j >= jobs) return;
            RngStream rng(seed, static_cast<uint64_t>(j));
            long lo = count * j / jobs;
            long hi = count * (j + 1) / jobs;
            for (long i = lo; i < hi; ++i) out[static_cast<size_t>(i)] = statistic(rng);
        }
    };
    long threads = std::min(thread_cap(), jobs);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (long t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

double conductance_sample(int beta, long nLeft, long nRight, RngStream& rng) {
    ComplexMatrix t = sample_scattering_block(beta, nLeft, nRight, rng);
    double g = 0.0;
    for (long i = 0; i < t.rows(); ++i)
        for (long j = 0; j < t.cols(); ++j) g += std::norm(t(i, j));
    return g;
}

double spacing_ratio_sample(const CrossoverParams& params, RngStream& rng) {
    CrossoverParams p = params;
    p.N = 3;
    while (true) {
        ComplexMatrix h = sample_crossover(p, rng);
        std::vector<double> eigs = hermitian_eigen(h, 1e-12);
        double lower = eigs[1] - eigs[0];
        if (lower > 1e-13) return (eigs[2] - eigs[1]) / lower;
    }
}

std::vector<double> eigvec_component_samples(const CrossoverParams& params,
                                             RngStream& rng) {
    params.validate();
    long N = params.N;
    ComplexMatrix h = sample_crossover(params, rng);
    ComplexMatrix v;
    hermitian_eigen(h, 1e-11, &v);
    std::vector<double> out;
    out.reserve(static_cast<size_t>((N / 3 + 1) * N));
    for (long j = N / 3; j < 2 * N / 3; ++j)
        for (long i = 0; i < N; ++i)
            out.push_back(static_cast<double>(N) * std::norm(v(i, j)));
    return out;
}

std::vector<double> hs_spectrum_sample(const BipartiteDims& dims, RngStream& rng) {
    return hermitian_eigen(sample_fixed_trace_hs(dims, rng), 1e-12);
}

std::vector<double> bh_spectrum_sample(const BipartiteDims& dims, RngStream& rng) {
    return hermitian_eigen(sample_fixed_trace_bh(dims, rng), 1e-12);
}

long real_eig_count_sample(const ProductSpec& spec, RngStream& rng) {
    spec.validate();
    while (true) {
        RealMatrix prod(0, 0);
        if (spec.truncationDims.empty()) {
            prod = sample_real_ginibre(spec.N, spec.N, rng);
            for (long f = 1; f < spec.m; ++f)
                prod = matmul(prod, sample_real_ginibre(spec.N, spec.N, rng));
        } else {
            prod = sample_truncated_orthogonal(spec.truncationDims[0], spec.N, rng);
            for (long f = 1; f < spec.m; ++f)
                prod = matmul(prod, sample_truncated_orthogonal(
                                        spec.truncationDims[static_cast<size_t>(f)],
                                        spec.N, rng));
        }
        try {
            return count_real_eigs(prod, 1e-9);
        } catch (const error& e) {
            if (e.code() != errc::ill_conditioned) throw;
        }
    }
}

FidelitySample fidelity_sample(const BipartiteDims& dims1, const BipartiteDims& dims2,
                               RngStream& rng) {
    if (dims1.N != 2 || dims2.N != 2)
        fail(errc::too_large, "fidelity sampling uses the qubit closed form");
    ComplexMatrix rho = sample_fixed_trace_hs(dims1, rng);
    ComplexMatrix sigma = sample_fixed_trace_hs(dims2, rng);
    auto det2 = [](const ComplexMatrix& m) {
        return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    };
    double trProd = 0.0;
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j) trProd += (rho(i, j) * sigma(j, i)).real();
    double distSq = 0.0;
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j) distSq += std::norm(rho(i, j) - sigma(i, j));
    FidelitySample s;
    s.distSq = distSq;
    double cross = std::max(det2(rho), 0.0) * std::max(det2(sigma), 0.0);
    s.fidelity = trProd + 2.0 * std::sqrt(cross);
    s.sqrtFidelity = std::sqrt(std::max(s.fidelity, 0.0));
    return s;
}

}  // namespace rmx
