#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rmx/crossover.hpp"
#include "rmx/errors.hpp"
#include "rmx/fixedtrace.hpp"
#include "rmx/meijerg.hpp"
#include "rmx/puiseux.hpp"
#include "rmx/recursion.hpp"

namespace rmx {

// Deterministic substream generator: xoshiro256++ seeded through splitmix64
// from (seed, streamId). Identical pairs give identical sequences on every
// platform.
class RngStream {
  public:
    explicit RngStream(uint64_t seed, uint64_t streamId = 0);

    uint64_t next_u64();
    double next_double();  // uniform on [0, 1)
    double next_gaussian();  // standard normal, polar Box-Muller
    std::complex<double> next_complex_gaussian();  // E|z|^2 = 1

  private:
    uint64_t s_[4];
    double cache_ = 0.0;
    bool haveCache_ = false;
};

template <typename T>
class DenseMatrix {
  public:
    DenseMatrix() = default;
    DenseMatrix(long rows, long cols)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols)) {}

    static DenseMatrix identity(long n) {
        DenseMatrix m(n, n);
        for (long i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }

    T& operator()(long i, long j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
    const T& operator()(long i, long j) const {
        return a_[static_cast<size_t>(i * cols_ + j)];
    }

  private:
    long rows_ = 0;
    long cols_ = 0;
    std::vector<T> a_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;

ComplexMatrix to_complex(const RealMatrix& m);
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);

// Element samplers.  Conventions: real Ginibre entries are N(0,1); complex
// Ginibre entries have unit mean squared modulus (weight e^{-Tr G^dag G});
// the GOE has weight e^{-Tr A^2/2} (diagonal variance 1) and the GUE
// e^{-Tr B^2} (E|B_jk|^2 = 1/2), so that the crossover combination keeps the
// e^{-sum lambda^2} eigenvalue weight at both ends.
RealMatrix sample_real_ginibre(long rows, long cols, RngStream& rng);
ComplexMatrix sample_complex_ginibre(long rows, long cols, RngStream& rng);
RealMatrix sample_goe(long N, RngStream& rng);
ComplexMatrix sample_gue(long N, RngStream& rng);

// Haar matrices via Gram-Schmidt QR of a Ginibre sample; normalizing against
// a positive R diagonal is the phase/sign convention that makes Q exactly
// Haar distributed.
ComplexMatrix sample_haar_unitary(long N, RngStream& rng);
RealMatrix sample_haar_orthogonal(long N, RngStream& rng);

// Leading N x N sub-block of an (L+N) x (L+N) Haar orthogonal matrix.
RealMatrix sample_truncated_orthogonal(long L, long N, RngStream& rng);

// Fixed-trace density matrices of a bipartite (N, n) system: Hilbert-Schmidt
// via X X^dag with X complex Ginibre, Bures-Hall via (1+U) G with U from the
// |det(1+U)|^(2(n-N))-weighted measure (rejection against Haar, envelope
// 2^(2N(n-N))).
ComplexMatrix sample_fixed_trace_hs(const BipartiteDims& dims, RngStream& rng);
ComplexMatrix sample_fixed_trace_bh(const BipartiteDims& dims, RngStream& rng);

// Transmission block t of a scattering matrix between leads with nLeft and
// nRight channels; beta = 2 uses a Haar unitary, beta = 1 the symmetric
// combination U^T U.
ComplexMatrix sample_scattering_block(int beta, long nLeft, long nRight,
                                      RngStream& rng);

// One sample of the GOE->GUE interpolating ensemble.
ComplexMatrix sample_crossover(const CrossoverParams& params, RngStream& rng);

enum class Family {
    realGinibre,
    complexGinibre,
    goe,
    gue,
    haarUnitary,
    haarOrthogonal,
    truncatedOrthogonal,
    fixedTraceHS,
    fixedTraceBH,
    scatteringBlock,
    crossover,
};

using FamilyParams =
    std::variant<EnsembleParams, BipartiteDims, CrossoverParams, ProductSpec>;

// Uniform dispatcher over the typed samplers; real samples are returned with
// zero imaginary part.  realGinibre and truncatedOrthogonal accept a
// ProductSpec and then return the m-fold matrix product used by the
// real-spectrum probabilities.  Throws UnsupportedFamily when the parameter
// bundle does not carry what the family needs.
ComplexMatrix sample_ensemble(Family family, const FamilyParams& params,
                              RngStream& rng);

// Cyclic Jacobi eigensolver for Hermitian (or real symmetric) matrices.
// Eigenvalues ascending; optional eigenvector matrix has matching columns.
std::vector<double> hermitian_eigen(const ComplexMatrix& M, double tol,
                                    ComplexMatrix* eigenvectors = nullptr);
std::vector<double> symmetric_eigen(const RealMatrix& M, double tol,
                                    RealMatrix* eigenvectors = nullptr);

// Number of real eigenvalues of a real matrix with N <= 8: characteristic
// polynomial by the Faddeev-LeVerrier recursion in extended precision, then a
// Sturm-sequence sign count. Throws IllConditioned when a Sturm sign is
// ambiguous at the given relative tolerance.
long count_real_eigs(const RealMatrix& M, double tol = 1e-9);

enum class CompareMode { ks, meanStderr };

inline constexpr double kKsCritical = 1.9495;  // significance 10^-3
inline constexpr double kMeanSigmas = 4.0;

struct SampleReport {
    std::string statisticName;
    long sampleCount = 0;
    double mean = 0.0;
    double stderrOfMean = 0.0;
    std::vector<double> histogramEdges;
    std::vector<long> histogramCounts;
    std::optional<double> ksStatistic;
    bool pass = false;
};

SampleReport compare_to_exact(const std::string& name, std::vector<double> samples,
                              const std::function<double(double)>& exactCdf);
SampleReport compare_to_exact(const std::string& name, std::vector<double> samples,
                              const PiecewisePuiseux& exact, CompareMode mode);
SampleReport compare_to_exact(const std::string& name, std::vector<double> samples,
                              const SymbolicValue& exactMean, CompareMode mode);

// Worker-pool sampling with a thread count capped by RMT_EXACT_THREADS. The
// sample stream is partitioned into fixed jobs, each with its own substream,
// so results do not depend on the number of threads.
long thread_cap();
std::vector<double> sample_statistic(long count, uint64_t seed,
                                     const std::function<double(RngStream&)>& statistic);

// Statistic helpers shared by the verification suites.
double conductance_sample(int beta, long nLeft, long nRight, RngStream& rng);
double spacing_ratio_sample(const CrossoverParams& params, RngStream& rng);

// Scaled squared components N|c_j|^2 of the eigenvectors from the middle
// third of the spectrum of one crossover sample.
std::vector<double> eigvec_component_samples(const CrossoverParams& params,
                                             RngStream& rng);

std::vector<double> hs_spectrum_sample(const BipartiteDims& dims, RngStream& rng);
std::vector<double> bh_spectrum_sample(const BipartiteDims& dims, RngStream& rng);

// Count of real eigenvalues of one product sample, redrawing the (rare)
// ill-conditioned cases.
long real_eig_count_sample(const ProductSpec& spec, RngStream& rng);

struct FidelitySample {
    double distSq = 0.0;
    double fidelity = 0.0;
    double sqrtFidelity = 0.0;
};

// Distance and fidelity statistics between two independent Hilbert-Schmidt
// samples sharing N = 2 (the fidelity closed form used is qubit-only).
FidelitySample fidelity_sample(const BipartiteDims& dims1, const BipartiteDims& dims2,
                               RngStream& rng);

}  // namespace rmx
