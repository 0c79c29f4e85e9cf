#pragma once

#include <stdexcept>
#include <string>

namespace rmx {

// Machine-readable failure codes. Codes in the `internal` class indicate a
// broken invariant of the computation itself (a bug or a falsified
// assumption); codes in the `validation` class indicate unusable input.
enum class errc {
    // exact algebra
    unsupported_term,
    non_integrable,
    basis_violation,
    division_by_zero,
    zero_divisor,
    // recursion / templates
    template_violation,
    too_large,
    // inverse Laplace
    unsupported_inversion,
    nonpositive_exponent,
    // exact-value residues that must have cancelled
    gamma_residue,
    pi_residue,
    // special-function evaluation
    not_boundary,
    out_of_range,
    odd_truncation,
    // numerics and sampling
    domain_error,
    divergent,
    quadrature_failure,
    unsupported_family,
    not_hermitian,
    ill_conditioned,
    // front end
    bad_arguments,
};

const char* errc_name(errc c) noexcept;

// True for codes that mean "the request was invalid", false for codes that
// mean "an internal consistency check failed".
bool errc_is_validation(errc c) noexcept;

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }
    const char* code_name() const noexcept { return errc_name(code_); }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline const char* errc_name(errc c) noexcept {
    switch (c) {
        case errc::unsupported_term: return "UnsupportedTerm";
        case errc::non_integrable: return "NonIntegrable";
        case errc::basis_violation: return "BasisViolation";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::zero_divisor: return "ZeroDivisor";
        case errc::template_violation: return "TemplateViolation";
        case errc::too_large: return "TooLarge";
        case errc::unsupported_inversion: return "UnsupportedInversion";
        case errc::nonpositive_exponent: return "NonpositiveExponent";
        case errc::gamma_residue: return "GammaResidue";
        case errc::pi_residue: return "PiResidue";
        case errc::not_boundary: return "NotBoundary";
        case errc::out_of_range: return "OutOfRange";
        case errc::odd_truncation: return "OddTruncation";
        case errc::domain_error: return "DomainError";
        case errc::divergent: return "Divergent";
        case errc::quadrature_failure: return "QuadratureFailure";
        case errc::unsupported_family: return "UnsupportedFamily";
        case errc::not_hermitian: return "NotHermitian";
        case errc::ill_conditioned: return "IllConditioned";
        case errc::bad_arguments: return "BadArguments";
    }
    return "UnknownError";
}

inline bool errc_is_validation(errc c) noexcept {
    switch (c) {
        case errc::domain_error:
        case errc::too_large:
        case errc::out_of_range:
        case errc::odd_truncation:
        case errc::not_boundary:
        case errc::unsupported_family:
        case errc::non_integrable:
        case errc::divergent:
        case errc::bad_arguments:
            return true;
        default:
            return false;
    }
}

}  // namespace rmx
