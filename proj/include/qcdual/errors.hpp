#pragma once

#include <stdexcept>
#include <string>

namespace qcdual {

// Every failure the library reports deliberately, keyed so callers can
// branch on the condition instead of parsing messages.
enum class ErrorKind {
    parse_error,
    modulus_below_two,
    invalid_params,
    moduli_mismatch,
    budget_exceeded,
    no_index_within_limit,
    insufficient_support,
    non_monotone_moduli,
    not_quasiconvex,
    zero_element,
    all_candidates_skipped,
    internal,
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::parse_error: return "ParseError";
        case ErrorKind::modulus_below_two: return "ModulusBelowTwo";
        case ErrorKind::invalid_params: return "InvalidParams";
        case ErrorKind::moduli_mismatch: return "ModuliMismatch";
        case ErrorKind::budget_exceeded: return "BudgetExceeded";
        case ErrorKind::no_index_within_limit: return "NoIndexWithinLimit";
        case ErrorKind::insufficient_support: return "InsufficientSupport";
        case ErrorKind::non_monotone_moduli: return "NonMonotoneModuli";
        case ErrorKind::not_quasiconvex: return "NotQuasiConvex";
        case ErrorKind::zero_element: return "ZeroElement";
        case ErrorKind::all_candidates_skipped: return "AllCandidatesSkipped";
        case ErrorKind::internal: return "InternalError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace qcdual
