#pragma once

#include <stdexcept>
#include <string>

namespace abcf {

enum class Errc {
    invalid_denominator,
    unsupported_field,
    undefined_floor,
    domain_error,
    digit_underflow,
    digit_overflow,
    nonconvergent_sequence,
    invalid_params,
    parse_error,
    degenerate_geodesic,
    finiteness_undetected,
    unsupported_params,
    case_mismatch,
    inconsistent_domain,
    expansion_exhausted,
    reduction_failed,
    inversion_failed,
    ambiguous_boundary,
    not_reduced,
    formula_domain_error,
    not_markov,
    malformed_sequence,
    singular_rectangle,
    infinite_measure,
    unsupported_case,
    ill_conditioned_point,
    rational_input,
    use_iterate_check,
};

inline const char* errc_name(Errc e)
{
    switch (e) {
    case Errc::invalid_denominator: return "invalid-denominator";
    case Errc::unsupported_field: return "unsupported-field";
    case Errc::undefined_floor: return "undefined-floor";
    case Errc::domain_error: return "domain-error";
    case Errc::digit_underflow: return "digit-underflow";
    case Errc::digit_overflow: return "digit-overflow";
    case Errc::nonconvergent_sequence: return "nonconvergent-sequence";
    case Errc::invalid_params: return "invalid-params";
    case Errc::parse_error: return "parse-error";
    case Errc::degenerate_geodesic: return "degenerate-geodesic";
    case Errc::finiteness_undetected: return "finiteness-undetected";
    case Errc::unsupported_params: return "unsupported-params";
    case Errc::case_mismatch: return "case-mismatch";
    case Errc::inconsistent_domain: return "inconsistent-domain";
    case Errc::expansion_exhausted: return "expansion-exhausted";
    case Errc::reduction_failed: return "reduction-failed";
    case Errc::inversion_failed: return "inversion-failed";
    case Errc::ambiguous_boundary: return "ambiguous-boundary";
    case Errc::not_reduced: return "not-reduced";
    case Errc::formula_domain_error: return "formula-domain-error";
    case Errc::not_markov: return "not-markov";
    case Errc::malformed_sequence: return "malformed-sequence";
    case Errc::singular_rectangle: return "singular-rectangle";
    case Errc::infinite_measure: return "infinite-measure";
    case Errc::unsupported_case: return "unsupported-case";
    case Errc::ill_conditioned_point: return "ill-conditioned-point";
    case Errc::rational_input: return "rational-input";
    case Errc::use_iterate_check: return "use-iterate-check";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace abcf
