#ifndef TTV_ERRORS_HPP
#define TTV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ttv {

// Typed failure reasons. Validation-class codes map to CLI exit status 2,
// numerical-class codes to exit status 3.
enum class errc {
    non_finite,
    non_positive_mean,
    non_positive_sample,
    too_few_samples,
    zero_variance,
    probability_out_of_range,
    non_finite_departure,
    non_risk_averse,
    degenerate_variability,
    step_too_large,
    moment_not_finite,
    convergence_failure,
    tail_divergence,
    curvature_unstable,
    cross_check_failed,
    seed_required,
    too_few_draws,
    parse_error,
    file_not_found,
    io_error,
    validation_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::non_finite:               return "NonFinite";
        case errc::non_positive_mean:        return "NonPositiveMean";
        case errc::non_positive_sample:      return "NonPositiveSample";
        case errc::too_few_samples:          return "TooFewSamples";
        case errc::zero_variance:            return "ZeroVariance";
        case errc::probability_out_of_range: return "ProbabilityOutOfRange";
        case errc::non_finite_departure:     return "NonFiniteDeparture";
        case errc::non_risk_averse:          return "NonRiskAverse";
        case errc::degenerate_variability:   return "DegenerateVariability";
        case errc::step_too_large:           return "StepTooLarge";
        case errc::moment_not_finite:        return "MomentNotFinite";
        case errc::convergence_failure:      return "ConvergenceFailure";
        case errc::tail_divergence:          return "TailDivergence";
        case errc::curvature_unstable:       return "NumericalCurvatureUnstable";
        case errc::cross_check_failed:       return "CrossCheckFailed";
        case errc::seed_required:            return "SeedRequired";
        case errc::too_few_draws:            return "TooFewDraws";
        case errc::parse_error:              return "ParseError";
        case errc::file_not_found:           return "FileNotFound";
        case errc::io_error:                 return "IoError";
        case errc::validation_error:         return "ValidationError";
    }
    return "UnknownError";
}

// Numerical failures are those where the inputs were admissible but a
// computation could not meet its accuracy or convergence contract.
inline bool is_numerical(errc c) {
    switch (c) {
        case errc::moment_not_finite:
        case errc::convergence_failure:
        case errc::tail_divergence:
        case errc::curvature_unstable:
        case errc::cross_check_failed:
            return true;
        default:
            return false;
    }
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

} // namespace ttv

#endif // TTV_ERRORS_HPP
