#pragma once

#include <stdexcept>
#include <string>

namespace srbloch {

// Base for all recoverable errors raised by the library. The CLI maps
// ValidationError to exit code 2 and NumericError to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

// core
struct NonPositiveTime : ValidationError { using ValidationError::ValidationError; };
struct T2Bound : ValidationError { using ValidationError::ValidationError; };
struct BlochBound : ValidationError { using ValidationError::ValidationError; };
struct NotHermitian : ValidationError { using ValidationError::ValidationError; };
struct InvalidDensity : ValidationError { using ValidationError::ValidationError; };

// dynamics
struct StepSizeUnderflow : NumericError { using NumericError::NumericError; };
struct MaxStepsExceeded : NumericError { using NumericError::NumericError; };
struct InsufficientSamples : NumericError { using NumericError::NumericError; };

// steady_state
struct ZeroDrive : ValidationError { using ValidationError::ValidationError; };
struct NonUniformSampling : ValidationError { using ValidationError::ValidationError; };
struct WindowNotPeriodAligned : ValidationError { using ValidationError::ValidationError; };

// sr_analysis
struct EmptyGrid : ValidationError { using ValidationError::ValidationError; };

// pulse_sim
struct FitDiverged : NumericError { using NumericError::NumericError; };
struct InsufficientSpan : ValidationError { using ValidationError::ValidationError; };
struct NonPositiveAmplitude : ValidationError { using ValidationError::ValidationError; };

// io
struct ConfigParse : ValidationError { using ValidationError::ValidationError; };
struct ValidationFailed : ValidationError { using ValidationError::ValidationError; };
struct IoFailure : Error { using Error::Error; };

}  // namespace srbloch
