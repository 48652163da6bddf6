#pragma once
#include <stdexcept>
#include <string>

namespace gammabarnes {

// Common base so callers can catch anything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct PoleError : Error { using Error::Error; };          // log_gamma at a nonpositive integer
struct SectorMismatch : Error { using Error::Error; };     // parity precondition violated
struct OriginError : Error { using Error::Error; };        // plane propagator at z = 0
struct SectorError : Error { using Error::Error; };        // plane power with non-integer winding
struct DivergentError : Error { using Error::Error; };     // integrand decay exponent <= 0
struct NaNError : Error { using Error::Error; };           // NaN/Inf encountered mid-quadrature
struct BudgetError : Error { using Error::Error; };        // node budget exceeded (multi-fold)
struct PinchedError : Error { using Error::Error; };       // contour pinched between poles
struct TruncationError : Error { using Error::Error; };    // series truncation bound not met
struct DegenerateError : Error { using Error::Error; };    // closed form degenerates (sin -> 0)
struct NonIntegrableError : Error { using Error::Error; }; // plane integrand not absolutely integrable
struct CutoffError : Error { using Error::Error; };        // plane cutoff too small for requested accuracy
struct ConstraintError : Error { using Error::Error; };    // case parameters violate identity constraints
struct FitError : Error { using Error::Error; };           // extrapolation model fit rejected
struct ConfigError : Error { using Error::Error; };        // suite configuration malformed

} // namespace gammabarnes
