#pragma once
#include <complex>
#include <cmath>

namespace testutil {

using cxd = std::complex<double>;

// relative error with absolute fallback near zero
inline double rel(cxd got, cxd want) {
    double mag = std::abs(want);
    return mag > 1e-12 ? std::abs(got - want) / mag : std::abs(got - want);
}

inline double rel(double got, double want) { return rel(cxd(got, 0.0), cxd(want, 0.0)); }

} // namespace testutil
