#include "gammabarnes/propagators.hpp"

#include <cmath>

namespace gammabarnes {

cxd s_prop(const PlanePoint& zp, const Index& alpha) {
    if (zp.z == cxd(0.0, 0.0)) throw OriginError("s_prop at z = 0");
    if (alpha.twice_m % 2 != 0)
        throw SectorError("s_prop: [alpha] must be an integer for single-valuedness");
    long long disc = alpha.twice_m / 2; // [alpha]
    double r = std::abs(zp.z), th = std::arg(zp.z);
    // |z|^(-2 sigma) exp(-i [alpha] arg z) with complex sigma
    cxd expnt = -2.0 * alpha.sigma * std::log(r) - cxd(0.0, 1.0) * static_cast<double>(disc) * th;
    return std::exp(expnt);
}

FieldPoint half_shift(const Index& alpha) {
    // (1 - alpha)/2: discrete part -[alpha]/2 (twice = -twice_m/2), continuous
    // part (1 - sigma)/2.
    if (alpha.twice_m % 2 != 0)
        throw SectorMismatch("half_shift: twice_m must be even to stay on the lattice");
    return {-alpha.twice_m / 2, 0.5 * (1.0 - alpha.sigma)};
}

GammaValue S_prop(const FieldPoint& u, const Index& alpha) {
    // Parity coordination: [alpha/2 + u] = twice_m/4 + twice_n/2 must be an
    // integer.
    int q = alpha.twice_m + 2 * u.twice_n;
    if (q % 4 != 0) throw SectorMismatch("S_prop: [alpha/2 + u] is not an integer");
    double sign = parity_sign(q / 4);
    FieldPoint c = half_shift(alpha);
    const FieldPoint cols[] = {c + u, c - u};
    const double rates[] = {1.0, -1.0};
    GammaValue g = detail::bgamma_product(cols, rates);
    if (g.kind == Kind::FINITE) g.value *= sign;
    return g;
}

GammaValue D_prop(const FieldPoint& z1, const FieldPoint& z2, const Index& alpha) {
    int q = alpha.twice_m + 2 * z1.twice_n + 2 * z2.twice_n;
    if (q % 4 != 0)
        throw SectorMismatch("D_prop: sector parity violated by (1-alpha)/2 +- z1 +- z2");
    FieldPoint c = half_shift(alpha);
    const FieldPoint cols[] = {c + z1 + z2, c + z1 - z2, c - z1 + z2, c - z1 - z2};
    const double rates[] = {1.0, 1.0, -1.0, -1.0};
    return detail::bgamma_product(cols, rates);
}

} // namespace gammabarnes
