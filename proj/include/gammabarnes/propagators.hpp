#pragma once
#include "gammabarnes/errors.hpp"
#include "gammabarnes/gamma_core.hpp"

namespace gammabarnes {

// Coordinate on the plane; the conjugate is always taken from z itself.
struct PlanePoint {
    cxd z{0.0, 0.0};
};

// Plane power propagator s_alpha(z) = z^(-alpha) zbar^(-alphabar)
//                                   = |z|^(-2<alpha>) exp(-i [alpha] arg z).
// Single-valued iff [alpha] is an integer, i.e. twice_m even.
cxd s_prop(const PlanePoint& z, const Index& alpha);

// Field-point propagator
//   S_alpha(u) = (-1)^[alpha/2 + u] bGamma((1-alpha)/2 + u) bGamma((1-alpha)/2 - u),
// requiring [alpha/2 + u] to be an integer (twice_m + 2 twice_n = 0 mod 4).
GammaValue S_prop(const FieldPoint& u, const Index& alpha);

// Reflection-symmetric propagator: the four-factor product
//   D_alpha(z1, z2) = bGamma((1-alpha)/2 +- z1 +- z2),
// even in each argument and symmetric under z1 <-> z2.
GammaValue D_prop(const FieldPoint& z1, const FieldPoint& z2, const Index& alpha);

// The column (1 - alpha)/2 in (twice, nu) coordinates; shared by S_prop,
// D_prop and the lattice reductions of the chain and star-triangle rules.
FieldPoint half_shift(const Index& alpha);

} // namespace gammabarnes
