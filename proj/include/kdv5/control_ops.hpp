#pragma once

#include "kdv5/multiplier.hpp"
#include "kdv5/profile.hpp"

namespace kdv5 {

// (G h)(x) = g(x) (h(x) - int g(y) h(y) dy). Products are formed pointwise on
// the collocation grid and the result is truncated to the retained band once,
// so mean(G h) vanishes to roundoff and G is exactly self-adjoint in the
// discrete pairing.
SpectralField apply_g_op(const SpectralField& h, const ControlProfile& p);

// Sample-level version without the end truncation (operator-identity checks
// compose at this level).
GridFunction apply_g_op(const GridFunction& h, const ControlProfile& p);

// G(D^gamma(G u)). gamma = 2l-1 is the stabilizing feedback, gamma = 3/2 the
// control actuation gain.
SpectralField feedback(const SpectralField& u, double gamma, const ControlProfile& p);

// Dissipation quadratic form ||D^{gamma/2}(G u)||^2 = (u, G D^gamma G u).
double control_dissipation(const SpectralField& u, double gamma, const ControlProfile& p);

// max over random unit-||.||_{r+s-1} fields f of ||D^r [D^s; psi] f||, an
// empirical stand-in for the commutator constant c(r;s;psi).
double commutator_constant(double r, double s, const SpectralField& psi, int trials,
                           unsigned long long seed = 1234);

}  // namespace kdv5
