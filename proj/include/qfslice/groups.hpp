#pragma once

#include "qfslice/moebius.hpp"

namespace qfslice {

/// Complex Fenchel-Nielsen coordinates: complex length of A and complex
/// twist along it.
struct CfnParams {
  Complex lambda;
  Complex tau;
};

/// Marked generator pair (A, B). For a punctured torus group the commutator
/// A B A^-1 B^-1 is parabolic with trace -2.
struct MarkedPair {
  MoebiusMatrix A;
  MoebiusMatrix B;

  Complex trA() const { return A.trace(); }
  Complex trB() const { return B.trace(); }
  Complex trAB() const { return mul(A, B).trace(); }
  Complex commutator_trace() const { return commutator(A, B).trace(); }
};

/// Earle slice parameter d (d != 0, 2d^2 + 1 != 0).
struct EarleParam {
  Complex d;
};

/// Generators with Tr A = 2 cosh(lambda/2) and Tr B = 2 coth(lambda/2) cosh(tau/2):
///
///   A = | ch      ch + 1 |    B = | cosh(tau/2) coth(lambda/4)   -sinh(tau/2)               |
///       | ch - 1  ch     |        | -sinh(tau/2)                 cosh(tau/2) tanh(lambda/4) |
///
/// with ch = cosh(lambda/2). Throws DomainError when lambda is in 2 pi i Z.
MarkedPair cfn_generators(const CfnParams& p);

/// 2 coth(lambda/2) cosh(tau/2), the trace of B on the plane lambda_A = lambda.
Complex trace_twist_relation(Complex lambda, Complex tau);

/// Inverse of trace_twist_relation for real lambda > 0. Returns the principal
/// preimage 2 acosh(trB / (2 coth(lambda/2))); for trB in the closed right
/// half plane it lies in Re tau >= 0, -pi < Im tau <= pi, and the folded
/// interval (0, 2 coth(lambda/2)] lands on i[0, pi).
Complex invert_twist(Complex lambda, Complex trB);

/// Earle slice matrices A_d, B_d. B_d is A_d with off-diagonal signs flipped,
/// so an order-two elliptic swaps them and their traces agree.
MarkedPair earle_generators(const EarleParam& e);

/// Tr(A_d^-2 B_d), the trace of the special word of slope 2/1.
Complex trace_W21(const EarleParam& e);

/// Some marked pair realising the trace triple (x, y, z) = (Tr A, Tr B, Tr AB):
/// A = [[x, 1], [-1, 0]], B = [[0, s], [-1/s, y]] with s + 1/s = -z.
MarkedPair generators_from_traces(Complex x, Complex y, Complex z);

} // namespace qfslice
