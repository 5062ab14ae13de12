#include "qfslice/groups.hpp"

#include <cmath>
#include <numbers>

namespace qfslice {

namespace {

// coth(u) and tanh(u) for u = lambda/4 through e = exp(-lambda/2), which stays
// accurate for large |lambda| where cosh/sinh overflow or cancel.
struct QuarterHyperbolics {
  Complex coth;
  Complex tanh;
};

QuarterHyperbolics quarter_hyperbolics(Complex lambda) {
  const bool flip = lambda.real() < 0.0;
  const Complex e = std::exp(flip ? lambda / 2.0 : -lambda / 2.0);
  const Complex num = 1.0 + e;
  const Complex den = 1.0 - e;
  QuarterHyperbolics h{num / den, den / num};
  if (flip) {
    h.coth = -h.coth;
    h.tanh = -h.tanh;
  }
  return h;
}

// lambda/2 in i pi Z makes sinh(lambda/2) vanish: coth(lambda/4) or tanh(lambda/4) blows up.
void require_off_poles(Complex lambda) {
  require_finite(lambda, "lambda");
  if (std::abs(std::sinh(lambda / 2.0)) < 1e-12) {
    throw DomainError("lambda lies on a pole of coth(lambda/2) (lambda in 2 pi i Z)");
  }
}

Complex coth_half(Complex lambda) {
  const bool flip = lambda.real() < 0.0;
  const Complex e = std::exp(flip ? lambda : -lambda);
  const Complex c = (1.0 + e) / (1.0 - e);
  return flip ? -c : c;
}

} // namespace

MarkedPair cfn_generators(const CfnParams& p) {
  require_off_poles(p.lambda);
  require_finite(p.tau, "tau");
  const Complex ch = std::cosh(p.lambda / 2.0);
  const auto q = quarter_hyperbolics(p.lambda);
  const Complex ct = std::cosh(p.tau / 2.0);
  const Complex st = std::sinh(p.tau / 2.0);
  MarkedPair g;
  g.A = {ch, ch + 1.0, ch - 1.0, ch};
  g.B = {ct * q.coth, -st, -st, ct * q.tanh};
  return g;
}

Complex trace_twist_relation(Complex lambda, Complex tau) {
  require_off_poles(lambda);
  require_finite(tau, "tau");
  return 2.0 * coth_half(lambda) * std::cosh(tau / 2.0);
}

Complex invert_twist(Complex lambda, Complex trB) {
  require_finite(trB, "trB");
  if (!(lambda.real() > 0.0) || lambda.imag() != 0.0) {
    throw DomainError("invert_twist requires real lambda > 0");
  }
  require_off_poles(lambda);
  if (trB == Complex(0.0)) {
    throw DomainError("trB = 0 has no preimage in the twist strip");
  }
  const Complex w = trB / (2.0 * coth_half(lambda));
  return 2.0 * std::acosh(w);
}

MarkedPair earle_generators(const EarleParam& e) {
  const Complex d = e.d;
  require_finite(d, "d");
  const Complex s = 2.0 * d * d + 1.0;
  if (std::abs(d) < 1e-12 || std::abs(s) < 1e-12) {
    throw DomainError("Earle parameter excluded (d = 0 or 2d^2 + 1 = 0)");
  }
  const Complex diag = (d * d + 1.0) / d;
  const Complex upper = d * d * d / s;
  const Complex lower = s / d;
  MarkedPair g;
  g.A = MoebiusMatrix::unimodular(diag, upper, lower, d);
  g.B = MoebiusMatrix::unimodular(diag, -upper, -lower, d);
  return g;
}

Complex trace_W21(const EarleParam& e) {
  const MarkedPair g = earle_generators(e);
  const MoebiusMatrix a_inv = inverse(g.A);
  return mul(mul(a_inv, a_inv), g.B).trace();
}

MarkedPair generators_from_traces(Complex x, Complex y, Complex z) {
  // s solves s^2 + z s + 1 = 0; either root works, the product of roots is 1.
  const Complex disc = std::sqrt(z * z - 4.0);
  Complex s = (-z + disc) / 2.0;
  const Complex other = (-z - disc) / 2.0;
  if (std::abs(other) > std::abs(s)) s = other;
  MarkedPair g;
  g.A = {x, Complex(1.0), Complex(-1.0), Complex(0.0)};
  g.B = {Complex(0.0), s, -1.0 / s, y};
  return g;
}

} // namespace qfslice
