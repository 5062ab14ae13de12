#include "qfslice/moebius.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qfslice {

void require_finite(Complex z, const char* what) {
  if (!is_finite(z)) {
    throw DomainError(std::string(what) + " is not finite");
  }
}

MoebiusMatrix MoebiusMatrix::unimodular(Complex a, Complex b, Complex c, Complex d) {
  require_finite(a, "matrix entry");
  require_finite(b, "matrix entry");
  require_finite(c, "matrix entry");
  require_finite(d, "matrix entry");
  const Complex det = a * d - b * c;
  const double scale = std::max({std::abs(a * d), std::abs(b * c), 1e-300});
  if (std::abs(det) <= 1e-14 * scale) {
    throw DomainError("singular matrix cannot be normalized into SL(2,C)");
  }
  const Complex s = std::sqrt(det);
  return {a / s, b / s, c / s, d / s};
}

namespace {

double frobenius(const MoebiusMatrix& m) {
  return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) + std::norm(m.d));
}

} // namespace

MoebiusMatrix mul(const MoebiusMatrix& m1, const MoebiusMatrix& m2) {
  MoebiusMatrix p{m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
                  m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d};
  // Long words drift off the determinant-one surface; pull them back once
  // the drift exceeds the rounding bound of the product itself.
  const Complex det = p.det();
  const double size = frobenius(m1) * frobenius(m2);
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * size * size;
  if (std::abs(det - 1.0) > noise && det != Complex(0.0) && is_finite(det)) {
    const Complex s = std::sqrt(det);
    p.a /= s;
    p.b /= s;
    p.c /= s;
    p.d /= s;
  }
  return p;
}

MoebiusMatrix inverse(const MoebiusMatrix& m) { return {m.d, -m.b, -m.c, m.a}; }

MoebiusMatrix power(const MoebiusMatrix& m, int n) {
  MoebiusMatrix base = n < 0 ? inverse(m) : m;
  unsigned k = n < 0 ? static_cast<unsigned>(-(n + 1)) + 1u : static_cast<unsigned>(n);
  MoebiusMatrix acc = MoebiusMatrix::identity();
  while (k != 0) {
    if (k & 1u) acc = mul(acc, base);
    base = mul(base, base);
    k >>= 1u;
  }
  return acc;
}

MoebiusMatrix commutator(const MoebiusMatrix& m1, const MoebiusMatrix& m2) {
  return mul(mul(m1, m2), mul(inverse(m1), inverse(m2)));
}

bool is_parabolic_trace(Complex tr, double tol) {
  return std::abs(tr - 2.0) <= tol || std::abs(tr + 2.0) <= tol;
}

ComplexLength complex_length(Complex tr) {
  require_finite(tr, "trace");
  if (is_parabolic_trace(tr)) {
    return {Complex(0.0), true};
  }
  return {2.0 * std::acosh(tr / 2.0), false};
}

bool is_purely_hyperbolic(Complex tr, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("is_purely_hyperbolic: eps must be positive");
  }
  return std::abs(tr.imag()) <= eps && std::abs(tr.real()) > 2.0;
}

} // namespace qfslice
