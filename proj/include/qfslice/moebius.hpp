#pragma once

#include <complex>
#include <stdexcept>

namespace qfslice {

using Complex = std::complex<double>;

/// Raised when a numeric argument lies outside the domain of an operation
/// (poles, excluded parameters, non-finite input).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(Complex z, const char* what);

/// Element of SL(2,C), entries row-major:
///   | a  b |
///   | c  d |
/// Every matrix handed out by this library has |det - 1| <= 1e-9.
struct MoebiusMatrix {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static MoebiusMatrix identity() { return {}; }

  /// Scales by the principal square root of the determinant so that det = 1.
  /// Throws DomainError for singular or non-finite input.
  static MoebiusMatrix unimodular(Complex a, Complex b, Complex c, Complex d);

  Complex trace() const { return a + d; }
  Complex det() const { return a * d - b * c; }
};

MoebiusMatrix mul(const MoebiusMatrix& m1, const MoebiusMatrix& m2);
MoebiusMatrix inverse(const MoebiusMatrix& m);

inline MoebiusMatrix operator*(const MoebiusMatrix& m1, const MoebiusMatrix& m2) { return mul(m1, m2); }

/// Integer power; negative exponents use the inverse.
MoebiusMatrix power(const MoebiusMatrix& m, int n);

/// Multiplicative commutator m1 m2 m1^-1 m2^-1.
MoebiusMatrix commutator(const MoebiusMatrix& m1, const MoebiusMatrix& m2);

inline constexpr double kParabolicTolerance = 1e-9;

/// True when tr is within tol of +2 or -2.
bool is_parabolic_trace(Complex tr, double tol = kParabolicTolerance);

/// Complex translation length, 2 cosh(value / 2) = tr.
///
/// Principal branch: Re(value) >= 0 and Im(value) in (-2pi, 2pi]. Flipping the
/// sign of the trace does not change Re(value), so the + sign is always used.
/// The continuous lift that is real on Fuchsian space cannot be recovered from
/// a single trace; callers tracking a path must unwrap Im(value) themselves.
struct ComplexLength {
  Complex value;
  bool parabolic = false;
};

ComplexLength complex_length(Complex tr);

/// True iff tr is eps-close to the real axis and |Re tr| > 2.
bool is_purely_hyperbolic(Complex tr, double eps);

} // namespace qfslice
