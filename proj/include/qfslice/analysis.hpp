#pragma once

#include <optional>
#include <vector>

#include "qfslice/moebius.hpp"

namespace qfslice {

/// Radius of the embedded tube around a short purely hyperbolic geodesic of
/// length lambda, from
///   sinh^2 r = ( sqrt(3 - 2 cosh lambda) / (cosh lambda - 1) - 1 ) / 2.
/// Requires lambda > 0 and cosh lambda < sqrt 2; throws DomainError otherwise.
double meyerhoff_radius(double lambda);

/// acosh((48 + 5 sqrt 2) / 49): the length at which the tube radius reaches
/// sinh^2 r = 3, i.e. 4 pi sinh^2(r/2) = 2 pi. Lower bound for the constant
/// below which a linear slice is only its standard component.
double c0_lower_bound();

/// trA (1 + sqrt(1 - (2/trA)^2)) / 2, the attracting fixed point of
/// z -> trA - 1/z. Throws DomainError for trA <= 2.
double scaling_constant(double trA);

struct ScalingReport {
  double trA = 0.0;
  /// ratios[k] = Tr A^{k+1} B / Tr A^k B.
  std::vector<Complex> ratios;
  Complex limit;
  /// First n (1-based, matching ratios[n-1]) with |ratio - limit| < 1e-6.
  std::optional<int> converged_at;
  /// The ratio sequence hit a zero denominator.
  bool degenerate = false;
  /// The orbit started on the repelling fixed point and stays there.
  bool at_repelling_fixed_point = false;
};

inline constexpr double kScalingTolerance = 1e-6;

/// Ratios Tr A^n B / Tr A^{n-1} B from trace_AnB, taking the larger Markov
/// root for Tr AB. Requires trA > 2 and nmax >= 3.
ScalingReport scaling_convergence(double trA, Complex trB, int nmax);

/// Orbit of z -> trA - 1/z from `seed` (the same ratio sequence written as a
/// Moebius map). A seed on the repelling fixed point is reported, not iterated.
ScalingReport scaling_orbit(double trA, Complex seed, int nmax);

/// trA (1 - sqrt(1 - (2/trA)^2)) / 2.
double repelling_fixed_point(double trA);

struct FigureScale {
  double trA = 0.0;
  double scaling_constant = 0.0;
  /// Ratio of the widest to the narrowest figure window, when known.
  std::optional<double> window_ratio;
  std::vector<double> window_widths;
  /// |window_ratio - scaling_constant| / scaling_constant.
  std::optional<double> relative_gap;
};

/// Scaling constant next to the window widths used for the figures
/// at trA = 8 (16, 32, 128) and trA = 100 (128, 2560, 12800).
FigureScale figure_scale_check(double trA);

/// Grid cell of the Earle parameter plane where Im Tr W_{2/1} changes sign
/// with |Re Tr W_{2/1}| > 2 on the crossing, off the real axis.
struct LocusCrossing {
  Complex d;       // interpolated crossing point
  Complex trace;   // Tr W_{2/1} there
};

/// Scans Re d in [re_min, re_max], Im d in [im_min, im_max] on an n x n grid
/// for points of the hyperbolic locus of W_{2/1} away from the Fuchsian line.
std::vector<LocusCrossing> earle_locus_scan(double re_min, double re_max, double im_min, double im_max, int n);

} // namespace qfslice
