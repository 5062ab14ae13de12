#include "qfslice/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qfslice/discreteness.hpp"
#include "qfslice/groups.hpp"
#include "qfslice/words.hpp"

namespace qfslice {

double meyerhoff_radius(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("meyerhoff_radius: lambda must be positive");
  const double u = std::cosh(lambda);
  if (!(u < std::numbers::sqrt2)) throw DomainError("meyerhoff_radius: needs cosh(lambda) < sqrt(2)");
  const double rhs = 0.5 * (std::sqrt(3.0 - 2.0 * u) / (u - 1.0) - 1.0);
  return std::asinh(std::sqrt(std::max(rhs, 0.0)));
}

double c0_lower_bound() { return std::acosh((48.0 + 5.0 * std::numbers::sqrt2) / 49.0); }

double scaling_constant(double trA) {
  if (!(trA > 2.0)) throw DomainError("scaling_constant: trA must exceed 2");
  const double r = 2.0 / trA;
  return trA * (1.0 + std::sqrt(1.0 - r * r)) / 2.0;
}

double repelling_fixed_point(double trA) {
  if (!(trA > 2.0)) throw DomainError("repelling_fixed_point: trA must exceed 2");
  // Product of the two fixed points is 1.
  return 1.0 / scaling_constant(trA);
}

ScalingReport scaling_convergence(double trA, Complex trB, int nmax) {
  if (nmax < 3) throw std::invalid_argument("scaling_convergence: nmax must be >= 3");
  require_finite(trB, "trB");
  ScalingReport rep;
  rep.trA = trA;
  rep.limit = scaling_constant(trA);
  const Complex x{trA, 0.0};
  const Complex z = markov_third_trace(x, trB).first;
  Complex prev = trB;
  for (int n = 1; n <= nmax; ++n) {
    const Complex cur = trace_AnB(n, x, trB, z);
    if (prev == Complex(0.0) || !is_finite(cur)) {
      rep.degenerate = true;
      break;
    }
    rep.ratios.push_back(cur / prev);
    if (!rep.converged_at && std::abs(rep.ratios.back() - rep.limit) < kScalingTolerance) rep.converged_at = n;
    prev = cur;
  }
  return rep;
}

ScalingReport scaling_orbit(double trA, Complex seed, int nmax) {
  if (nmax < 3) throw std::invalid_argument("scaling_orbit: nmax must be >= 3");
  require_finite(seed, "seed");
  ScalingReport rep;
  rep.trA = trA;
  rep.limit = scaling_constant(trA);
  const double repel = repelling_fixed_point(trA);
  if (std::abs(seed - repel) <= 1e-12 * std::max(1.0, repel)) {
    // The orbit is exactly fixed; any rounding would push it to the attractor.
    rep.at_repelling_fixed_point = true;
    rep.ratios.assign(static_cast<std::size_t>(nmax), Complex(repel, 0.0));
    return rep;
  }
  Complex z = seed;
  rep.ratios.push_back(z);
  for (int n = 2; n <= nmax; ++n) {
    if (z == Complex(0.0)) {
      rep.degenerate = true;
      break;
    }
    z = trA - 1.0 / z;
    rep.ratios.push_back(z);
  }
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    if (std::abs(rep.ratios[i] - rep.limit) < kScalingTolerance) {
      rep.converged_at = static_cast<int>(i + 1);
      break;
    }
  }
  return rep;
}

FigureScale figure_scale_check(double trA) {
  FigureScale out;
  out.trA = trA;
  out.scaling_constant = scaling_constant(trA);
  if (trA == 8.0) out.window_widths = {16.0, 32.0, 128.0};
  if (trA == 100.0) out.window_widths = {128.0, 2560.0, 12800.0};
  if (!out.window_widths.empty()) {
    out.window_ratio = out.window_widths.back() / out.window_widths.front();
    out.relative_gap = std::abs(*out.window_ratio - out.scaling_constant) / out.scaling_constant;
  }
  return out;
}

std::vector<LocusCrossing> earle_locus_scan(double re_min, double re_max, double im_min, double im_max, int n) {
  if (n < 2) throw std::invalid_argument("earle_locus_scan: need at least a 2 x 2 grid");
  if (!(re_min > 0.0) || !(re_max > re_min) || !(im_max > im_min)) {
    throw std::invalid_argument("earle_locus_scan: window must lie in Re d > 0");
  }
  const double dre = (re_max - re_min) / (n - 1);
  const double dim = (im_max - im_min) / (n - 1);
  auto d_at = [&](int i, int j) { return Complex(re_min + i * dre, im_min + j * dim); };

  std::vector<Complex> tr(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) tr[static_cast<std::size_t>(j) * n + i] = trace_W21({d_at(i, j)});
  }
  std::vector<LocusCrossing> out;
  auto edge = [&](int i0, int j0, int i1, int j1) {
    const Complex t0 = tr[static_cast<std::size_t>(j0) * n + i0];
    const Complex t1 = tr[static_cast<std::size_t>(j1) * n + i1];
    if ((t0.imag() > 0.0) == (t1.imag() > 0.0)) return;
    const double s = t0.imag() / (t0.imag() - t1.imag());
    const Complex d = d_at(i0, j0) + s * (d_at(i1, j1) - d_at(i0, j0));
    if (std::abs(d.imag()) <= 2.0 * dim) return; // the Fuchsian line R+ itself
    const Complex t = trace_W21({d});
    if (std::abs(t.real()) > 2.0) out.push_back({d, t});
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i + 1 < n) edge(i, j, i + 1, j);
      if (j + 1 < n) edge(i, j, i, j + 1);
    }
  }
  return out;
}

} // namespace qfslice
