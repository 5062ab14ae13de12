#include "qfslice/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace qfslice {

std::string_view to_string(Cell c) {
  switch (c) {
  case Cell::DiscreteLikely: return "DiscreteLikely";
  case Cell::Indiscrete: return "Indiscrete";
  case Cell::Indeterminate: return "Indeterminate";
  case Cell::OutOfDomain: return "OutOfDomain";
  }
  return "?";
}

std::string_view to_string(RootPolicy p) {
  switch (p) {
  case RootPolicy::plus: return "plus";
  case RootPolicy::minus: return "minus";
  case RootPolicy::both: return "both";
  }
  return "?";
}

RootPolicy parse_root_policy(std::string_view s) {
  if (s == "plus") return RootPolicy::plus;
  if (s == "minus") return RootPolicy::minus;
  if (s == "both") return RootPolicy::both;
  throw std::invalid_argument("root policy must be plus, minus or both");
}

void SliceSpec::validate() const {
  if (!std::isfinite(trA) || trA < 2.0) throw std::invalid_argument("slice: trA must be >= 2");
  if (!is_finite(center)) throw std::invalid_argument("slice: center must be finite");
  if (!std::isfinite(width) || !(width > 0.0)) throw std::invalid_argument("slice: width must be positive");
  if (resolution < kMinResolution || resolution > kMaxResolution) {
    throw std::invalid_argument("slice: resolution must be in [16, 16384]");
  }
  budget.validate();
}

Complex SliceSpec::pixel_center(int col, int row) const {
  const double h = pixel_size();
  const double half = 0.5 * resolution;
  return {center.real() + (col + 0.5 - half) * h, center.imag() + (half - row - 0.5) * h};
}

double SliceSpec::length() const { return 2.0 * std::acosh(trA / 2.0); }

double default_center(double trA) {
  if (!(trA > 2.0)) return std::numeric_limits<double>::infinity();
  const double c = 2.0 * std::acosh(trA / 2.0);
  return 2.0 / std::tanh(c / 2.0);
}

Cell classify_point(const SliceSpec& spec, const DiscretenessOracle& oracle, Complex trB) {
  if (!(trB.real() > 0.0)) return Cell::OutOfDomain;
  try {
    const Complex x{spec.trA, 0.0};
    const auto [zp, zm] = markov_third_trace(x, trB);
    auto verdict_for = [&](Complex z) { return oracle.classify({x, trB, z}).tag; };
    Verdict v = Verdict::Indeterminate;
    switch (spec.root_policy) {
    case RootPolicy::plus: v = verdict_for(zp); break;
    case RootPolicy::minus: v = verdict_for(zm); break;
    case RootPolicy::both: {
      const Verdict a = verdict_for(zp);
      if (a == Verdict::Indiscrete) {
        v = a;
        break;
      }
      const Verdict b = verdict_for(zm);
      if (b == Verdict::Indiscrete) v = b;
      else if (a == Verdict::DiscreteLikely && b == Verdict::DiscreteLikely) v = a;
      else v = Verdict::Indeterminate;
      break;
    }
    }
    switch (v) {
    case Verdict::DiscreteLikely: return Cell::DiscreteLikely;
    case Verdict::Indiscrete: return Cell::Indiscrete;
    case Verdict::Indeterminate: return Cell::Indeterminate;
    }
  } catch (const std::exception&) {
    // Numeric failure on one pixel does not abort the picture.
  }
  return Cell::Indeterminate;
}

namespace {

PixelGrid blank_grid(const SliceSpec& spec) {
  spec.validate();
  PixelGrid g;
  g.spec = spec;
  const auto n = static_cast<std::size_t>(spec.resolution) * static_cast<std::size_t>(spec.resolution);
  g.cells.assign(n, Cell::Indeterminate);
  g.labels.assign(n, 0);
  return g;
}

} // namespace

PixelGrid render_serial(const SliceSpec& spec) { return render_serial(spec, TreeSearchOracle(spec.budget)); }

PixelGrid render_serial(const SliceSpec& spec, const DiscretenessOracle& oracle) {
  PixelGrid g = blank_grid(spec);
  const int n = spec.resolution;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      g.cells[g.index(col, row)] = classify_point(spec, oracle, spec.pixel_center(col, row));
    }
  }
  return g;
}

int worker_count() {
  if (const char* env = std::getenv("QFSLICE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return omp_get_max_threads();
}

PixelGrid render(const SliceSpec& spec, int threads) { return render(spec, TreeSearchOracle(spec.budget), threads); }

PixelGrid render(const SliceSpec& spec, const DiscretenessOracle& oracle, int threads) {
  PixelGrid g = blank_grid(spec);
  const int n = spec.resolution;
  const int workers = threads > 0 ? threads : worker_count();
  Cell* cells = g.cells.data();
  // Each row is written by exactly one worker; rows near the slice boundary
  // cost far more than the rest, hence the dynamic schedule.
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(n) + static_cast<std::size_t>(col)] =
          classify_point(spec, oracle, spec.pixel_center(col, row));
    }
  }
  return g;
}

namespace {

// Holes of a component: 8-connected pieces of its complement inside the
// bounding box grown by one pixel that do not reach the outer frame.
int count_holes(const PixelGrid& grid, std::int32_t label, const BoundingBox& bb) {
  const int w = bb.col_max - bb.col_min + 3;
  const int h = bb.row_max - bb.row_min + 3;
  std::vector<std::uint8_t> mark(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  auto inside = [&](int x, int y) {
    const int col = x + bb.col_min - 1, row = y + bb.row_min - 1;
    if (col < 0 || row < 0 || col >= grid.size() || row >= grid.size()) return false;
    return grid.labels[grid.index(col, row)] == label;
  };
  auto at = [&](int x, int y) -> std::uint8_t& { return mark[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)]; };

  std::vector<std::pair<int, int>> stack;
  auto fill = [&](int sx, int sy) {
    stack.assign(1, {sx, sy});
    at(sx, sy) = 1;
    while (!stack.empty()) {
      const auto [x, y] = stack.back();
      stack.pop_back();
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h || at(nx, ny) || inside(nx, ny)) continue;
          at(nx, ny) = 1;
          stack.emplace_back(nx, ny);
        }
      }
    }
  };
  fill(0, 0); // the frame is complement and connected
  int holes = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!at(x, y) && !inside(x, y)) {
        ++holes;
        fill(x, y);
      }
    }
  }
  return holes;
}

} // namespace

std::vector<ComponentReport> flood_components(PixelGrid& grid) {
  const int n = grid.size();
  const SliceSpec& spec = grid.spec;
  std::fill(grid.labels.begin(), grid.labels.end(), 0);

  std::vector<ComponentReport> reports;
  std::vector<std::pair<int, int>> stack;
  std::int32_t next = 1;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      const std::size_t idx = grid.index(col, row);
      if (grid.cells[idx] != Cell::DiscreteLikely || grid.labels[idx] != 0) continue;
      ComponentReport rep;
      rep.label = next++;
      rep.bbox = {col, row, col, row};
      double sum_re = 0.0, sum_im = 0.0;
      grid.labels[idx] = rep.label;
      stack.assign(1, {col, row});
      while (!stack.empty()) {
        const auto [c, r] = stack.back();
        stack.pop_back();
        ++rep.pixel_count;
        const Complex p = spec.pixel_center(c, r);
        sum_re += p.real();
        sum_im += p.imag();
        rep.bbox.col_min = std::min(rep.bbox.col_min, c);
        rep.bbox.col_max = std::max(rep.bbox.col_max, c);
        rep.bbox.row_min = std::min(rep.bbox.row_min, r);
        rep.bbox.row_max = std::max(rep.bbox.row_max, r);
        constexpr int kDc[] = {1, -1, 0, 0};
        constexpr int kDr[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nc = c + kDc[k], nr = r + kDr[k];
          if (nc < 0 || nr < 0 || nc >= n || nr >= n) continue;
          const std::size_t ni = grid.index(nc, nr);
          if (grid.cells[ni] == Cell::DiscreteLikely && grid.labels[ni] == 0) {
            grid.labels[ni] = rep.label;
            stack.emplace_back(nc, nr);
          }
        }
      }
      const auto count = static_cast<double>(rep.pixel_count);
      rep.centroid = {sum_re / count, sum_im / count};
      reports.push_back(rep);
    }
  }

  // Standard component: most pixels within one pixel of the real axis, Re > 2.
  const double h = spec.pixel_size();
  std::map<std::int32_t, std::size_t> axis_hits;
  for (int row = 0; row < n; ++row) {
    const double im = spec.pixel_center(0, row).imag();
    if (std::abs(im) >= h) continue;
    for (int col = 0; col < n; ++col) {
      const std::int32_t l = grid.labels[grid.index(col, row)];
      if (l != 0 && spec.pixel_center(col, row).real() > 2.0) ++axis_hits[l];
    }
  }
  std::int32_t standard = 0;
  std::size_t best = 0;
  for (const auto& [l, hits] : axis_hits) {
    if (hits > best) {
      best = hits;
      standard = l;
    }
  }

  // Relabel: standard component first, the rest by decreasing size.
  std::stable_sort(reports.begin(), reports.end(), [&](const ComponentReport& a, const ComponentReport& b) {
    if ((a.label == standard) != (b.label == standard)) return a.label == standard;
    return a.pixel_count > b.pixel_count;
  });
  std::vector<std::int32_t> remap(static_cast<std::size_t>(next), 0);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    remap[static_cast<std::size_t>(reports[i].label)] = static_cast<std::int32_t>(i + 1);
    reports[i].is_standard = reports[i].label == standard && standard != 0;
    reports[i].label = static_cast<std::int32_t>(i + 1);
  }
  for (auto& l : grid.labels) l = remap[static_cast<std::size_t>(l)];
  for (auto& rep : reports) rep.euler_characteristic = 1 - count_holes(grid, rep.label, rep.bbox);

  std::stable_sort(reports.begin(), reports.end(),
                   [](const ComponentReport& a, const ComponentReport& b) { return a.pixel_count > b.pixel_count; });
  return reports;
}

TwistCheckReport dehn_twist_spot_check(const PixelGrid& grid, int samples, int n, std::uint64_t seed) {
  if (samples < 0) throw std::invalid_argument("twist check: samples must be >= 0");
  TwistCheckReport report;
  report.n = n;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    if (grid.cells[i] == Cell::DiscreteLikely) pool.push_back(i);
  }
  if (pool.empty() || samples == 0) return report;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const SliceSpec& spec = grid.spec;
  const TreeSearchOracle oracle(spec.budget);
  const Complex x{spec.trA, 0.0};
  for (int s = 0; s < samples; ++s) {
    const std::size_t idx = pool[pick(rng)];
    const int col = static_cast<int>(idx % static_cast<std::size_t>(grid.size()));
    const int row = static_cast<int>(idx / static_cast<std::size_t>(grid.size()));
    const Complex y = spec.pixel_center(col, row);
    const auto [zp, zm] = markov_third_trace(x, y);
    const Complex z = spec.root_policy == RootPolicy::minus ? zm : zp;
    const TraceTriple twisted{x, trace_AnB(n, x, y, z), trace_AnB(n + 1, x, y, z)};
    ++report.sampled;
    Verdict v = Verdict::Indeterminate;
    try {
      v = oracle.classify(twisted).tag;
    } catch (const std::exception&) {
    }
    if (v != Verdict::DiscreteLikely) {
      ++report.discrepancies;
      report.details.push_back({col, row, twisted, v});
    }
  }
  return report;
}

} // namespace qfslice
