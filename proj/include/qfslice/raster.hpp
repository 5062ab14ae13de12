#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qfslice/discreteness.hpp"

namespace qfslice {

enum class Cell : std::uint8_t { DiscreteLikely, Indiscrete, Indeterminate, OutOfDomain };
enum class RootPolicy : std::uint8_t { plus, minus, both };

std::string_view to_string(Cell c);
std::string_view to_string(RootPolicy p);
RootPolicy parse_root_policy(std::string_view s);

/// Render request for the slice Tr A = trA over a square Tr B window.
///
/// Pixel (col, row) samples its cell center; row 0 is the top edge
/// (largest Im Tr B). trA = 2 is the Maskit limit and is accepted.
struct SliceSpec {
  double trA = 2.5;
  Complex center{2.5, 0.0};
  double width = 6.0;
  int resolution = 256;
  OracleBudget budget{};
  RootPolicy root_policy = RootPolicy::plus;

  static constexpr int kMinResolution = 16;
  static constexpr int kMaxResolution = 16384;

  void validate() const;
  double pixel_size() const { return width / resolution; }
  Complex pixel_center(int col, int row) const;
  /// Complex length c with trA = 2 cosh(c/2); zero on the Maskit limit.
  double length() const;
};

/// 2 coth(c/2) for trA = 2 cosh(c/2): the fold point of the Tr B map, which
/// sits on the standard component. Infinite at trA = 2.
double default_center(double trA);

struct PixelGrid {
  SliceSpec spec;
  std::vector<Cell> cells;             // row-major, resolution^2
  std::vector<std::int32_t> labels;    // 0 = background, filled by flood_components

  int size() const { return spec.resolution; }
  Cell at(int col, int row) const { return cells[index(col, row)]; }
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(spec.resolution) + static_cast<std::size_t>(col);
  }
};

/// Classification of a single Tr B value; the building block of render.
Cell classify_point(const SliceSpec& spec, const DiscretenessOracle& oracle, Complex trB);

/// Single-threaded reference renderer.
PixelGrid render_serial(const SliceSpec& spec);
PixelGrid render_serial(const SliceSpec& spec, const DiscretenessOracle& oracle);

/// OpenMP renderer; rows are distributed over `threads` workers
/// (0 = worker_count()). Produces the same cells as render_serial.
PixelGrid render(const SliceSpec& spec, int threads = 0);
PixelGrid render(const SliceSpec& spec, const DiscretenessOracle& oracle, int threads = 0);

/// Worker count: QFSLICE_THREADS if set and positive, else the OpenMP default.
int worker_count();

struct BoundingBox {
  int col_min, row_min, col_max, row_max;
};

struct ComponentReport {
  std::int32_t label = 0;
  std::size_t pixel_count = 0;
  BoundingBox bbox{};
  Complex centroid;
  bool is_standard = false;
  /// 1 - number of holes; simply connected components report 1.
  int euler_characteristic = 1;
};

/// 4-connected labelling of DiscreteLikely cells. Writes grid.labels and
/// returns reports sorted by size (largest first). The component holding the
/// most near-real-axis pixels with Re Tr B > 2 is flagged standard and
/// relabelled 1.
std::vector<ComponentReport> flood_components(PixelGrid& grid);

struct TwistDiscrepancy {
  int col, row;
  TraceTriple twisted;
  Verdict verdict;
};

struct TwistCheckReport {
  int n = 0;
  std::size_t sampled = 0;
  std::size_t discrepancies = 0;
  std::vector<TwistDiscrepancy> details;

  double rate() const { return sampled == 0 ? 0.0 : static_cast<double>(discrepancies) / static_cast<double>(sampled); }
};

/// Re-tests `samples` random DiscreteLikely pixels after the Dehn twist
/// (A, B) -> (A, A^n B), whose triple is (trA, Tr A^n B, Tr A^{n+1} B).
TwistCheckReport dehn_twist_spot_check(const PixelGrid& grid, int samples, int n, std::uint64_t seed = 1);

} // namespace qfslice
