#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "qfslice/moebius.hpp"
#include "qfslice/words.hpp"

namespace qfslice {

/// (Tr A, Tr B, Tr AB) of a marked group whose commutator has trace -2, so
/// that x^2 + y^2 + z^2 = xyz.
struct TraceTriple {
  Complex x, y, z;

  Complex fricke_residual() const { return x * x + y * y + z * z - x * y * z; }
  /// Residual divided by the magnitude of the largest term.
  double relative_fricke_residual() const;

  Complex& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }
  const Complex& operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline constexpr double kFrickeTolerance = 1e-6;

enum class Slot : std::uint8_t { x = 0, y = 1, z = 2 };

/// Replaces one entry by its conjugate root, e.g. z -> x y - z. This is the
/// edge move of the Farey tree; applying it twice is the identity.
TraceTriple neighbor_move(const TraceTriple& t, Slot slot);

/// Both roots of z^2 - x y z + x^2 + y^2 = 0, larger magnitude first. Ties
/// (conjugate roots of a real pair) put the root with Im >= 0 first.
std::pair<Complex, Complex> markov_third_trace(Complex x, Complex y);

enum class Verdict : std::uint8_t { DiscreteLikely, Indiscrete, Indeterminate };

std::string_view to_string(Verdict v);

struct Witness {
  enum class Kind : std::uint8_t { EllipticTrace, Jorgensen };
  Kind kind = Kind::EllipticTrace;
  /// Slope of the simple closed curve whose word produced the evidence.
  FareySlope slope = FareySlope::infinity();
  Complex trace;
  int depth = 0;
  /// Jorgensen sum |tr^2 W - 4| + |tr [W, K] - 2| for Jorgensen witnesses.
  double jorgensen_sum = 0.0;
};

struct OracleVerdict {
  Verdict tag = Verdict::Indeterminate;
  std::optional<Witness> witness;
  int depth_used = 0;
  std::size_t nodes = 0;
};

/// Search limits for bq_search.
/// Depth counts turns in the Farey tree: consecutive moves that twist around
/// the same fixed trace share one level, so slowly growing twist chains are
/// bounded by max_nodes rather than max_depth.
struct OracleBudget {
  int max_depth = 40;
  double grow_threshold = 2.001;
  double stop_magnitude = 1e8;
  double eps_real = 1e-6;
  /// Vertices visited before giving up with Indeterminate.
  std::size_t max_nodes = 5000;
  /// Jorgensen's inequality is checked on vertices up to this many moves from the root.
  int jorgensen_depth = 3;

  static constexpr int kMaxDepthLimit = 80;

  /// Throws std::invalid_argument on an inconsistent budget.
  void validate() const;
};

/// Depth-first search of the Markov-triple tree rooted at t.
///
/// Every visited trace w is tested: near-real with |Re w| < 2 - eps_real is an
/// elliptic simple curve and rejects the group (Indiscrete). A trace within
/// eps_real of +-2 other than Tr A is a cusp; the branch stays unresolved.
/// A branch is accepted once the entry that was just replaced is at least as
/// large as the other two and as grow_threshold, while the other two have
/// modulus >= 2: from there every further trace in the branch grows in modulus,
/// so no elliptic or parabolic simple curve can appear beyond it. A branch is
/// also accepted when the fresh trace passes stop_magnitude. DiscreteLikely
/// means every branch was accepted within max_depth and max_nodes.
///
/// Slopes are tracked with Tr A <-> 1/0, Tr B <-> 0/1, Tr AB <-> -1/1.
OracleVerdict bq_search(const TraceTriple& t, const OracleBudget& budget);

/// |Im trW| <= eps and |Re trW| > 2.
bool hyperbolic_locus_test(Complex trW, double eps);

/// Jorgensen sum |tr^2 W - 4| + |tr [W, K] - 2| for W and the commutator K
/// of the marked pair realising the triple; W is one of A, B, AB by slot.
double jorgensen_sum_with_commutator(const TraceTriple& t, Slot word);

/// Pluggable per-point discreteness test used by the rasterizer.
class DiscretenessOracle {
public:
  virtual ~DiscretenessOracle() = default;
  virtual OracleVerdict classify(const TraceTriple& t) const = 0;
};

class TreeSearchOracle final : public DiscretenessOracle {
public:
  explicit TreeSearchOracle(OracleBudget budget) : budget_(budget) { budget_.validate(); }
  OracleVerdict classify(const TraceTriple& t) const override { return bq_search(t, budget_); }
  const OracleBudget& budget() const { return budget_; }

private:
  OracleBudget budget_;
};

} // namespace qfslice
