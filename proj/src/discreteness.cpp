#include "qfslice/discreteness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qfslice/groups.hpp"

namespace qfslice {

double TraceTriple::relative_fricke_residual() const {
  const double scale = std::max({std::norm(x), std::norm(y), std::norm(z), std::abs(x * y * z), 1.0});
  return std::abs(fricke_residual()) / scale;
}

TraceTriple neighbor_move(const TraceTriple& t, Slot slot) {
  TraceTriple out = t;
  switch (slot) {
  case Slot::x: out.x = t.y * t.z - t.x; break;
  case Slot::y: out.y = t.x * t.z - t.y; break;
  case Slot::z: out.z = t.x * t.y - t.z; break;
  }
  return out;
}

std::pair<Complex, Complex> markov_third_trace(Complex x, Complex y) {
  const Complex xy = x * y;
  const Complex root = std::sqrt(xy * xy - 4.0 * (x * x + y * y));
  Complex z1 = (xy + root) / 2.0;
  Complex z2 = (xy - root) / 2.0;
  const double n1 = std::norm(z1), n2 = std::norm(z2);
  if (n2 > n1 || (n2 == n1 && z2.imag() > z1.imag())) std::swap(z1, z2);
  return {z1, z2};
}

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::DiscreteLikely: return "DiscreteLikely";
  case Verdict::Indiscrete: return "Indiscrete";
  case Verdict::Indeterminate: return "Indeterminate";
  }
  return "?";
}

void OracleBudget::validate() const {
  if (max_depth < 1 || max_depth > kMaxDepthLimit) {
    throw std::invalid_argument("oracle budget: max_depth must be in [1, 80]");
  }
  if (!(grow_threshold > 2.0)) throw std::invalid_argument("oracle budget: grow_threshold must exceed 2");
  if (!(stop_magnitude > grow_threshold)) {
    throw std::invalid_argument("oracle budget: stop_magnitude must exceed grow_threshold");
  }
  if (!(eps_real > 0.0) || !(eps_real < 1.0)) throw std::invalid_argument("oracle budget: eps_real must be in (0, 1)");
  if (max_nodes < 1) throw std::invalid_argument("oracle budget: max_nodes must be positive");
  if (jorgensen_depth < 0) throw std::invalid_argument("oracle budget: jorgensen_depth must be >= 0");
}

bool hyperbolic_locus_test(Complex trW, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("hyperbolic_locus_test: eps must be positive");
  return std::abs(trW.imag()) <= eps && std::abs(trW.real()) > 2.0;
}

double jorgensen_sum_with_commutator(const TraceTriple& t, Slot word) {
  const MarkedPair g = generators_from_traces(t.x, t.y, t.z);
  const MoebiusMatrix k = commutator(g.A, g.B);
  MoebiusMatrix w;
  switch (word) {
  case Slot::x: w = g.A; break;
  case Slot::y: w = g.B; break;
  case Slot::z: w = mul(g.A, g.B); break;
  }
  const Complex tw = w.trace();
  return std::abs(tw * tw - 4.0) + std::abs(commutator(w, k).trace() - 2.0);
}

namespace {

// Integer homology vector of a slope, kept up to sign. Entries past the
// FareySlope range mark the slope as unnamed.
struct SlopeVec {
  std::int64_t p, q;
  bool named = true;
};

SlopeVec normalized(SlopeVec v) {
  if (v.q < 0 || (v.q == 0 && v.p < 0)) return {-v.p, -v.q, v.named};
  return v;
}

bool same(SlopeVec a, SlopeVec b) { return a.p == b.p && a.q == b.q; }

SlopeVec checked(std::int64_t p, std::int64_t q, bool named) {
  const std::int64_t m = FareySlope::kMaxMagnitude;
  if (!named || p > m || p < -m || q > m || q < -m) return {0, 1, false};
  return {p, q, true};
}

// In a Farey triangle the third slope is u + v or u - v (up to sign);
// the neighbouring triangle across the u, v edge carries the other one.
SlopeVec flip_slope(SlopeVec old, SlopeVec u, SlopeVec v) {
  const bool named = u.named && v.named;
  const SlopeVec sum = normalized(checked(u.p + v.p, u.q + v.q, named));
  const SlopeVec diff = normalized(checked(u.p - v.p, u.q - v.q, named));
  if (!named) return sum;
  return same(normalized(old), sum) ? diff : sum;
}

enum class Status : std::uint8_t { accepted, unresolved, rejected, aborted };

class TreeSearch {
public:
  explicit TreeSearch(const OracleBudget& b)
      : budget_(b), grow_sq_(b.grow_threshold * b.grow_threshold),
        stop_sq_(b.stop_magnitude * b.stop_magnitude) {}

  OracleVerdict run(const TraceTriple& t) {
    std::array<Complex, 3> v{t.x, t.y, t.z};
    std::array<SlopeVec, 3> s{SlopeVec{1, 0}, SlopeVec{0, 1}, SlopeVec{-1, 1}};

    Status status = Status::accepted;
    for (int i = 0; i < 3 && status != Status::rejected; ++i) {
      status = merge(status, inspect(v, s, i, 0));
    }
    if (status != Status::rejected) {
      for (int i = 0; i < 3 && status != Status::rejected; ++i) status = merge(status, jorgensen(v, s, i, 0));
    }
    nodes_ = 1;
    if (status != Status::rejected) status = merge(status, search(v, s));

    OracleVerdict out;
    out.depth_used = depth_used_;
    out.nodes = nodes_;
    switch (status) {
    case Status::accepted: out.tag = Verdict::DiscreteLikely; break;
    case Status::rejected:
      out.tag = Verdict::Indiscrete;
      out.witness = witness_;
      break;
    case Status::unresolved:
    case Status::aborted: out.tag = Verdict::Indeterminate; break;
    }
    return out;
  }

private:
  // A pending move: replace `slot` of the triple. `prev` is the slot replaced
  // on the way in; repeating it continues a twist chain around the third slot.
  struct Frame {
    std::array<Complex, 3> v;
    std::array<SlopeVec, 3> s;
    int slot;
    int prev;
    int depth;
    int moves;
  };

  static Status merge(Status a, Status b) { return std::max(a, b); }

  // Tests the trace in slot i on its own: elliptic rejects, cusp is unresolved.
  Status inspect(const std::array<Complex, 3>& v, const std::array<SlopeVec, 3>& s, int i, int moves) {
    const Complex w = v[i];
    if (!is_finite(w)) return Status::unresolved;
    const double eps = budget_.eps_real;
    if (std::abs(w.imag()) <= eps && std::abs(w.real()) < 2.0 - eps) {
      if (!s[i].named) return Status::unresolved;
      witness_ = Witness{Witness::Kind::EllipticTrace, FareySlope(s[i].p, s[i].q), w, moves, 0.0};
      return Status::rejected;
    }
    // Tr A is the slice parameter (parabolic on the Maskit slice), not a cusp.
    const bool is_a = s[i].named && s[i].q == 0;
    if (!is_a && (std::abs(w - 2.0) <= eps || std::abs(w + 2.0) <= eps)) return Status::unresolved;
    return Status::accepted;
  }

  Status jorgensen(const std::array<Complex, 3>& v, const std::array<SlopeVec, 3>& s, int i, int moves) {
    const TraceTriple t{v[0], v[1], v[2]};
    const double j = jorgensen_sum_with_commutator(t, static_cast<Slot>(i));
    if (j < 1.0 && s[i].named) {
      witness_ = Witness{Witness::Kind::Jorgensen, FareySlope(s[i].p, s[i].q), v[i], moves, j};
      return Status::rejected;
    }
    return Status::accepted;
  }

  Status search(const std::array<Complex, 3>& v0, const std::array<SlopeVec, 3>& s0) {
    std::vector<Frame> stack;
    for (int i = 2; i >= 0; --i) stack.push_back({v0, s0, i, -1, 1, 1});
    Status overall = Status::accepted;
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      if (++nodes_ > budget_.max_nodes) return Status::aborted;
      depth_used_ = std::max(depth_used_, f.depth);

      auto& v = f.v;
      auto& s = f.s;
      const int i = f.slot, j = (i + 1) % 3, k = (i + 2) % 3;
      v[i] = v[j] * v[k] - v[i];
      s[i] = flip_slope(s[i], s[j], s[k]);

      const Status own = inspect(v, s, i, f.moves);
      if (own == Status::rejected) return own;
      if (own != Status::accepted) {
        overall = merge(overall, own);
        continue;
      }
      if (f.moves <= budget_.jorgensen_depth && jorgensen(v, s, i, f.moves) == Status::rejected) {
        return Status::rejected;
      }

      const double nw = std::norm(v[i]);
      if (nw > stop_sq_) continue;
      const double nj = std::norm(v[j]), nk = std::norm(v[k]);
      if (nj >= 4.0 && nk >= 4.0 && nw >= nj && nw >= nk && nw >= grow_sq_) continue;

      // The branch whose fresh trace is smaller goes first; it is the one
      // more likely to reach an elliptic curve.
      const double cj = std::norm(v[k] * v[i] - v[j]);
      const double ck = std::norm(v[i] * v[j] - v[k]);
      const int first = cj <= ck ? j : k;
      const int second = first == j ? k : j;
      for (int c : {second, first}) {
        const int depth = c == f.prev ? f.depth : f.depth + 1;
        if (depth > budget_.max_depth) {
          overall = merge(overall, Status::unresolved);
          continue;
        }
        stack.push_back({v, s, c, i, depth, f.moves + 1});
      }
    }
    return overall;
  }

  const OracleBudget& budget_;
  double grow_sq_;
  double stop_sq_;
  std::size_t nodes_ = 0;
  int depth_used_ = 0;
  Witness witness_;
};

} // namespace

OracleVerdict bq_search(const TraceTriple& t, const OracleBudget& budget) {
  budget.validate();
  if (!is_finite(t.x) || !is_finite(t.y) || !is_finite(t.z)) {
    throw DomainError("bq_search: non-finite trace triple");
  }
  if (t.relative_fricke_residual() > kFrickeTolerance) {
    throw std::invalid_argument("bq_search: triple violates x^2 + y^2 + z^2 = xyz");
  }
  return TreeSearch(budget).run(t);
}

} // namespace qfslice
