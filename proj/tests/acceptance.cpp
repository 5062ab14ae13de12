// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "oracles.hpp"
#include "qfslice/analysis.hpp"
#include "qfslice/cli.hpp"
#include "qfslice/discreteness.hpp"
#include "qfslice/groups.hpp"
#include "qfslice/io.hpp"
#include "qfslice/raster.hpp"
#include "qfslice/words.hpp"

using namespace qfslice;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const Outcome& o) {
  std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << title << "  " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

oracle::Mat to_oracle(const MoebiusMatrix& m) { return {m.a, m.b, m.c, m.d}; }

Outcome constants() {
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  const int code = cli::run({"constants"}, out, err);
  const double dt = seconds_since(t0);
  if (code != cli::kExitOk) return {false, "constants exited with " + std::to_string(code)};
  const double c0 = nlohmann::json::parse(out.str()).at("c0_lower_bound").get<double>();
  const double closed = std::acosh((48.0 + 5.0 * std::sqrt(2.0)) / 49.0);
  const bool ok = std::abs(c0 - 0.493) <= 5e-4 && std::abs(c0 - closed) <= 1e-15 && dt < 1e-3;
  return {ok, fmt("c0=%.10f |c0-0.493|=%.2e runtime=%.3f ms", c0, std::abs(c0 - 0.493), dt * 1e3)};
}

Outcome algebraic_identities() {
  const auto t0 = Clock::now();
  double det = 0, comm = 0, tra = 0, trb = 0, fricke = 0;
  for (int i = 0; i < 50; ++i) {
    const Complex lambda{0.1 + 3.9 * i / 49.0, 0.8 * std::sin(1.7 * i)};
    for (int j = 0; j < 50; ++j) {
      const Complex tau{-4.0 + 8.0 * j / 49.0, -std::numbers::pi + 2.0 * std::numbers::pi * j / 49.0};
      const auto g = cfn_generators({lambda, tau});
      const Complex x = g.trA(), y = g.trB(), z = g.trAB();
      det = std::max({det, std::abs(g.A.det() - 1.0), std::abs(g.B.det() - 1.0)});
      comm = std::max(comm, std::abs(g.commutator_trace() + 2.0));
      tra = std::max(tra, std::abs(x - 2.0 * std::cosh(lambda / 2.0)));
      const Complex want = 2.0 * std::cosh(tau / 2.0) * std::cosh(lambda / 2.0) / std::sinh(lambda / 2.0);
      trb = std::max(trb, std::abs(y - want) / std::max(1.0, std::abs(want)));
      fricke = std::max(fricke, std::abs(x * x + y * y + z * z - x * y * z) / std::max(1.0, std::abs(x * y * z)));
    }
  }
  const double dt = seconds_since(t0);
  const bool ok = det <= 1e-9 && comm <= 1e-8 && tra <= 1e-10 && trb <= 1e-9 && fricke <= 1e-8 && dt < 1.0;
  return {ok, fmt("det=%.1e comm=%.1e trA=%.1e trB=%.1e fricke=%.1e runtime=%.3f s", det, comm, tra, trb, fricke, dt)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lr(0.2, 3.0), li(-1.0, 1.0), t(-3.0, 3.0);
  double anb = 0.0;
  std::vector<std::pair<oracle::Mat, oracle::Mat>> points;
  for (int k = 0; k < 100; ++k) {
    const Complex lambda{lr(rng), li(rng)}, tau{t(rng), t(rng)};
    const oracle::Mat a = oracle::cfn_A(lambda), b = oracle::cfn_B(lambda, tau);
    const Complex x = oracle::tr(a), y = oracle::tr(b), z = oracle::tr(oracle::mul(a, b));
    for (int n = 0; n <= 30; ++n) {
      const Complex want = oracle::tr(oracle::mul(oracle::pow(a, n), b));
      anb = std::max(anb, oracle::rel_err(trace_AnB(n, x, y, z), want));
    }
    if (k < 10) points.emplace_back(a, b);
  }

  double words = 0.0;
  int slopes = 0, spelling = 0;
  std::vector<FareySlope> all{FareySlope::infinity()};
  for (std::int64_t q = 1; q <= 20; ++q) {
    for (std::int64_t p = -2 * q; p <= 2 * q; ++p) {
      if (std::gcd(p, q) == 1) all.emplace_back(p, q);
    }
  }
  for (const auto& s : all) {
    const GeneratorWord w = special_word(s);
    if (s.p() >= 0 && w.to_string() != oracle::special_word(s.p(), s.q())) ++spelling;
    for (const auto& [a, b] : points) {
      const MoebiusMatrix A{a.a, a.b, a.c, a.d}, B{b.a, b.b, b.c, b.d};
      const Complex got = evaluate_word(w, A, B).trace();
      const Complex want = oracle::tr(oracle::eval(w.to_string(), a, b));
      words = std::max(words, oracle::rel_err(got, want));
    }
    ++slopes;
  }
  const bool ok = anb <= 1e-8 && words <= 1e-8 && spelling == 0;
  return {ok, fmt("trace_AnB max rel=%.1e over 100 points, n<=30; %d slopes q<=20 max rel=%.1e, spelling mismatches=%d",
                  anb, words, slopes, words, spelling)};
}

Outcome scaling_limit() {
  const auto t0 = Clock::now();
  const double k8 = 4.0 + std::sqrt(15.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  int converged = 0, worst_n = 0;
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto r = scaling_convergence(8.0, {u(rng), u(rng)}, 80);
    if (!r.converged_at || r.degenerate) continue;
    const double err = std::abs(r.ratios.back() - k8);
    worst = std::max(worst, err);
    worst_n = std::max(worst_n, *r.converged_at);
    if (err < 1e-6 && *r.converged_at <= 80) ++converged;
  }
  const auto r100 = scaling_convergence(100.0, {37.0, 11.0}, 80);
  const double lim100 = r100.ratios.back().real();
  const bool ok100 = r100.converged_at.has_value() && std::abs(r100.ratios.back() - 99.98999) < 1e-5;
  const auto f8 = figure_scale_check(8.0), f100 = figure_scale_check(100.0);
  const double g8 = f8.relative_gap.value_or(-1.0), g100 = f100.relative_gap.value_or(-1.0);
  const bool gaps = std::abs(g8 - 0.016) < 5e-4 && std::abs(g100 - 1e-4) < 5e-6;
  const double dt = seconds_since(t0);
  const bool ok = converged == 20 && ok100 && gaps && dt < 0.1;
  return {ok, fmt("trA=8: %d/20 seeds within %.1e of 4+sqrt15 (worst n=%d); trA=100 limit=%.8f; gaps %.2f%% / %.4f%%; "
                  "runtime=%.1f ms",
                  converged, worst, worst_n, lim100, 100.0 * g8, 100.0 * g100, dt * 1e3)};
}

Outcome standard_anchor() {
  SliceSpec spec;
  spec.trA = 2.5;
  spec.center = {2.5, 0.0};
  spec.width = 6.0;
  spec.resolution = 256;
  const auto t0 = Clock::now();
  PixelGrid grid = render(spec);
  const double dt = seconds_since(t0);
  flood_components(grid);
  int checked = 0, bad = 0;
  std::set<std::int32_t> labels;
  for (const int row : {spec.resolution / 2 - 1, spec.resolution / 2}) {
    for (int col = 0; col < spec.resolution; ++col) {
      const double re = spec.pixel_center(col, row).real();
      if (re <= 2.05 || re >= 5.0) continue;
      ++checked;
      if (grid.at(col, row) != Cell::DiscreteLikely) ++bad;
      labels.insert(grid.labels[grid.index(col, row)]);
    }
  }
  const bool ok = checked > 0 && bad == 0 && labels.size() == 1 && *labels.begin() != 0 && dt < 120.0;
  return {ok, fmt("%d real-axis pixels in (2.05, 5.0), %d not DiscreteLikely, %zu distinct labels; runtime=%.1f s on %d worker(s)",
                  checked, bad, labels.size(), dt, worker_count())};
}

PixelGrid large_trace_grid;

Outcome nonstandard_components() {
  SliceSpec spec;
  spec.trA = 8.0;
  spec.center = {16.0, 0.0};
  spec.width = 32.0;
  spec.resolution = 512;
  const auto t0 = Clock::now();
  large_trace_grid = render(spec);
  const auto reports = flood_components(large_trace_grid);
  const double dt = seconds_since(t0);
  const bool standard = !reports.empty() && std::any_of(reports.begin(), reports.end(), [](const auto& r) {
    return r.is_standard;
  });
  const bool ok = reports.size() >= 2 && standard && dt < 600.0;
  return {ok, fmt("%zu components (standard found: %s); runtime=%.1f s", reports.size(), standard ? "yes" : "no", dt)};
}

Outcome symmetry_suite() {
  const PixelGrid& grid = large_trace_grid;
  const int n = grid.size();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> pick(0, n - 1);
  int mirrored = 0, mismatched = 0, policy_pairs = 0, policy_bad = 0;
  TreeSearchOracle oracle(grid.spec.budget);
  SliceSpec plus = grid.spec, both = grid.spec;
  plus.root_policy = RootPolicy::plus;
  both.root_policy = RootPolicy::both;
  while (mirrored < 100) {
    const int col = pick(rng), row = pick(rng);
    if (row == n - 1 - row) continue;
    ++mirrored;
    if (grid.at(col, row) != grid.at(col, n - 1 - row)) ++mismatched;
    const Complex y = grid.spec.pixel_center(col, row);
    ++policy_pairs;
    if (classify_point(both, oracle, y) == Cell::DiscreteLikely && classify_point(plus, oracle, y) == Cell::Indiscrete) {
      ++policy_bad;
    }
  }
  // Real-axis rows sit where rejections happen, so probe them explicitly.
  for (int col = 0; col < n; col += 4) {
    const Complex y{grid.spec.pixel_center(col, 0).real(), 0.0};
    ++policy_pairs;
    if (classify_point(both, oracle, y) == Cell::DiscreteLikely && classify_point(plus, oracle, y) == Cell::Indiscrete) {
      ++policy_bad;
    }
  }
  double worst_rate = 0.0;
  std::string twists;
  for (const int k : {1, -1, 2}) {
    const auto r = dehn_twist_spot_check(grid, 200, k, 5);
    worst_rate = std::max(worst_rate, r.rate());
    twists += fmt(" n=%d:%zu/%zu", k, r.discrepancies, r.sampled);
  }
  const bool ok = mismatched == 0 && policy_bad == 0 && worst_rate < 0.02;
  return {ok, fmt("mirror mismatches %d/%d; root-policy violations %d/%d; Dehn twist%s (worst %.2f%%)", mismatched,
                  mirrored, policy_bad, policy_pairs, twists.c_str(), 100.0 * worst_rate)};
}

Outcome maskit_picture() {
  const auto dir = std::filesystem::temp_directory_path() / "qfslice_acceptance";
  std::filesystem::create_directories(dir);
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  const int code = cli::run({"figures", "--which", "maskit", "--out", dir.string()}, out, err);
  const double dt = seconds_since(t0);
  if (code != cli::kExitOk) return {false, "figures exited with " + std::to_string(code) + ": " + err.str()};
  const auto pgm = decode_pgm(read_file(dir / "maskit.pgm"));
  const int n = pgm.width;
  if (n != 512 || pgm.height != 512) return {false, fmt("image is %dx%d", pgm.width, pgm.height)};
  auto discrete = [&](int col, int row) { return pgm.pixels[static_cast<std::size_t>(row * n + col)] == gray_level(Cell::DiscreteLikely); };

  std::size_t black = 0, asym = 0;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      black += discrete(col, row);
      asym += discrete(col, row) != discrete(col, n - 1 - row);
    }
  }

  // On Tr A = 2 the Fricke relation gives (Tr AB - Tr B)^2 = -4, so the Dehn
  // twist B -> AB moves Tr B by 2i; the literal real shift is reported too.
  const auto g = generators_from_traces(2.0, {2.7, 0.3}, markov_third_trace(2.0, {2.7, 0.3}).first);
  const Complex step = g.trAB() - g.trB();
  const double pixel = 4.0 / n;
  const int shift = static_cast<int>(std::lround(2.0 / pixel));
  auto mismatch = [&](int dcol, int drow) {
    std::mt19937_64 rng(8);
    const int margin = 8;
    std::uniform_int_distribution<int> cpick(margin, n - 1 - margin - dcol), rpick(margin + drow, n - 1 - margin);
    int bad = 0;
    const int samples = 5000;
    for (int i = 0; i < samples; ++i) {
      const int col = cpick(rng), row = rpick(rng);
      bad += discrete(col, row) != discrete(col + dcol, row - drow);
    }
    return static_cast<double>(bad) / samples;
  };
  const double imag_shift = mismatch(0, shift);
  const double real_shift = mismatch(shift, 0);
  const bool twist_is_2i = std::abs(std::abs(step.imag()) - 2.0) < 1e-9 && std::abs(step.real()) < 1e-9;
  const bool ok = black > 0 && asym == 0 && twist_is_2i && imag_shift <= 0.02;
  return {ok, fmt("512x512, DiscreteLikely=%zu, mirror mismatches=%zu, twist step=%+.3f%+.3fi, +2i mismatch=%.2f%% "
                  "(literal +2 real shift: %.2f%%); runtime=%.1f s",
                  black, asym, step.real(), step.imag(), 100.0 * imag_shift, 100.0 * real_shift, dt)};
}

} // namespace

int main() {
  report("AC1", "constant reproduction", constants());
  report("AC2", "algebraic identity suite", algebraic_identities());
  report("AC3", "oracle equivalence on small instances", oracle_equivalence());
  report("AC4", "scaling limit", scaling_limit());
  report("AC5", "standard component anchor", standard_anchor());
  report("AC6", "non-standard components at trA=8", nonstandard_components());
  report("AC7", "symmetry suite", symmetry_suite());
  report("AC8", "Maskit-limit picture", maskit_picture());
  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
