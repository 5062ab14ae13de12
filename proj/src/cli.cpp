#include "qfslice/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qfslice/analysis.hpp"
#include "qfslice/discreteness.hpp"
#include "qfslice/groups.hpp"
#include "qfslice/io.hpp"
#include "qfslice/raster.hpp"
#include "qfslice/words.hpp"

namespace qfslice::cli {

using nlohmann::json;

namespace {

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const MoebiusMatrix& m) {
  return json::array({json::array({complex_json(m.a), complex_json(m.b)}),
                      json::array({complex_json(m.c), complex_json(m.d)})});
}

json pair_json(const MarkedPair& g) {
  return {{"A", matrix_json(g.A)},
          {"B", matrix_json(g.B)},
          {"trA", complex_json(g.trA())},
          {"trB", complex_json(g.trB())},
          {"trAB", complex_json(g.trAB())},
          {"commutator_trace", complex_json(g.commutator_trace())}};
}

// Budget flags shared by every oracle-driven subcommand.
struct BudgetFlags {
  OracleBudget budget;

  void add(CLI::App& app) {
    app.add_option("--depth", budget.max_depth, "maximum tree depth");
    app.add_option("--grow", budget.grow_threshold, "growth threshold (> 2)");
    app.add_option("--stop", budget.stop_magnitude, "hard-stop trace magnitude");
    app.add_option("--eps", budget.eps_real, "tolerance for real/parabolic traces");
    app.add_option("--max-nodes", budget.max_nodes, "vertex budget per search");
  }
};

struct TraceAFlags {
  std::optional<double> trA;
  std::optional<double> length;

  void add(CLI::App& app) {
    auto* t = app.add_option("--trA", trA, "fixed trace of A (>= 2)");
    auto* l = app.add_option("--length", length, "hyperbolic length c of A; trA = 2 cosh(c/2)");
    t->excludes(l);
  }

  double resolve() const {
    if (trA) return *trA;
    if (length) {
      if (!(*length >= 0.0)) throw DomainError("--length must be >= 0");
      return 2.0 * std::cosh(*length / 2.0);
    }
    throw UsageError("one of --trA or --length is required");
  }

  json metadata() const {
    json j = json::object();
    if (trA) j["trA_flag"] = *trA;
    if (length) j["length_flag"] = *length;
    return j;
  }
};

struct SliceFlags {
  TraceAFlags trace_a;
  BudgetFlags budget;
  std::string center;
  double width = 6.0;
  int res = 256;
  std::string root = "plus";
  std::string out = ".";
  std::string format = "pgm";
  std::string name = "slice";
  std::string from_sidecar;
  bool json_output = false;

  void add(CLI::App& app) {
    trace_a.add(app);
    budget.add(app);
    app.add_option("--center", center, "window center re,im (default 2 coth(c/2) on the real axis)");
    app.add_option("--width", width, "window width");
    app.add_option("--res", res, "pixels per side");
    app.add_option("--root", root, "Markov root for Tr AB: plus|minus|both");
    app.add_option("--out", out, "output directory");
    app.add_option("--format", format, "image format: pgm|png");
    app.add_option("--name", name, "output file stem");
    app.add_option("--from-sidecar", from_sidecar, "re-run the spec stored in a sidecar JSON");
    app.add_flag("--json", json_output, "print the run summary as JSON");
  }

  SliceSpec spec() const {
    if (!from_sidecar.empty()) return spec_from_json(json::parse(read_file(from_sidecar)).at("spec"));
    SliceSpec s;
    s.trA = trace_a.resolve();
    if (!center.empty()) {
      s.center = parse_complex(center);
    } else {
      s.center = s.trA > 2.0 ? Complex(default_center(s.trA), 0.0) : Complex(2.0, 0.0);
    }
    s.width = width;
    s.resolution = res;
    s.budget = budget.budget;
    s.root_policy = parse_root_policy(root);
    if (format != "pgm" && format != "png") throw UsageError("--format must be pgm or png");
    s.validate();
    return s;
  }
};

struct RenderOutput {
  std::filesystem::path image;
  std::filesystem::path sidecar;
  double seconds = 0.0;
};

RenderOutput write_render(const PixelGrid& grid, const std::string& dir, const std::string& stem,
                          const std::string& format, json extra) {
  RenderOutput o;
  const std::filesystem::path base(dir);
  o.image = base / (stem + "." + format);
  o.sidecar = base / (stem + ".json");
  write_file(o.image, format == "png" ? encode_png(grid) : encode_pgm(grid));
  extra["image"] = o.image.filename().string();
  extra["format"] = format;
  write_file(o.sidecar, sidecar_json(grid.spec, extra).dump(2) + "\n");
  return o;
}

json cell_counts(const PixelGrid& grid) {
  std::map<Cell, std::size_t> counts;
  for (Cell c : grid.cells) ++counts[c];
  json j = json::object();
  for (Cell c : {Cell::DiscreteLikely, Cell::Indiscrete, Cell::Indeterminate, Cell::OutOfDomain}) {
    j[std::string(to_string(c))] = counts[c];
  }
  return j;
}

PixelGrid timed_render(const SliceSpec& spec, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  PixelGrid g = render(spec);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g;
}

// Figure preset windows. The windows at trA = 8 and 100
// are [0, w] x [-w/2, w/2] so that the nested widths scale about Tr B = 0.
struct FigurePreset {
  std::string name;
  double trA;
  Complex center;
  double width;
};

std::vector<FigurePreset> figure_presets(const std::string& which) {
  std::vector<FigurePreset> all = {
      {"maskit", 2.0, {2.0, 0.0}, 4.0},
      {"trA2.5", 2.5, {2.5, 0.0}, 6.0},
      {"trA8_w16", 8.0, {8.0, 0.0}, 16.0},
      {"trA8_w32", 8.0, {16.0, 0.0}, 32.0},
      {"trA8_w128", 8.0, {64.0, 0.0}, 128.0},
      {"trA100_w128", 100.0, {64.0, 0.0}, 128.0},
      {"trA100_w2560", 100.0, {1280.0, 0.0}, 2560.0},
      {"trA100_w12800", 100.0, {6400.0, 0.0}, 12800.0},
  };
  if (which == "all") return all;
  std::vector<FigurePreset> out;
  auto take = [&](auto pred) {
    std::copy_if(all.begin(), all.end(), std::back_inserter(out), pred);
  };
  if (which == "maskit") take([](const FigurePreset& p) { return p.name == "maskit"; });
  else if (which == "2.5" || which == "fig1") {
    take([](const FigurePreset& p) { return p.trA <= 2.5; });
    if (which == "2.5") out.erase(out.begin());
  } else if (which == "8" || which == "fig2") take([](const FigurePreset& p) { return p.trA == 8.0; });
  else if (which == "100" || which == "fig3") take([](const FigurePreset& p) { return p.trA == 100.0; });
  else throw UsageError("--which must be maskit, 2.5, 8, 100, fig1, fig2, fig3 or all");
  return out;
}

// Flat key=value config: keys mirror long flags and only fill flags that
// are absent from the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end()) return args;
  if (std::next(it) == args.end()) throw UsageError("--config needs a file path");
  const std::string path = *std::next(it);
  args.erase(it, std::next(it, 2));
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file " + path);
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    const std::string flag = "--" + key;
    if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
    if (value == "true") {
      args.push_back(flag);
    } else if (value != "false") {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

} // namespace

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw UsageError("");
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw UsageError("");
    const double im = std::stod(b, &used);
    if (used != b.size()) throw UsageError("");
    return {re, im};
  } catch (const std::logic_error&) {
    throw UsageError("expected a complex number 're,im' or 're', got '" + text + "'");
  }
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"qfslice: linear slices of quasifuchsian punctured-torus space"};
  app.require_subcommand(1);

  // render
  SliceFlags render_flags;
  auto* render_cmd = app.add_subcommand("render", "render a Tr B window at fixed Tr A");
  render_flags.add(*render_cmd);

  // components
  SliceFlags comp_flags;
  auto* comp_cmd = app.add_subcommand("components", "render and report connected components");
  comp_flags.add(*comp_cmd);

  // twist-check
  SliceFlags twist_flags;
  int twist_samples = 200;
  int twist_n = 1;
  std::uint64_t twist_seed = 1;
  auto* twist_cmd = app.add_subcommand("twist-check", "re-test random discrete pixels after (A,B) -> (A, A^n B)");
  twist_flags.add(*twist_cmd);
  twist_cmd->add_option("--samples", twist_samples, "number of pixels to re-test");
  twist_cmd->add_option("--n", twist_n, "twist power");
  twist_cmd->add_option("--seed", twist_seed, "sampling seed");

  // probe
  TraceAFlags probe_a;
  BudgetFlags probe_budget;
  std::string probe_trB, probe_trAB, probe_root = "plus";
  auto* probe_cmd = app.add_subcommand("probe", "run the discreteness oracle at one point");
  probe_a.add(*probe_cmd);
  probe_budget.add(*probe_cmd);
  probe_cmd->add_option("--trB", probe_trB, "Tr B as re,im")->required();
  probe_cmd->add_option("--trAB", probe_trAB, "explicit Tr AB (otherwise a Markov root)");
  probe_cmd->add_option("--root", probe_root, "plus|minus|both");

  // farey-word
  std::string slope_text;
  std::string fw_trA, fw_trB, fw_trAB, fw_lambda, fw_tau;
  auto* fw_cmd = app.add_subcommand("farey-word", "print the special word W_{p/q} and optionally its trace");
  fw_cmd->add_option("slope", slope_text, "slope p/q")->required();
  fw_cmd->add_option("--trA", fw_trA, "Tr A (re,im) for trace evaluation");
  fw_cmd->add_option("--trB", fw_trB, "Tr B (re,im)");
  fw_cmd->add_option("--trAB", fw_trAB, "Tr AB (re,im); default larger Markov root");
  fw_cmd->add_option("--lambda", fw_lambda, "complex length (re,im); evaluates on CFN generators");
  fw_cmd->add_option("--tau", fw_tau, "complex twist (re,im)");

  // gens
  std::string gens_lambda, gens_tau = "0";
  auto* gens_cmd = app.add_subcommand("gens", "generators from complex Fenchel-Nielsen coordinates");
  gens_cmd->add_option("--lambda", gens_lambda, "complex length re,im")->required();
  gens_cmd->add_option("--tau", gens_tau, "complex twist re,im");

  // earle
  std::string earle_d;
  bool earle_scan = false;
  int earle_scan_n = 200;
  auto* earle_cmd = app.add_subcommand("earle", "Earle slice generators A_d, B_d");
  earle_cmd->add_option("--d", earle_d, "Earle parameter re,im")->required();
  earle_cmd->add_flag("--scan", earle_scan, "also scan Re d in [Re d, Re d + 10] for the W_{2/1} hyperbolic locus");
  earle_cmd->add_option("--scan-res", earle_scan_n, "scan grid size");

  // constants
  std::vector<double> const_trA = {2.5, 8.0, 100.0};
  auto* const_cmd = app.add_subcommand("constants", "c0 lower bound and scaling constants");
  const_cmd->add_option("--trA", const_trA, "trace values for the scaling constants");

  // scaling
  double sc_trA = 8.0;
  std::string sc_trB = "3";
  int sc_n = 40;
  auto* sc_cmd = app.add_subcommand("scaling", "ratio table Tr A^n B / Tr A^{n-1} B as CSV");
  sc_cmd->add_option("--trA", sc_trA, "Tr A (> 2)");
  sc_cmd->add_option("--trB", sc_trB, "Tr B re,im");
  sc_cmd->add_option("--n", sc_n, "number of ratios");

  // figures
  std::string fig_which = "all", fig_out = "figures", fig_format = "pgm";
  int fig_res = 512;
  BudgetFlags fig_budget;
  auto* fig_cmd = app.add_subcommand("figures", "render the figure preset windows");
  fig_cmd->add_option("--which", fig_which, "maskit|2.5|8|100|fig1|fig2|fig3|all");
  fig_cmd->add_option("--res", fig_res, "pixels per side");
  fig_cmd->add_option("--out", fig_out, "output directory");
  fig_cmd->add_option("--format", fig_format, "pgm|png");
  fig_budget.add(*fig_cmd);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (render_cmd->parsed()) {
      const SliceSpec spec = render_flags.spec();
      double secs = 0.0;
      const PixelGrid g = timed_render(spec, secs);
      json extra = render_flags.trace_a.metadata();
      extra["seconds"] = secs;
      const auto o = write_render(g, render_flags.out, render_flags.name, render_flags.format, extra);
      json summary = {{"image", o.image.string()}, {"sidecar", o.sidecar.string()}, {"counts", cell_counts(g)},
                      {"seconds", secs}};
      if (render_flags.json_output) out << summary.dump(2) << "\n";
      else out << "wrote " << o.image.string() << " (" << secs << " s)\n";
    } else if (comp_cmd->parsed()) {
      const SliceSpec spec = comp_flags.spec();
      double secs = 0.0;
      PixelGrid g = timed_render(spec, secs);
      const auto reports = flood_components(g);
      json extra = comp_flags.trace_a.metadata();
      extra["seconds"] = secs;
      const auto o = write_render(g, comp_flags.out, comp_flags.name, comp_flags.format, extra);
      const std::filesystem::path dir(comp_flags.out);
      write_file(dir / (comp_flags.name + "_components.json"), components_json(reports).dump(2) + "\n");
      write_file(dir / (comp_flags.name + "_components.csv"), components_csv(reports));
      json summary = {{"image", o.image.string()},
                      {"components", reports.size()},
                      {"standard_found", std::any_of(reports.begin(), reports.end(),
                                                     [](const ComponentReport& r) { return r.is_standard; })},
                      {"counts", cell_counts(g)},
                      {"seconds", secs}};
      if (comp_flags.json_output) out << summary.dump(2) << "\n";
      else out << reports.size() << " components; wrote " << o.image.string() << "\n";
    } else if (twist_cmd->parsed()) {
      const SliceSpec spec = twist_flags.spec();
      double secs = 0.0;
      const PixelGrid g = timed_render(spec, secs);
      const auto rep = dehn_twist_spot_check(g, twist_samples, twist_n, twist_seed);
      json details = json::array();
      for (const auto& d : rep.details) {
        details.push_back({{"col", d.col}, {"row", d.row}, {"verdict", std::string(to_string(d.verdict))}});
      }
      out << json{{"n", rep.n},
                  {"sampled", rep.sampled},
                  {"discrepancies", rep.discrepancies},
                  {"rate", rep.rate()},
                  {"details", details}}
                 .dump(2)
          << "\n";
    } else if (probe_cmd->parsed()) {
      const Complex x{probe_a.resolve(), 0.0};
      const Complex y = parse_complex(probe_trB);
      probe_budget.budget.validate();
      json result = {{"trA", complex_json(x)}, {"trB", complex_json(y)}};
      if (!probe_trAB.empty()) {
        const Complex z = parse_complex(probe_trAB);
        result["trAB"] = complex_json(z);
        result["result"] = to_json(bq_search({x, y, z}, probe_budget.budget));
        result["verdict"] = result["result"]["verdict"];
      } else {
        const auto [zp, zm] = markov_third_trace(x, y);
        const RootPolicy policy = parse_root_policy(probe_root);
        json roots = json::array();
        std::vector<Verdict> tags;
        for (auto [name, z] : {std::pair{"plus", zp}, std::pair{"minus", zm}}) {
          if ((policy == RootPolicy::plus && std::string(name) == "minus") ||
              (policy == RootPolicy::minus && std::string(name) == "plus")) {
            continue;
          }
          const OracleVerdict v = bq_search({x, y, z}, probe_budget.budget);
          tags.push_back(v.tag);
          json r = to_json(v);
          r["root"] = name;
          r["trAB"] = complex_json(z);
          roots.push_back(r);
        }
        Verdict overall = tags.front();
        if (tags.size() == 2) {
          if (tags[0] == Verdict::Indiscrete || tags[1] == Verdict::Indiscrete) overall = Verdict::Indiscrete;
          else if (tags[0] == Verdict::DiscreteLikely && tags[1] == Verdict::DiscreteLikely) overall = Verdict::DiscreteLikely;
          else overall = Verdict::Indeterminate;
        }
        result["roots"] = roots;
        result["verdict"] = std::string(to_string(overall));
      }
      out << result.dump(2) << "\n";
    } else if (fw_cmd->parsed()) {
      const FareySlope s = FareySlope::parse(slope_text);
      const GeneratorWord w = special_word(s);
      json result = {{"slope", s.to_string()}, {"word", w.to_string()}, {"length", w.size()}};
      std::optional<MarkedPair> gens;
      if (!fw_lambda.empty()) {
        gens = cfn_generators({parse_complex(fw_lambda), fw_tau.empty() ? Complex(0.0) : parse_complex(fw_tau)});
      } else if (!fw_trA.empty() && !fw_trB.empty()) {
        const Complex x = parse_complex(fw_trA), y = parse_complex(fw_trB);
        const Complex z = fw_trAB.empty() ? markov_third_trace(x, y).first : parse_complex(fw_trAB);
        gens = generators_from_traces(x, y, z);
      } else if (!fw_trA.empty() || !fw_trB.empty() || !fw_tau.empty()) {
        throw UsageError("trace evaluation needs --lambda [--tau] or both --trA and --trB");
      }
      if (gens) result["trace"] = complex_json(evaluate_word(w, gens->A, gens->B).trace());
      out << result.dump(2) << "\n";
    } else if (gens_cmd->parsed()) {
      const Complex lambda = parse_complex(gens_lambda), tau = parse_complex(gens_tau);
      const MarkedPair g = cfn_generators({lambda, tau});
      json result = pair_json(g);
      result["lambda"] = complex_json(lambda);
      result["tau"] = complex_json(tau);
      result["trace_twist_relation"] = complex_json(trace_twist_relation(lambda, tau));
      out << result.dump(2) << "\n";
    } else if (earle_cmd->parsed()) {
      const EarleParam e{parse_complex(earle_d)};
      json result = pair_json(earle_generators(e));
      result["d"] = complex_json(e.d);
      result["trace_W21"] = complex_json(trace_W21(e));
      if (earle_scan) {
        const double r0 = std::max(e.d.real(), 1e-3);
        const auto hits = earle_locus_scan(r0, r0 + 10.0, -5.0, 5.0, earle_scan_n);
        json arr = json::array();
        for (const auto& h : hits) arr.push_back({{"d", complex_json(h.d)}, {"trace", complex_json(h.trace)}});
        result["hyperbolic_locus_off_real_axis"] = arr;
      }
      out << result.dump(2) << "\n";
    } else if (const_cmd->parsed()) {
      json scal = json::array();
      for (double t : const_trA) {
        const FigureScale f = figure_scale_check(t);
        json entry = {{"trA", t}, {"scaling_constant", f.scaling_constant}};
        if (f.window_ratio) {
          entry["window_widths"] = f.window_widths;
          entry["window_ratio"] = *f.window_ratio;
          entry["relative_gap"] = *f.relative_gap;
        }
        scal.push_back(entry);
      }
      const double c0 = c0_lower_bound();
      out << std::setprecision(17)
          << json{{"c0_lower_bound", c0}, {"cosh_c0", std::cosh(c0)}, {"scaling", scal}}.dump(2) << "\n";
    } else if (sc_cmd->parsed()) {
      const ScalingReport rep = scaling_convergence(sc_trA, parse_complex(sc_trB), sc_n);
      out << "n,ratio_re,ratio_im,abs_error\n" << std::setprecision(17);
      for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
        out << (i + 1) << "," << rep.ratios[i].real() << "," << rep.ratios[i].imag() << ","
            << std::abs(rep.ratios[i] - rep.limit) << "\n";
      }
      if (rep.degenerate) err << "warning: ratio sequence hit a zero trace\n";
    } else if (fig_cmd->parsed()) {
      if (fig_format != "pgm" && fig_format != "png") throw UsageError("--format must be pgm or png");
      json done = json::array();
      for (const auto& p : figure_presets(fig_which)) {
        SliceSpec spec;
        spec.trA = p.trA;
        spec.center = p.center;
        spec.width = p.width;
        spec.resolution = fig_res;
        spec.budget = fig_budget.budget;
        spec.validate();
        double secs = 0.0;
        PixelGrid g = timed_render(spec, secs);
        const auto reports = flood_components(g);
        const auto o = write_render(g, fig_out, p.name, fig_format, {{"preset", p.name}, {"seconds", secs}});
        done.push_back({{"preset", p.name}, {"image", o.image.string()}, {"components", reports.size()},
                        {"counts", cell_counts(g)}, {"seconds", secs}});
      }
      out << done.dump(2) << "\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

} // namespace qfslice::cli
