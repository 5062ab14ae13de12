#include "qfslice/io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <zlib.h>

#ifndef QFSLICE_VERSION
#define QFSLICE_VERSION "0.0.0"
#endif

namespace qfslice {

std::string version_string() { return QFSLICE_VERSION; }

std::uint8_t gray_level(Cell c) {
  switch (c) {
  case Cell::DiscreteLikely: return kGrayDiscrete;
  case Cell::Indiscrete: return kGrayIndiscrete;
  case Cell::Indeterminate: return kGrayIndeterminate;
  case Cell::OutOfDomain: return kGrayOutOfDomain;
  }
  return kGrayIndeterminate;
}

std::vector<std::uint8_t> gray_pixels(const PixelGrid& grid) {
  std::vector<std::uint8_t> out(grid.cells.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = gray_level(grid.cells[i]);
  return out;
}

std::string encode_pgm(const PixelGrid& grid) {
  const int n = grid.size();
  std::string out = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
  const auto px = gray_pixels(grid);
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

namespace {

void put_u32(std::string& s, std::uint32_t v) {
  s.push_back(static_cast<char>((v >> 24) & 0xff));
  s.push_back(static_cast<char>((v >> 16) & 0xff));
  s.push_back(static_cast<char>((v >> 8) & 0xff));
  s.push_back(static_cast<char>(v & 0xff));
}

void put_chunk(std::string& out, const char* type, const std::string& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  std::string body(type, 4);
  body += data;
  out += body;
  const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

} // namespace

std::string encode_png(const PixelGrid& grid) {
  const int n = grid.size();
  const auto px = gray_pixels(grid);
  std::string raw;
  raw.reserve(px.size() + static_cast<std::size_t>(n));
  for (int row = 0; row < n; ++row) {
    raw.push_back('\0'); // filter type: none
    raw.append(reinterpret_cast<const char*>(px.data()) + static_cast<std::size_t>(row) * static_cast<std::size_t>(n),
               static_cast<std::size_t>(n));
  }
  uLongf len = compressBound(static_cast<uLong>(raw.size()));
  std::string z(len, '\0');
  if (compress2(reinterpret_cast<Bytef*>(z.data()), &len, reinterpret_cast<const Bytef*>(raw.data()),
                static_cast<uLong>(raw.size()), Z_BEST_COMPRESSION) != Z_OK) {
    throw std::runtime_error("zlib compression failed");
  }
  z.resize(len);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(n));
  put_u32(ihdr, static_cast<std::uint32_t>(n));
  ihdr += std::string("\x08\x00\x00\x00\x00", 5); // 8-bit gray, deflate, no filter, no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", z);
  put_chunk(out, "IEND", "");
  return out;
}

DecodedPgm decode_pgm(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P5" || w <= 0 || h <= 0 || maxval != 255) throw std::runtime_error("not an 8-bit P5 PGM");
  in.get(); // single whitespace after maxval
  DecodedPgm out{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * static_cast<std::size_t>(h))};
  in.read(reinterpret_cast<char*>(out.pixels.data()), static_cast<std::streamsize>(out.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(out.pixels.size())) throw std::runtime_error("truncated PGM");
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

using nlohmann::json;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

} // namespace

json to_json(const OracleBudget& b) {
  return {{"max_depth", b.max_depth},   {"grow_threshold", b.grow_threshold}, {"stop_magnitude", b.stop_magnitude},
          {"eps_real", b.eps_real},     {"max_nodes", b.max_nodes},           {"jorgensen_depth", b.jorgensen_depth}};
}

OracleBudget budget_from_json(const json& j) {
  OracleBudget b;
  b.max_depth = j.value("max_depth", b.max_depth);
  b.grow_threshold = j.value("grow_threshold", b.grow_threshold);
  b.stop_magnitude = j.value("stop_magnitude", b.stop_magnitude);
  b.eps_real = j.value("eps_real", b.eps_real);
  b.max_nodes = j.value("max_nodes", b.max_nodes);
  b.jorgensen_depth = j.value("jorgensen_depth", b.jorgensen_depth);
  b.validate();
  return b;
}

json to_json(const SliceSpec& s) {
  return {{"trA", s.trA},
          {"center", complex_json(s.center)},
          {"width", s.width},
          {"resolution", s.resolution},
          {"budget", to_json(s.budget)},
          {"root_policy", std::string(to_string(s.root_policy))}};
}

SliceSpec spec_from_json(const json& j) {
  SliceSpec s;
  s.trA = j.at("trA").get<double>();
  s.center = complex_from_json(j.at("center"));
  s.width = j.at("width").get<double>();
  s.resolution = j.at("resolution").get<int>();
  if (j.contains("budget")) s.budget = budget_from_json(j.at("budget"));
  s.root_policy = parse_root_policy(j.value("root_policy", std::string("plus")));
  s.validate();
  return s;
}

json to_json(const OracleVerdict& v) {
  json out = {{"verdict", std::string(to_string(v.tag))}, {"depth_used", v.depth_used}, {"nodes", v.nodes}};
  if (v.witness) {
    const Witness& w = *v.witness;
    out["witness"] = {{"kind", w.kind == Witness::Kind::EllipticTrace ? "elliptic_trace" : "jorgensen"},
                      {"slope", w.slope.to_string()},
                      {"trace", complex_json(w.trace)},
                      {"depth", w.depth}};
    if (w.kind == Witness::Kind::Jorgensen) out["witness"]["jorgensen_sum"] = w.jorgensen_sum;
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

json to_json(const ComponentReport& r) {
  return {{"label", r.label},
          {"pixels", r.pixel_count},
          {"bbox", {r.bbox.col_min, r.bbox.row_min, r.bbox.col_max, r.bbox.row_max}},
          {"centroid_re", r.centroid.real()},
          {"centroid_im", r.centroid.imag()},
          {"standard", r.is_standard},
          {"euler_characteristic", r.euler_characteristic}};
}

json sidecar_json(const SliceSpec& spec, const json& extra) {
  json out = {{"spec", to_json(spec)},
              {"oracle_defaults", to_json(OracleBudget{})},
              {"legend",
               {{"DiscreteLikely", kGrayDiscrete},
                {"Indeterminate", kGrayIndeterminate},
                {"OutOfDomain", kGrayOutOfDomain},
                {"Indiscrete", kGrayIndiscrete}}},
              {"version", version_string()}};
  for (auto it = extra.begin(); it != extra.end(); ++it) out[it.key()] = it.value();
  return out;
}

json components_json(const std::vector<ComponentReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::string components_csv(const std::vector<ComponentReport>& reports) {
  std::string out = "label,pixels,bbox,centroid_re,centroid_im,standard\n";
  std::array<char, 64> re{}, im{};
  for (const auto& r : reports) {
    std::snprintf(re.data(), re.size(), "%.17g", r.centroid.real());
    std::snprintf(im.data(), im.size(), "%.17g", r.centroid.imag());
    out += std::to_string(r.label) + "," + std::to_string(r.pixel_count) + "," + std::to_string(r.bbox.col_min) + ";" +
           std::to_string(r.bbox.row_min) + ";" + std::to_string(r.bbox.col_max) + ";" + std::to_string(r.bbox.row_max) +
           "," + re.data() + "," + im.data() + "," + (r.is_standard ? "true" : "false") + "\n";
  }
  return out;
}

} // namespace qfslice
