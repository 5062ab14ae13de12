#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "qfslice/raster.hpp"

namespace qfslice {

/// Gray levels of the image legend.
inline constexpr std::uint8_t kGrayDiscrete = 0;
inline constexpr std::uint8_t kGrayIndeterminate = 128;
inline constexpr std::uint8_t kGrayOutOfDomain = 200;
inline constexpr std::uint8_t kGrayIndiscrete = 255;

std::uint8_t gray_level(Cell c);

/// Row-major 8-bit samples of the grid, top row first.
std::vector<std::uint8_t> gray_pixels(const PixelGrid& grid);

/// Binary PGM: "P5\n<w> <h>\n255\n" followed by w*h bytes.
std::string encode_pgm(const PixelGrid& grid);
/// 8-bit grayscale PNG (zlib-compressed IDAT).
std::string encode_png(const PixelGrid& grid);

struct DecodedPgm {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};
DecodedPgm decode_pgm(const std::string& bytes);

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

nlohmann::json to_json(const OracleBudget& b);
OracleBudget budget_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SliceSpec& s);
SliceSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OracleVerdict& v);
nlohmann::json to_json(const ComponentReport& r);

/// Metadata sidecar: the full spec, the default oracle budget and the version.
/// `extra` is merged in (e.g. the --length flag that produced trA).
nlohmann::json sidecar_json(const SliceSpec& spec, const nlohmann::json& extra = nlohmann::json::object());

/// JSON array of component reports.
nlohmann::json components_json(const std::vector<ComponentReport>& reports);
/// CSV with header label,pixels,bbox,centroid_re,centroid_im,standard;
/// bbox is "col_min;row_min;col_max;row_max".
std::string components_csv(const std::vector<ComponentReport>& reports);

std::string version_string();

} // namespace qfslice
