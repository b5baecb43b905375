#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "mdgi/dem.hpp"

namespace mdgi {

/// Reads an ESRI ASCII grid. Header keys (case-insensitive): ncols, nrows,
/// xllcorner|xllcenter, yllcorner|yllcenter, cellsize and an optional
/// NODATA_value, followed by nrows x ncols numbers, top row first. Cells equal
/// to NODATA_value or non-finite are masked. Throws ParseError.
RawGrid read_esri_ascii(std::istream& in);

/// read_esri_ascii() followed by to_dem().
Dem parse_esri_ascii(std::istream& in, const std::optional<Quantization>& q = std::nullopt);

/// Integer levels, NODATA_value -9999, unit cell size at the origin.
void write_esri_ascii(std::ostream& out, const Dem& dem);

/// Fixture CSV: one line per row, comma separated, empty field = masked.
RawGrid read_fixture_csv(std::istream& in);
Dem parse_fixture_csv(std::istream& in, const std::optional<Quantization>& q = std::nullopt);
void write_fixture_csv(std::ostream& out, const Dem& dem);

/// Dispatches on extension: ".asc" -> ESRI ASCII, ".csv" -> fixture CSV.
/// Throws Error when the file cannot be opened or the extension is unknown.
Dem load_dem(const std::filesystem::path& path, const std::optional<Quantization>& q = std::nullopt);

}  // namespace mdgi
