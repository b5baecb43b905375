#include "mdgi/dem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mdgi/error.hpp"

namespace mdgi {

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::kRow: return "row";
    case Direction::kColumn: return "column";
    case Direction::kDiagDown: return "diag-down";
    case Direction::kDiagUp: return "diag-up";
  }
  return "?";
}

std::optional<Direction> parse_direction(std::string_view name) noexcept {
  for (Direction d : kAllDirections)
    if (to_string(d) == name) return d;
  return std::nullopt;
}

LatticeStep step_of(Direction d) noexcept {
  switch (d) {
    case Direction::kRow: return {0, 1};
    case Direction::kColumn: return {1, 0};
    case Direction::kDiagDown: return {1, 1};
    case Direction::kDiagUp: return {1, -1};
  }
  return {0, 1};
}

Dem Dem::from_cells(std::size_t width, std::size_t height,
                    std::span<const std::optional<Elevation>> cells) {
  if (width == 0 || height == 0) throw InvalidArgument("DEM must have positive width and height");
  if (cells.size() != width * height)
    throw InvalidArgument("expected " + std::to_string(width * height) + " cells, got " +
                          std::to_string(cells.size()));
  Dem dem;
  dem.width_ = width;
  dem.height_ = height;
  dem.values_.assign(cells.size(), 0);
  dem.mask_.assign(cells.size(), 0);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i]) continue;
    if (*cells[i] == 0)
      throw InvalidArgument("elevation at row " + std::to_string(i / width) + ", column " +
                            std::to_string(i % width) + " is not a positive integer");
    dem.values_[i] = *cells[i];
    dem.mask_[i] = 1;
  }
  dem.summarize();
  if (dem.cell_count_ == 0) throw InvalidArgument("DEM domain is empty");
  return dem;
}

Dem Dem::from_rows(const std::vector<std::vector<std::optional<Elevation>>>& rows) {
  if (rows.empty()) throw InvalidArgument("DEM must have at least one row");
  const std::size_t width = rows.front().size();
  std::vector<std::optional<Elevation>> cells;
  cells.reserve(width * rows.size());
  for (const auto& row : rows) {
    if (row.size() != width) throw InvalidArgument("ragged rows");
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return from_cells(width, rows.size(), cells);
}

Dem Dem::with_values(std::vector<Elevation> values) const {
  if (values.size() != values_.size()) throw InvalidArgument("value count does not match domain");
  Dem out;
  out.width_ = width_;
  out.height_ = height_;
  out.mask_ = mask_;
  out.values_ = std::move(values);
  for (std::size_t i = 0; i < out.values_.size(); ++i)
    if (!out.mask_[i]) out.values_[i] = 0;
  out.summarize();
  return out;
}

void Dem::summarize() {
  cell_count_ = 0;
  min_ = std::numeric_limits<Elevation>::max();
  max_ = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!mask_[i]) continue;
    ++cell_count_;
    min_ = std::min(min_, values_[i]);
    max_ = std::max(max_, values_[i]);
  }
  if (cell_count_ == 0) min_ = 0;
}

namespace {

Dem build(const RawGrid& raw, auto&& level_of) {
  if (raw.values.size() != raw.width * raw.height || raw.mask.size() != raw.values.size())
    throw InvalidArgument("raw grid size mismatch");
  std::vector<std::optional<Elevation>> cells(raw.values.size());
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    if (!raw.mask[i] || !std::isfinite(raw.values[i])) continue;
    cells[i] = level_of(raw.values[i], i);
  }
  return Dem::from_cells(raw.width, raw.height, cells);
}

}  // namespace

Dem quantize(const RawGrid& raw, double step, double datum) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw InvalidArgument("quantization step must be positive");
  if (!std::isfinite(datum)) throw InvalidArgument("quantization datum must be finite");
  return build(raw, [&](double z, std::size_t) -> Elevation {
    const double level = std::floor((z - datum) / step) + 1.0;
    if (level < 1.0) return 1;
    if (level > static_cast<double>(std::numeric_limits<Elevation>::max()))
      throw OverflowError("quantized level exceeds the elevation range");
    return static_cast<Elevation>(level);
  });
}

Dem exact_levels(const RawGrid& raw) {
  return build(raw, [&](double z, std::size_t i) -> Elevation {
    if (z < 1.0 || z != std::floor(z) ||
        z > static_cast<double>(std::numeric_limits<Elevation>::max()))
      throw InvalidArgument("value at row " + std::to_string(i / raw.width) + ", column " +
                            std::to_string(i % raw.width) +
                            " is not a positive integer level; configure a quantization step");
    return static_cast<Elevation>(z);
  });
}

Dem to_dem(const RawGrid& raw, const std::optional<Quantization>& q) {
  return q ? quantize(raw, q->step, q->datum) : exact_levels(raw);
}

std::uint64_t volume(const Dem& dem) noexcept {
  std::uint64_t sum = 0;
  for (Elevation v : dem.values()) sum += v;  // absent cells hold 0
  return sum;
}

std::vector<LatticeLine> lattice_lines(std::size_t width, std::size_t height, Direction d) {
  std::vector<LatticeLine> lines;
  switch (d) {
    case Direction::kRow:
      for (std::size_t r = 0; r < height; ++r) lines.push_back({r, {r, 0}, width});
      break;
    case Direction::kColumn:
      for (std::size_t c = 0; c < width; ++c) lines.push_back({c, {0, c}, height});
      break;
    case Direction::kDiagDown:
      // index = col - row + height - 1
      for (std::size_t k = 0; k + 1 < width + height; ++k) {
        Cell start = k < height ? Cell{height - 1 - k, 0} : Cell{0, k - (height - 1)};
        std::size_t len = std::min(height - start.row, width - start.col);
        lines.push_back({k, start, len});
      }
      break;
    case Direction::kDiagUp:
      // index = row + col
      for (std::size_t k = 0; k + 1 < width + height; ++k) {
        Cell start = k < width ? Cell{0, k} : Cell{k - (width - 1), width - 1};
        std::size_t len = std::min(height - start.row, start.col + 1);
        lines.push_back({k, start, len});
      }
      break;
  }
  return lines;
}

std::vector<ScanLine> scan_lines(const Dem& dem, Direction d) {
  const LatticeStep step = step_of(d);
  std::vector<ScanLine> out;
  for (const LatticeLine& line : lattice_lines(dem.width(), dem.height(), d)) {
    ScanLine scan{d, line.index, {}};
    Segment* open = nullptr;
    for (std::size_t k = 0; k < line.length; ++k) {
      const std::size_t r = line.start.row + k * static_cast<std::size_t>(step.drow);
      const std::size_t c = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(line.start.col) +
                                                     static_cast<std::ptrdiff_t>(k) * step.dcol);
      if (!dem.in_domain(r, c)) {
        open = nullptr;
        continue;
      }
      if (!open) {
        scan.segments.push_back({{r, c}, {}});
        open = &scan.segments.back();
      }
      open->values.push_back(*dem.at(r, c));
    }
    if (!scan.segments.empty()) out.push_back(std::move(scan));
  }
  return out;
}

Dem reflect_rows(const Dem& dem, std::span<const std::size_t> rows) {
  std::vector<Elevation> values(dem.values().begin(), dem.values().end());
  std::vector<std::uint8_t> done(dem.height(), 0);
  for (std::size_t r : rows) {
    if (r >= dem.height()) throw InvalidArgument("row " + std::to_string(r) + " out of range");
    if (done[r]) continue;  // a subset: duplicates select once
    done[r] = 1;
    std::size_t first = dem.width(), last = 0, segments = 0;
    bool inside = false;
    for (std::size_t c = 0; c < dem.width(); ++c) {
      const bool here = dem.in_domain(r, c);
      if (here && !inside) ++segments;
      if (here) {
        first = std::min(first, c);
        last = c;
      }
      inside = here;
    }
    if (segments > 1)
      throw InvalidArgument("row " + std::to_string(r) + " is not an interval (" +
                            std::to_string(segments) + " segments)");
    if (segments == 0) continue;
    auto* row = values.data() + r * dem.width();
    std::reverse(row + first, row + last + 1);
  }
  return dem.with_values(std::move(values));
}

Dem scale_heights(const Dem& dem, std::uint64_t k) {
  if (k < 1) throw InvalidArgument("scale factor must be >= 1");
  const std::uint64_t limit = std::numeric_limits<Elevation>::max();
  if (dem.max_elevation() != 0 && k > limit / dem.max_elevation())
    throw OverflowError("scaled elevation exceeds the elevation range");
  std::vector<Elevation> values(dem.values().begin(), dem.values().end());
  for (Elevation& v : values) v = static_cast<Elevation>(v * k);
  return dem.with_values(std::move(values));
}

}  // namespace mdgi
