#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace mdgi {

/// Elevation level. Inputs are validated to be >= 1; morphological outputs may
/// contain 0 where a structuring element does not fit inside the domain.
using Elevation = std::uint32_t;

/// Lattice directions used for one-dimensional scans.
///   kRow      : (0, +1)  matches B4
///   kColumn   : (+1, 0)  matches B2
///   kDiagDown : (+1, +1) matches B3
///   kDiagUp   : (+1, -1) matches B1
/// Steps are written (row, column).
enum class Direction { kRow, kColumn, kDiagDown, kDiagUp };

inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::kRow, Direction::kColumn, Direction::kDiagDown, Direction::kDiagUp};

std::string_view to_string(Direction d) noexcept;
std::optional<Direction> parse_direction(std::string_view name) noexcept;

struct LatticeStep {
  int drow;
  int dcol;
};
LatticeStep step_of(Direction d) noexcept;

struct Cell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Masked integer raster f: A -> H over a width x height lattice.
///
/// Cells outside the domain A are stored as 0, which is also the value read by
/// the morphological operators when a window leaves A. Instances are immutable.
class Dem {
 public:
  /// Validating constructor: every present value must be >= 1 and at least one
  /// cell must be present. `cells` is row-major with size width * height.
  static Dem from_cells(std::size_t width, std::size_t height,
                        std::span<const std::optional<Elevation>> cells);

  /// Convenience for literals; rows must all have the same length.
  static Dem from_rows(const std::vector<std::vector<std::optional<Elevation>>>& rows);

  /// A DEM on the same domain carrying new values. Zeros are allowed inside
  /// the domain; entries outside the domain are forced to 0.
  Dem with_values(std::vector<Elevation> values) const;

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  /// |A|
  std::size_t cell_count() const noexcept { return cell_count_; }

  bool in_domain(std::size_t row, std::size_t col) const noexcept {
    return mask_[row * width_ + col] != 0;
  }
  std::optional<Elevation> at(std::size_t row, std::size_t col) const noexcept {
    if (!in_domain(row, col)) return std::nullopt;
    return values_[row * width_ + col];
  }
  /// Value with the pad-0 convention; any coordinate is accepted.
  Elevation padded(std::ptrdiff_t row, std::ptrdiff_t col) const noexcept {
    if (row < 0 || col < 0 || row >= static_cast<std::ptrdiff_t>(height_) ||
        col >= static_cast<std::ptrdiff_t>(width_))
      return 0;
    return values_[static_cast<std::size_t>(row) * width_ + static_cast<std::size_t>(col)];
  }

  /// Row-major values, 0 outside the domain.
  std::span<const Elevation> values() const noexcept { return values_; }
  /// Row-major domain indicator (1 inside A).
  std::span<const std::uint8_t> mask() const noexcept { return mask_; }

  /// Extrema over present cells.
  Elevation min_elevation() const noexcept { return min_; }
  Elevation max_elevation() const noexcept { return max_; }

  friend bool operator==(const Dem& a, const Dem& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.mask_ == b.mask_ &&
           a.values_ == b.values_;
  }

 private:
  Dem() = default;
  void summarize();

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t cell_count_ = 0;
  std::vector<Elevation> values_;
  std::vector<std::uint8_t> mask_;
  Elevation min_ = 0;
  Elevation max_ = 0;
};

/// Real-valued grid as read from disk, before conversion to levels.
struct RawGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> values;      // row-major
  std::vector<std::uint8_t> mask;  // 1 = present
};

struct Quantization {
  double step = 1.0;
  double datum = 0.0;
};

/// z -> floor((z - datum) / step) + 1, clamped below at 1. Masked and
/// non-finite cells become absent. Throws InvalidArgument on step <= 0 or an
/// empty domain, OverflowError when a level exceeds the Elevation range.
Dem quantize(const RawGrid& raw, double step, double datum);

/// Pass-through conversion: every present value must already be a positive
/// integer. Throws InvalidArgument otherwise.
Dem exact_levels(const RawGrid& raw);

/// quantize() when `q` is set, exact_levels() otherwise.
Dem to_dem(const RawGrid& raw, const std::optional<Quantization>& q);

/// V(f): exact sum of present elevations.
std::uint64_t volume(const Dem& dem) noexcept;

/// Maximal run of consecutive domain cells on one lattice line.
struct Segment {
  Cell start;
  std::vector<Elevation> values;
};

/// One lattice line in a given direction, split at domain gaps.
///
/// Line indices: kRow -> row, kColumn -> column, kDiagDown -> col - row + (height - 1),
/// kDiagUp -> row + col. Cells are ordered by increasing row (by column for kRow).
struct ScanLine {
  Direction direction = Direction::kRow;
  std::size_t index = 0;
  std::vector<Segment> segments;
};

/// Full lattice line geometry, ignoring the mask.
struct LatticeLine {
  std::size_t index = 0;
  Cell start;
  std::size_t length = 0;
};

std::vector<LatticeLine> lattice_lines(std::size_t width, std::size_t height, Direction d);

/// Lines with no domain cell are omitted.
std::vector<ScanLine> scan_lines(const Dem& dem, Direction d);

/// Mirrors each selected row inside its single segment. Throws InvalidArgument
/// if a selected row has more than one segment or is out of range.
Dem reflect_rows(const Dem& dem, std::span<const std::size_t> rows);

/// Multiplies every present elevation by k >= 1. Throws InvalidArgument for
/// k < 1 and OverflowError when a product leaves the Elevation range.
Dem scale_heights(const Dem& dem, std::uint64_t k);

}  // namespace mdgi
