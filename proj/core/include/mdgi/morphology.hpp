#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "mdgi/dem.hpp"

namespace mdgi {

/// Lattice offset. `dx` moves along a row (column index), `dy` across rows
/// (row index), so B4 = {(-1,0),(0,0),(1,0)} is horizontal.
struct Offset {
  int dx = 0;
  int dy = 0;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

/// Finite offset set that contains the origin and is symmetric.
class StructuringElement {
 public:
  /// Throws InvalidArgument if the origin is missing or the set is not symmetric.
  /// Duplicates are removed.
  static StructuringElement from_offsets(std::vector<Offset> offsets);

  std::span<const Offset> offsets() const noexcept { return offsets_; }
  std::size_t size() const noexcept { return offsets_.size(); }
  bool contains(Offset o) const noexcept;

  friend bool operator==(const StructuringElement&, const StructuringElement&) = default;

 private:
  std::vector<Offset> offsets_;  // sorted
};

enum class NamedSe { kB1, kB2, kB3, kB4, kB };

inline constexpr std::array<NamedSe, 5> kAllNamedSes = {NamedSe::kB1, NamedSe::kB2, NamedSe::kB3,
                                                         NamedSe::kB4, NamedSe::kB};

std::string_view to_string(NamedSe se) noexcept;
/// Throws InvalidArgument on an unknown name.
NamedSe parse_named_se(std::string_view name);

StructuringElement named_se(NamedSe se);
StructuringElement named_se(std::string_view name);

/// Scan direction of a directional element; B has none and throws InvalidArgument.
Direction direction_of(NamedSe se);

/// n-fold Minkowski sum of `se` with itself; nse(se, 0) = {(0,0)}.
StructuringElement nse(const StructuringElement& se, std::size_t n);

/// Centered contiguous segment of 2 * half_length + 1 cells along a lattice direction.
struct LineShape {
  Direction direction;
  std::size_t half_length;
};
/// Centered (2 * half_size + 1)^2 square.
struct SquareShape {
  std::size_t half_size;
};
using Shape = std::variant<std::monostate, LineShape, SquareShape>;

/// Recognizes the shapes with streaming implementations. The origin alone is
/// reported as SquareShape{0}.
Shape recognize(const StructuringElement& se);

// Flat operators. Reads outside the domain see 0; outputs keep the input mask.

/// min over offsets, computed directly.
Dem erode(const Dem& dem, const StructuringElement& se);
/// max over offsets, computed directly.
Dem dilate(const Dem& dem, const StructuringElement& se);
/// dilate(erode(dem, se), se).
Dem open(const Dem& dem, const StructuringElement& se);

/// open(dem, nse(se, n)), using the streaming kernels when nse(se, 1) is a
/// line or a square and the direct operators otherwise.
Dem multiscale_open(const Dem& dem, const StructuringElement& se, std::size_t n);

/// Centered running minimum with pad 0 (van Herk / Gil-Werman). `window` must
/// be odd and >= 1.
std::vector<Elevation> erode_line_streaming(std::span<const Elevation> values, std::size_t window);
/// Centered running maximum with pad 0.
std::vector<Elevation> dilate_line_streaming(std::span<const Elevation> values, std::size_t window);
/// Opening of a 1-D signal by a segment of `length` >= 1 cells (any parity):
/// each sample takes the largest minimum over the length-`length` windows that
/// contain it and lie inside the signal, or 0 when none does.
std::vector<Elevation> open_line_streaming(std::span<const Elevation> values, std::size_t length);

/// Opening by the segment L_length along `direction`, line by line.
Dem open_line(const Dem& dem, Direction direction, std::size_t length);

/// open(dem, nse(B, n)) via separable streaming erosion and dilation.
Dem open_square_separable(const Dem& dem, std::size_t n);

}  // namespace mdgi
