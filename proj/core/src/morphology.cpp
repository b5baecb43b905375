#include "mdgi/morphology.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>

#include "mdgi/error.hpp"
#include "sliding_window.hpp"

namespace mdgi {

StructuringElement StructuringElement::from_offsets(std::vector<Offset> offsets) {
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
  StructuringElement se;
  se.offsets_ = std::move(offsets);
  if (!se.contains({0, 0})) throw InvalidArgument("structuring element must contain the origin");
  for (const Offset& o : se.offsets_)
    if (!se.contains({-o.dx, -o.dy})) throw InvalidArgument("structuring element must be symmetric");
  return se;
}

bool StructuringElement::contains(Offset o) const noexcept {
  return std::binary_search(offsets_.begin(), offsets_.end(), o);
}

std::string_view to_string(NamedSe se) noexcept {
  switch (se) {
    case NamedSe::kB1: return "B1";
    case NamedSe::kB2: return "B2";
    case NamedSe::kB3: return "B3";
    case NamedSe::kB4: return "B4";
    case NamedSe::kB: return "B";
  }
  return "?";
}

NamedSe parse_named_se(std::string_view name) {
  for (NamedSe se : kAllNamedSes)
    if (to_string(se) == name) return se;
  throw InvalidArgument("unknown structuring element '" + std::string(name) + "'");
}

StructuringElement named_se(NamedSe se) {
  switch (se) {
    case NamedSe::kB1: return StructuringElement::from_offsets({{-1, 1}, {0, 0}, {1, -1}});
    case NamedSe::kB2: return StructuringElement::from_offsets({{0, 1}, {0, 0}, {0, -1}});
    case NamedSe::kB3: return StructuringElement::from_offsets({{-1, -1}, {0, 0}, {1, 1}});
    case NamedSe::kB4: return StructuringElement::from_offsets({{-1, 0}, {0, 0}, {1, 0}});
    case NamedSe::kB: {
      std::vector<Offset> square;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) square.push_back({dx, dy});
      return StructuringElement::from_offsets(std::move(square));
    }
  }
  throw InvalidArgument("unknown structuring element");
}

StructuringElement named_se(std::string_view name) { return named_se(parse_named_se(name)); }

Direction direction_of(NamedSe se) {
  switch (se) {
    case NamedSe::kB1: return Direction::kDiagUp;
    case NamedSe::kB2: return Direction::kColumn;
    case NamedSe::kB3: return Direction::kDiagDown;
    case NamedSe::kB4: return Direction::kRow;
    case NamedSe::kB: break;
  }
  throw InvalidArgument("B is not directional");
}

StructuringElement nse(const StructuringElement& se, std::size_t n) {
  if (n == 0) return StructuringElement::from_offsets({{0, 0}});
  std::set<Offset> acc(se.offsets().begin(), se.offsets().end());
  for (std::size_t i = 1; i < n; ++i) {
    std::set<Offset> next;
    for (const Offset& a : acc)
      for (const Offset& b : se.offsets()) next.insert({a.dx + b.dx, a.dy + b.dy});
    acc = std::move(next);
  }
  return StructuringElement::from_offsets({acc.begin(), acc.end()});
}

Shape recognize(const StructuringElement& se) {
  int reach = 0;
  for (const Offset& o : se.offsets()) reach = std::max({reach, std::abs(o.dx), std::abs(o.dy)});
  const auto side = static_cast<std::size_t>(2 * reach + 1);
  if (se.size() == side * side) return SquareShape{static_cast<std::size_t>(reach)};
  if (se.size() != side) return std::monostate{};
  for (Direction d : kAllDirections) {
    const LatticeStep step = step_of(d);
    bool match = true;
    for (int k = -reach; k <= reach && match; ++k) match = se.contains({k * step.dcol, k * step.drow});
    if (match) return LineShape{d, static_cast<std::size_t>(reach)};
  }
  return std::monostate{};
}

namespace {

template <class Reduce>
Dem apply_direct(const Dem& dem, const StructuringElement& se, Reduce reduce) {
  std::vector<Elevation> out(dem.values().size(), 0);
  for (std::size_t r = 0; r < dem.height(); ++r) {
    for (std::size_t c = 0; c < dem.width(); ++c) {
      if (!dem.in_domain(r, c)) continue;
      bool first = true;
      Elevation acc = 0;
      for (const Offset& o : se.offsets()) {
        const Elevation v = dem.padded(static_cast<std::ptrdiff_t>(r) + o.dy,
                                       static_cast<std::ptrdiff_t>(c) + o.dx);
        acc = first ? v : reduce(acc, v);
        first = false;
      }
      out[r * dem.width() + c] = acc;
    }
  }
  return dem.with_values(std::move(out));
}

struct MinOp {
  Elevation operator()(Elevation a, Elevation b) const { return a < b ? a : b; }
};
struct MaxOp {
  Elevation operator()(Elevation a, Elevation b) const { return a < b ? b : a; }
};

template <class Op>
std::vector<Elevation> centered_streaming(std::span<const Elevation> values, std::size_t window,
                                          Op op) {
  if (window % 2 == 0) throw InvalidArgument("streaming window must be odd");
  const std::size_t r = window / 2;
  std::vector<Elevation> padded(values.size() + 2 * r, 0);
  std::copy(values.begin(), values.end(), padded.begin() + static_cast<std::ptrdiff_t>(r));
  std::vector<Elevation> out(values.size()), prefix, suffix;
  detail::window_reduce(padded.data(), padded.size(), window, out.data(), op, prefix, suffix);
  return out;
}

/// Gathers each lattice line of a dense width x height grid, transforms it and
/// scatters the result. No masking happens here.
template <class LineFn>
std::vector<Elevation> per_line(std::span<const Elevation> grid, std::size_t width,
                                std::size_t height, Direction d, LineFn fn) {
  const LatticeStep step = step_of(d);
  std::vector<Elevation> out(grid.size(), 0);
  std::vector<Elevation> line;
  for (const LatticeLine& l : lattice_lines(width, height, d)) {
    line.resize(l.length);
    auto index = [&](std::size_t k) {
      const std::size_t r = l.start.row + k * static_cast<std::size_t>(step.drow);
      const auto c = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(l.start.col) +
                                              static_cast<std::ptrdiff_t>(k) * step.dcol);
      return r * width + c;
    };
    for (std::size_t k = 0; k < l.length; ++k) line[k] = grid[index(k)];
    const std::vector<Elevation> result = fn(std::span<const Elevation>(line));
    for (std::size_t k = 0; k < l.length; ++k) out[index(k)] = result[k];
  }
  return out;
}

}  // namespace

Dem erode(const Dem& dem, const StructuringElement& se) { return apply_direct(dem, se, MinOp{}); }

Dem dilate(const Dem& dem, const StructuringElement& se) { return apply_direct(dem, se, MaxOp{}); }

Dem open(const Dem& dem, const StructuringElement& se) { return dilate(erode(dem, se), se); }

Dem multiscale_open(const Dem& dem, const StructuringElement& se, std::size_t n) {
  const Shape shape = recognize(se);
  if (const auto* line = std::get_if<LineShape>(&shape))
    return open_line(dem, line->direction, 2 * line->half_length * n + 1);
  if (const auto* square = std::get_if<SquareShape>(&shape))
    return open_square_separable(dem, square->half_size * n);
  return open(dem, nse(se, n));
}

std::vector<Elevation> erode_line_streaming(std::span<const Elevation> values, std::size_t window) {
  return centered_streaming(values, window, MinOp{});
}

std::vector<Elevation> dilate_line_streaming(std::span<const Elevation> values,
                                             std::size_t window) {
  return centered_streaming(values, window, MaxOp{});
}

std::vector<Elevation> open_line_streaming(std::span<const Elevation> values, std::size_t length) {
  if (length == 0) throw InvalidArgument("segment length must be >= 1");
  const std::size_t n = values.size();
  std::vector<Elevation> out(n, 0);
  if (length > n) return out;
  std::vector<Elevation> prefix, suffix;
  // Minimum of each fully-inside translate, framed by length - 1 zeros per side;
  // translate s sits at s + length - 1.
  std::vector<Elevation> eroded(n + length - 1, 0);
  detail::window_reduce(values.data(), n, length, eroded.data() + (length - 1), MinOp{}, prefix,
                        suffix);
  detail::window_reduce(eroded.data(), eroded.size(), length, out.data(), MaxOp{}, prefix, suffix);
  return out;
}

Dem open_line(const Dem& dem, Direction direction, std::size_t length) {
  if (length == 1) return dem;
  // Masked cells read 0, which splits runs exactly like a domain gap.
  return dem.with_values(per_line(dem.values(), dem.width(), dem.height(), direction,
                                  [&](std::span<const Elevation> line) {
                                    return open_line_streaming(line, length);
                                  }));
}

Dem open_square_separable(const Dem& dem, std::size_t n) {
  if (n == 0) return dem;
  const std::size_t w = 2 * n + 1;
  auto erode_line = [&](std::span<const Elevation> l) { return erode_line_streaming(l, w); };
  auto dilate_line = [&](std::span<const Elevation> l) { return dilate_line_streaming(l, w); };
  const std::size_t W = dem.width(), H = dem.height();
  // The eroded grid is 0 on masked cells (the window always includes its own
  // cell), which is exactly the padding the dilation needs.
  auto eroded = per_line(per_line(dem.values(), W, H, Direction::kRow, erode_line), W, H,
                         Direction::kColumn, erode_line);
  return dem.with_values(per_line(per_line(eroded, W, H, Direction::kColumn, dilate_line), W, H,
                                  Direction::kRow, dilate_line));
}

}  // namespace mdgi
