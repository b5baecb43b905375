#pragma once

// Reference implementations for tests. Deliberately naive and written without
// the library's operators so agreement means something.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "mdgi/dem.hpp"
#include "mdgi/morphology.hpp"
#include "mdgi/rational.hpp"

namespace mdgi::testing {

using Rows = std::vector<std::vector<std::optional<Elevation>>>;

inline Dem row_dem(std::initializer_list<Elevation> values) {
  std::vector<std::optional<Elevation>> row(values.begin(), values.end());
  return Dem::from_rows({row});
}

/// Random masked DEM, never empty. Holes are dropped with probability `hole`.
inline Dem random_dem(std::mt19937& rng, std::size_t max_w, std::size_t max_h, Elevation max_level,
                      double hole) {
  std::uniform_int_distribution<std::size_t> wd(1, max_w), hd(1, max_h);
  std::uniform_int_distribution<Elevation> level(1, max_level);
  std::bernoulli_distribution drop(hole);
  const std::size_t w = wd(rng), h = hd(rng);
  std::vector<std::optional<Elevation>> cells(w * h);
  bool any = false;
  for (auto& c : cells) {
    if (drop(rng)) continue;
    c = level(rng);
    any = true;
  }
  if (!any) cells[std::uniform_int_distribution<std::size_t>(0, cells.size() - 1)(rng)] = level(rng);
  return Dem::from_cells(w, h, cells);
}

/// Random DEM whose rows are all single intervals (some rows may be empty).
inline Dem random_interval_rows(std::mt19937& rng, std::size_t max_w, std::size_t max_h,
                                Elevation max_level) {
  std::uniform_int_distribution<std::size_t> wd(1, max_w), hd(1, max_h);
  std::uniform_int_distribution<Elevation> level(1, max_level);
  const std::size_t w = wd(rng), h = hd(rng);
  std::vector<std::optional<Elevation>> cells(w * h);
  for (std::size_t r = 0; r < h; ++r) {
    std::size_t a = std::uniform_int_distribution<std::size_t>(0, w - 1)(rng);
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, w - 1)(rng);
    if (a > b) std::swap(a, b);
    for (std::size_t c = a; c <= b; ++c) cells[r * w + c] = level(rng);
  }
  return Dem::from_cells(w, h, cells);
}

inline std::vector<Elevation> naive_window(const std::vector<Elevation>& v, std::size_t window,
                                           bool take_min) {
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  const auto n = static_cast<std::ptrdiff_t>(v.size());
  std::vector<Elevation> out(v.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Elevation acc = take_min ? std::numeric_limits<Elevation>::max() : 0;
    for (std::ptrdiff_t j = i - half; j <= i + half; ++j) {
      const Elevation x = (j < 0 || j >= n) ? 0 : v[static_cast<std::size_t>(j)];
      acc = take_min ? std::min(acc, x) : std::max(acc, x);
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

/// Opening as the supremum over translates of `se` lying inside the domain.
inline Dem translate_fit_open(const Dem& dem, const StructuringElement& se) {
  int reach = 0;
  for (const Offset& o : se.offsets()) reach = std::max({reach, std::abs(o.dx), std::abs(o.dy)});
  const auto W = static_cast<int>(dem.width()), H = static_cast<int>(dem.height());
  std::vector<Elevation> out(dem.values().size(), 0);
  for (int tr = -reach; tr < H + reach; ++tr)
    for (int tc = -reach; tc < W + reach; ++tc) {
      bool fits = true;
      Elevation m = std::numeric_limits<Elevation>::max();
      for (const Offset& o : se.offsets()) {
        const int r = tr + o.dy, c = tc + o.dx;
        if (r < 0 || c < 0 || r >= H || c >= W ||
            !dem.in_domain(static_cast<std::size_t>(r), static_cast<std::size_t>(c))) {
          fits = false;
          break;
        }
        m = std::min(m, *dem.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
      }
      if (!fits) continue;
      for (const Offset& o : se.offsets()) {
        auto& cell = out[static_cast<std::size_t>((tr + o.dy) * W + tc + o.dx)];
        cell = std::max(cell, m);
      }
    }
  return dem.with_values(std::move(out));
}

inline std::uint64_t sum(const Dem& dem) {
  std::uint64_t s = 0;
  for (Elevation v : dem.values()) s += v;
  return s;
}

/// Homothetic volumes V_0, V_1, ... through translate-fit openings, ending at 0.
inline std::vector<std::uint64_t> oracle_volumes(const Dem& dem, const StructuringElement& se) {
  std::vector<std::uint64_t> v{sum(dem)};
  for (std::size_t n = 1; v.back() != 0; ++n) v.push_back(sum(translate_fit_open(dem, nse(se, n))));
  return v;
}

inline std::vector<Rational> probs_of(const std::vector<std::uint64_t>& volumes) {
  std::vector<Rational> p;
  for (std::size_t i = 0; i + 1 < volumes.size(); ++i)
    p.emplace_back(static_cast<std::int64_t>(volumes[i] - volumes[i + 1]),
                   static_cast<std::int64_t>(volumes[0]));
  return p;
}

using CellSet = std::set<std::pair<int, int>>;  // (row, col)

inline CellSet upper_set(const Dem& dem, Elevation h) {
  CellSet s;
  for (std::size_t r = 0; r < dem.height(); ++r)
    for (std::size_t c = 0; c < dem.width(); ++c)
      if (dem.in_domain(r, c) && *dem.at(r, c) >= h) s.insert({int(r), int(c)});
  return s;
}

/// Union of the translates of `se` contained in `x`.
inline CellSet binary_open(const CellSet& x, const StructuringElement& se) {
  CellSet out;
  for (const auto& [r, c] : x)
    for (const Offset& anchor : se.offsets()) {
      const int tr = r - anchor.dy, tc = c - anchor.dx;
      bool fits = true;
      for (const Offset& o : se.offsets())
        if (!x.count({tr + o.dy, tc + o.dx})) {
          fits = false;
          break;
        }
      if (fits)
        for (const Offset& o : se.offsets()) out.insert({tr + o.dy, tc + o.dx});
    }
  return out;
}

}  // namespace mdgi::testing
