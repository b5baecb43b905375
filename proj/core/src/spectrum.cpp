#include "mdgi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>

#include "mdgi/error.hpp"
#include "square_granulometry.hpp"

namespace mdgi {

Rational PatternSpectrum::prob(std::size_t i) const {
  return Rational(static_cast<std::int64_t>(loss(i)), static_cast<std::int64_t>(total_volume()));
}

std::vector<Rational> PatternSpectrum::probs() const {
  std::vector<Rational> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(prob(i));
  return out;
}

bool same_probabilities(const PatternSpectrum& a, const PatternSpectrum& b) {
  return a.family == b.family && a.first_scale == b.first_scale && a.probs() == b.probs();
}

namespace {

void require_positive_volume(const Dem& dem) {
  if (volume(dem) == 0) throw InvalidArgument("pattern spectrum of a zero-volume DEM");
}

/// sum_{u >= t} u * hist[u] for every t, with one trailing zero.
std::vector<std::uint64_t> tail_volumes(const std::vector<std::uint64_t>& hist) {
  std::vector<std::uint64_t> tail(hist.size() + 1, 0);
  for (std::size_t t = hist.size(); t-- > 1;) tail[t] = tail[t + 1] + t * hist[t];
  return tail;
}

/// Volumes at lengths first, first + stride, ... up to and including the first 0.
std::vector<std::uint64_t> sample_tail(const std::vector<std::uint64_t>& tail, std::size_t first,
                                       std::size_t stride) {
  std::vector<std::uint64_t> volumes;
  for (std::size_t len = first;; len += stride) {
    const std::uint64_t v = len < tail.size() ? tail[len] : 0;
    volumes.push_back(v);
    if (v == 0) break;
  }
  return volumes;
}

std::string describe(const StructuringElement& se) {
  for (NamedSe named : kAllNamedSes)
    if (named_se(named) == se) return std::string(to_string(named));
  return "custom(" + std::to_string(se.size()) + ")";
}

std::vector<std::uint64_t> volumes_by_openings(const Dem& dem, const StructuringElement& se) {
  std::vector<std::uint64_t> volumes{volume(dem)};
  for (std::size_t n = 1; volumes.back() != 0; ++n)
    volumes.push_back(volume(multiscale_open(dem, se, n)));
  return volumes;
}

}  // namespace

std::vector<std::uint64_t> run_length_histogram(const Dem& dem, Direction direction) {
  const LatticeStep step = step_of(direction);
  std::vector<std::uint64_t> hist(1, 0);
  struct Level {
    Elevation height;
    std::size_t start;
  };
  std::vector<Level> stack;
  for (const LatticeLine& line : lattice_lines(dem.width(), dem.height(), direction)) {
    stack.clear();
    const auto* base = dem.values().data() + line.start.row * dem.width() + line.start.col;
    const std::ptrdiff_t stride = step.drow * static_cast<std::ptrdiff_t>(dem.width()) + step.dcol;
    for (std::size_t i = 0; i <= line.length; ++i) {
      // Masked cells read 0 and close every open run, as does the line end.
      const Elevation v = i < line.length ? base[static_cast<std::ptrdiff_t>(i) * stride] : 0;
      std::size_t start = i;
      while (!stack.empty() && stack.back().height > v) {
        const Level top = stack.back();
        stack.pop_back();
        const Elevation floor = std::max(v, stack.empty() ? Elevation{0} : stack.back().height);
        const std::size_t length = i - top.start;
        if (hist.size() <= length) hist.resize(length + 1, 0);
        // Thresholds floor+1 .. top.height all see this run with the same length.
        hist[length] += top.height - floor;
        start = top.start;
      }
      if (v > 0 && (stack.empty() || stack.back().height < v)) stack.push_back({v, start});
    }
  }
  return hist;
}

std::vector<std::uint64_t> square_granulometry_volumes(const Dem& dem) {
  return detail::square_volumes(dem);
}

PatternSpectrum pattern_spectrum(const Dem& dem, const StructuringElement& se,
                                 SpectrumEngine engine) {
  if (se.size() == 1) throw InvalidArgument("the origin alone never empties the DEM");
  require_positive_volume(dem);
  PatternSpectrum ps;
  ps.se_name = describe(se);
  ps.family = ScaleFamily::kHomothetic;
  ps.first_scale = 0;
  const Shape shape = recognize(se);
  if (engine == SpectrumEngine::kFast) {
    if (const auto* line = std::get_if<LineShape>(&shape)) {
      ps.volumes = sample_tail(tail_volumes(run_length_histogram(dem, line->direction)), 1,
                               2 * line->half_length);
      return ps;
    }
    if (const auto* square = std::get_if<SquareShape>(&shape)) {
      const std::vector<std::uint64_t> base = square_granulometry_volumes(dem);
      for (std::size_t n = 0;; ++n) {
        const std::size_t at = n * square->half_size;
        ps.volumes.push_back(at < base.size() ? base[at] : 0);
        if (ps.volumes.back() == 0) break;
      }
      return ps;
    }
  }
  ps.volumes = volumes_by_openings(dem, se);
  return ps;
}

PatternSpectrum pattern_spectrum(const Dem& dem, NamedSe se, SpectrumEngine engine) {
  return pattern_spectrum(dem, named_se(se), engine);
}

PatternSpectrum line_pattern_spectrum(const Dem& dem, Direction direction, SpectrumEngine engine) {
  require_positive_volume(dem);
  PatternSpectrum ps;
  ps.se_name = "L/" + std::string(to_string(direction));
  ps.family = ScaleFamily::kLine;
  ps.first_scale = 1;
  if (engine == SpectrumEngine::kFast) {
    ps.volumes = sample_tail(tail_volumes(run_length_histogram(dem, direction)), 1, 1);
    return ps;
  }
  ps.volumes.push_back(volume(dem));
  for (std::size_t k = 2; ps.volumes.back() != 0; ++k)
    ps.volumes.push_back(volume(open_line(dem, direction, k)));
  return ps;
}

double entropy(const std::vector<Rational>& probs) {
  double h = 0.0;
  for (const Rational& p : probs) {
    if (p.numerator() == 0) continue;
    const double x = to_double(p);
    h -= x * std::log(x);
  }
  return h;
}

double granulometric_index(const PatternSpectrum& ps) { return entropy(ps.probs()); }

std::uint64_t volume_above(const Dem& dem, Elevation h0) {
  if (h0 < 1) throw InvalidArgument("threshold level must be >= 1");
  std::uint64_t sum = 0;
  for (Elevation v : dem.values())
    if (v >= h0) sum += v - h0 + 1;
  return sum;
}

std::vector<std::uint64_t> discrete_volume_derivative(const Dem& dem) {
  std::vector<std::uint64_t> counts(dem.max_elevation() + std::size_t{1}, 0);
  for (std::size_t i = 0; i < dem.values().size(); ++i)
    if (dem.mask()[i]) ++counts[dem.values()[i]];
  // Suffix sums give the number of cells at or above each level.
  std::vector<std::uint64_t> derivative(dem.max_elevation(), 0);
  std::uint64_t above = 0;
  for (std::size_t h = dem.max_elevation(); h >= 1; --h) {
    above += counts[h];
    derivative[h - 1] = above;
  }
  return derivative;
}

}  // namespace mdgi
