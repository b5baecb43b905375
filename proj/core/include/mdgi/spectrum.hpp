#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mdgi/dem.hpp"
#include "mdgi/morphology.hpp"
#include "mdgi/rational.hpp"

namespace mdgi {

/// How scales are indexed.
///   kHomothetic : n = 0, 1, 2, ... with openings by nSE (nB_l has 2n + 1 cells).
///   kLine       : k = 1, 2, 3, ... with openings by the segment L_k.
enum class ScaleFamily { kHomothetic, kLine };

/// Volumes of a granulometry and the exact pattern spectrum they induce.
///
/// volumes[i] is the volume after opening at scale first_scale + i; the last
/// entry is the terminal volume 0 and no earlier entry is 0. The probability at
/// scale first_scale + i is (volumes[i] - volumes[i + 1]) / volumes[0].
struct PatternSpectrum {
  std::string se_name;
  ScaleFamily family = ScaleFamily::kHomothetic;
  std::size_t first_scale = 0;
  std::vector<std::uint64_t> volumes;

  /// Number of probabilities; for kHomothetic this is N0.
  std::size_t size() const noexcept { return volumes.empty() ? 0 : volumes.size() - 1; }
  std::uint64_t total_volume() const noexcept { return volumes.empty() ? 0 : volumes.front(); }
  std::uint64_t loss(std::size_t i) const { return volumes.at(i) - volumes.at(i + 1); }
  Rational prob(std::size_t i) const;
  std::vector<Rational> probs() const;
};

/// Exact-equality of the probability vectors (ignores names and volumes).
bool same_probabilities(const PatternSpectrum& a, const PatternSpectrum& b);

/// kOpenings evaluates multiscale_open at every scale until the volume is 0.
/// kFast gives identical volumes: one stack pass per scan line for linear
/// elements (all scales at once) and incremental erosion with separable
/// dilation for squares. Other shapes fall back to kOpenings.
enum class SpectrumEngine { kFast, kOpenings };

/// Homothetic pattern spectrum for any element other than the origin alone.
/// Throws InvalidArgument for a zero-volume DEM or se = {(0,0)}.
PatternSpectrum pattern_spectrum(const Dem& dem, const StructuringElement& se,
                                 SpectrumEngine engine = SpectrumEngine::kFast);
PatternSpectrum pattern_spectrum(const Dem& dem, NamedSe se,
                                 SpectrumEngine engine = SpectrumEngine::kFast);

/// Spectrum over the segment family {L_k : k >= 1} along `direction`.
PatternSpectrum line_pattern_spectrum(const Dem& dem, Direction direction,
                                      SpectrumEngine engine = SpectrumEngine::kFast);

/// Volumes V(f o nB) for n = 0 .. N0 via incremental erosion. Exposed for
/// benchmarks and tests; pattern_spectrum() uses it for squares.
std::vector<std::uint64_t> square_granulometry_volumes(const Dem& dem);

/// For each run length t >= 1, the number of (threshold, run) pairs with that
/// length along `direction`, i.e. sum over lines and h of n_{t,h}. Index 0 is unused.
std::vector<std::uint64_t> run_length_histogram(const Dem& dem, Direction direction);

/// -sum p ln p over nonzero probabilities (natural logarithm).
double granulometric_index(const PatternSpectrum& ps);
/// Entropy of an arbitrary exact distribution, natural logarithm.
double entropy(const std::vector<Rational>& probs);

/// Volume on and above level h0 >= 1: sum over cells of max(0, f - h0 + 1).
std::uint64_t volume_above(const Dem& dem, Elevation h0);

/// Phi_h - Phi_{h+1} = number of cells with f >= h, for h = 1 .. max(H).
/// Element h - 1 holds the value at level h.
std::vector<std::uint64_t> discrete_volume_derivative(const Dem& dem);

}  // namespace mdgi
