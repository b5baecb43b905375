#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include "mdgi/dem.hpp"
#include "mdgi/morphology.hpp"
#include "mdgi/spectrum.hpp"

namespace mdgi {

inline constexpr std::size_t kFeatureCount = 16;
using FeatureVector = std::array<double, kFeatureCount>;

/// Per-watershed roughness features.
struct FeatureRecord {
  std::string id;
  /// GI for B1, B2, B3, B4, B (in that order).
  std::array<double, 5> gi{};
  /// Z_i = GI_{B_i} / GI_B, i = 1..4.
  std::array<double, 4> z{};
  /// Set when GI_B = 0; z is then all zero.
  bool degenerate = false;
  FeatureVector x{};
  std::optional<std::string> label;
};

/// GI for the five named elements and the normalized Z values. Throws
/// InvalidArgument on a zero-volume DEM.
FeatureRecord normalized_mdgi(const Dem& dem, SpectrumEngine engine = SpectrumEngine::kFast);

/// X[(i-1)*4 + (j-1)] = Z_i where j is the rank of Z_i (1 = smallest); ties
/// are ranked by ascending element index. Other entries are 0.
FeatureVector order_stat_features(const std::array<double, 4>& z);

/// Elements with the largest and smallest Z; ties go to the lower index.
struct DirectionalExtremes {
  NamedSe high;
  NamedSe low;
};
DirectionalExtremes high_low_direction(const std::array<double, 4>& z);

/// normalized_mdgi() plus order_stat_features().
FeatureRecord feature_record(const Dem& dem, std::string id,
                             SpectrumEngine engine = SpectrumEngine::kFast);

}  // namespace mdgi
