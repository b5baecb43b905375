#include "mdgi/features.hpp"

#include <algorithm>
#include <numeric>

namespace mdgi {

FeatureRecord normalized_mdgi(const Dem& dem, SpectrumEngine engine) {
  FeatureRecord rec;
  for (std::size_t i = 0; i < kAllNamedSes.size(); ++i)
    rec.gi[i] = granulometric_index(pattern_spectrum(dem, kAllNamedSes[i], engine));
  const double gi_b = rec.gi[4];
  rec.degenerate = !(gi_b > 0.0);
  for (std::size_t i = 0; i < 4; ++i) rec.z[i] = rec.degenerate ? 0.0 : rec.gi[i] / gi_b;
  return rec;
}

FeatureVector order_stat_features(const std::array<double, 4>& z) {
  std::array<std::size_t, 4> order{};
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return z[a] < z[b]; });
  FeatureVector x{};
  for (std::size_t rank = 0; rank < 4; ++rank) {
    const std::size_t i = order[rank];
    x[i * 4 + rank] = z[i];
  }
  return x;
}

DirectionalExtremes high_low_direction(const std::array<double, 4>& z) {
  std::size_t hi = 0, lo = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (z[i] > z[hi]) hi = i;
    if (z[i] < z[lo]) lo = i;
  }
  return {kAllNamedSes[hi], kAllNamedSes[lo]};
}

FeatureRecord feature_record(const Dem& dem, std::string id, SpectrumEngine engine) {
  FeatureRecord rec = normalized_mdgi(dem, engine);
  rec.id = std::move(id);
  rec.x = order_stat_features(rec.z);
  return rec;
}

}  // namespace mdgi
