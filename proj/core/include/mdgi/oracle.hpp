#pragma once

// Graph-based reformulation of the directional granulometries: each scan line
// is a node-weighted chain graph, thresholding it gives maximally connected
// subsets (runs), and run counts determine the pattern spectrum. This path
// shares no code with the morphological operators and is used to check them.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdgi/dem.hpp"
#include "mdgi/rational.hpp"
#include "mdgi/spectrum.hpp"

namespace mdgi::oracle {

struct GraphNode {
  Cell cell;
  Elevation weight = 0;
};

/// Node-weighted graph of one scan line; edges join lattice-consecutive
/// domain cells.
struct ScanGraph {
  Direction direction = Direction::kRow;
  std::size_t line = 0;
  std::vector<GraphNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

std::vector<ScanGraph> scan_graphs(const Dem& dem, Direction direction);

/// Subgraph induced by the nodes with weight >= h. Throws InvalidArgument for h < 1.
ScanGraph upper_threshold(const ScanGraph& graph, Elevation h);

/// Node index sets of the connected components, ordered by smallest member.
std::vector<std::vector<std::size_t>> maximally_connected_subsets(const ScanGraph& graph);

/// (line, h, t) -> number of maximally connected subsets of size t at threshold h.
class RunTable {
 public:
  using Key = std::tuple<std::size_t, Elevation, std::size_t>;

  RunTable(Direction direction, std::map<Key, std::uint64_t> counts);

  Direction direction() const noexcept { return direction_; }
  const std::map<Key, std::uint64_t>& entries() const noexcept { return counts_; }
  std::uint64_t count(std::size_t line, Elevation h, std::size_t t) const;
  /// sum over lines of n_{t,h}^(i)
  std::uint64_t marginal(std::size_t t, Elevation h) const;
  /// sum over t of t * n_{t,h}^(i): cells on line i with elevation >= h.
  std::uint64_t covered(std::size_t line, Elevation h) const;
  /// sum over lines, h and t of t * n: the DEM volume.
  std::uint64_t total_volume() const;

  friend bool operator==(const RunTable& a, const RunTable& b) {
    return a.direction_ == b.direction_ && a.counts_ == b.counts_;
  }

 private:
  Direction direction_;
  std::map<Key, std::uint64_t> counts_;
};

/// Thresholds every scan graph at h = 1 .. max(H) and counts components by size.
RunTable run_table(const Dem& dem, Direction direction);

/// CSV with header direction,line,h,t,count.
void write_run_table_csv(std::ostream& out, const RunTable& table);

enum class RunFamily { kLine, kHomothetic };

/// Spectrum from run counts. kLine gives q_k for L_k (k >= 1); kHomothetic
/// gives p_n for nSE with 2n + 1 cells, a run of length t being removed first
/// at n = floor((t - 1) / 2) + 1. Throws InvalidArgument when the table was
/// built along a different direction than `se_direction`.
PatternSpectrum spectrum_from_runs(const RunTable& table, RunFamily family, Direction se_direction);

struct UnipeakCheck {
  bool unipeak = false;
  std::string reason;
};

/// True iff the DEM is a single interval on one row and every occupied level
/// h in f(A) has exactly one run.
UnipeakCheck is_unipeak(const Dem& dem);

/// Both sides of the uni-peak comparison. Multisets are sorted ascending and
/// hold only nonzero values.
struct UnipeakComparison {
  std::vector<Rational> derivative_probs;  // (Phi_h - Phi_{h+1}) / V
  std::vector<Rational> spectrum_probs;    // nonzero q_k of the L family
  double derivative_entropy = 0.0;
  double gi_line = 0.0;

  bool multisets_equal() const { return derivative_probs == spectrum_probs; }
  /// The run lengths seen at the levels 1 .. max(H) are pairwise distinct.
  bool distinct_level_lengths = false;
};

/// Throws InvalidArgument if the DEM is not uni-peak.
UnipeakComparison unipeak_entropy_equivalence(const Dem& dem);

/// All 2^rows subset reflections of the rows that hold domain cells, in
/// subset-bitmask order (member 0 is the input). Throws InvalidArgument when a
/// row is not an interval or the row count exceeds `max_rows`.
std::vector<Dem> reflection_family(const Dem& dem, std::size_t max_rows = 16);

/// Run tables along `direction` are identical entry by entry.
bool run_profile_equal(const Dem& a, const Dem& b, Direction direction);

}  // namespace mdgi::oracle
