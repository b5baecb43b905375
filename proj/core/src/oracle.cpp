#include "mdgi/oracle.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "mdgi/error.hpp"

namespace mdgi::oracle {

std::vector<ScanGraph> scan_graphs(const Dem& dem, Direction direction) {
  std::vector<ScanGraph> graphs;
  for (const ScanLine& line : scan_lines(dem, direction)) {
    ScanGraph g{direction, line.index, {}, {}};
    const LatticeStep step = step_of(direction);
    for (const Segment& seg : line.segments) {
      for (std::size_t k = 0; k < seg.values.size(); ++k) {
        const Cell cell{seg.start.row + k * static_cast<std::size_t>(step.drow),
                        static_cast<std::size_t>(static_cast<std::ptrdiff_t>(seg.start.col) +
                                                 static_cast<std::ptrdiff_t>(k) * step.dcol)};
        if (k > 0) g.edges.emplace_back(g.nodes.size() - 1, g.nodes.size());
        g.nodes.push_back({cell, seg.values[k]});
      }
    }
    graphs.push_back(std::move(g));
  }
  return graphs;
}

ScanGraph upper_threshold(const ScanGraph& graph, Elevation h) {
  if (h < 1) throw InvalidArgument("threshold level must be >= 1");
  ScanGraph out{graph.direction, graph.line, {}, {}};
  std::vector<std::size_t> remap(graph.nodes.size(), graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].weight < h) continue;
    remap[i] = out.nodes.size();
    out.nodes.push_back(graph.nodes[i]);
  }
  for (const auto& [a, b] : graph.edges)
    if (remap[a] != graph.nodes.size() && remap[b] != graph.nodes.size())
      out.edges.emplace_back(remap[a], remap[b]);
  return out;
}

std::vector<std::vector<std::size_t>> maximally_connected_subsets(const ScanGraph& graph) {
  std::vector<std::vector<std::size_t>> adjacency(graph.nodes.size());
  for (const auto& [a, b] : graph.edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  std::vector<bool> seen(graph.nodes.size(), false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t s = 0; s < graph.nodes.size(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> component{s};
    seen[s] = true;
    for (std::size_t k = 0; k < component.size(); ++k)
      for (std::size_t next : adjacency[component[k]])
        if (!seen[next]) {
          seen[next] = true;
          component.push_back(next);
        }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

RunTable::RunTable(Direction direction, std::map<Key, std::uint64_t> counts)
    : direction_(direction), counts_(std::move(counts)) {}

std::uint64_t RunTable::count(std::size_t line, Elevation h, std::size_t t) const {
  auto it = counts_.find({line, h, t});
  return it == counts_.end() ? 0 : it->second;
}

std::uint64_t RunTable::marginal(std::size_t t, Elevation h) const {
  std::uint64_t sum = 0;
  for (const auto& [key, n] : counts_)
    if (std::get<1>(key) == h && std::get<2>(key) == t) sum += n;
  return sum;
}

std::uint64_t RunTable::covered(std::size_t line, Elevation h) const {
  std::uint64_t sum = 0;
  for (const auto& [key, n] : counts_)
    if (std::get<0>(key) == line && std::get<1>(key) == h) sum += std::get<2>(key) * n;
  return sum;
}

std::uint64_t RunTable::total_volume() const {
  std::uint64_t sum = 0;
  for (const auto& [key, n] : counts_) sum += std::get<2>(key) * n;
  return sum;
}

RunTable run_table(const Dem& dem, Direction direction) {
  std::map<RunTable::Key, std::uint64_t> counts;
  for (const ScanGraph& graph : scan_graphs(dem, direction)) {
    for (Elevation h = 1; h <= dem.max_elevation(); ++h) {
      for (const auto& component : maximally_connected_subsets(upper_threshold(graph, h)))
        ++counts[{graph.line, h, component.size()}];
    }
  }
  return RunTable(direction, std::move(counts));
}

void write_run_table_csv(std::ostream& out, const RunTable& table) {
  out << "direction,line,h,t,count\n";
  for (const auto& [key, n] : table.entries())
    out << to_string(table.direction()) << ',' << std::get<0>(key) << ',' << std::get<1>(key)
        << ',' << std::get<2>(key) << ',' << n << '\n';
}

PatternSpectrum spectrum_from_runs(const RunTable& table, RunFamily family,
                                   Direction se_direction) {
  if (table.direction() != se_direction)
    throw InvalidArgument("run table direction " + std::string(to_string(table.direction())) +
                          " does not match element direction " +
                          std::string(to_string(se_direction)));
  // by_length[t] = sum over lines and levels of n_{t,h}
  std::vector<std::uint64_t> by_length(1, 0);
  for (const auto& [key, n] : table.entries()) {
    const std::size_t t = std::get<2>(key);
    if (by_length.size() <= t) by_length.resize(t + 1, 0);
    by_length[t] += n;
  }
  const std::size_t longest = by_length.size() - 1;
  auto volume_from = [&](std::size_t min_length) {
    std::uint64_t v = 0;
    for (std::size_t t = min_length; t <= longest; ++t) v += t * by_length[t];
    return v;
  };

  PatternSpectrum ps;
  ps.se_name = std::string(family == RunFamily::kLine ? "runs/L/" : "runs/nSE/") +
               std::string(to_string(se_direction));
  if (family == RunFamily::kLine) {
    ps.family = ScaleFamily::kLine;
    ps.first_scale = 1;
    for (std::size_t k = 1; k <= longest + 1; ++k) ps.volumes.push_back(volume_from(k));
  } else {
    ps.family = ScaleFamily::kHomothetic;
    ps.first_scale = 0;
    for (std::size_t n = 0; 2 * n + 1 <= longest + 2; ++n) {
      ps.volumes.push_back(volume_from(2 * n + 1));
      if (ps.volumes.back() == 0) break;
    }
  }
  if (ps.total_volume() == 0) throw InvalidArgument("run table has zero volume");
  return ps;
}

UnipeakCheck is_unipeak(const Dem& dem) {
  const auto lines = scan_lines(dem, Direction::kRow);
  if (lines.size() != 1) return {false, "domain spans " + std::to_string(lines.size()) + " rows"};
  if (lines.front().segments.size() != 1)
    return {false, "row has " + std::to_string(lines.front().segments.size()) + " segments"};
  const ScanGraph graph = scan_graphs(dem, Direction::kRow).front();
  std::set<Elevation> occupied;
  for (const GraphNode& node : graph.nodes) occupied.insert(node.weight);
  for (Elevation h : occupied) {
    const std::size_t runs = maximally_connected_subsets(upper_threshold(graph, h)).size();
    if (runs != 1)
      return {false, std::to_string(runs) + " runs at level " + std::to_string(h)};
  }
  return {true, {}};
}

UnipeakComparison unipeak_entropy_equivalence(const Dem& dem) {
  const UnipeakCheck check = is_unipeak(dem);
  if (!check.unipeak) throw InvalidArgument("not a uni-peak DEM: " + check.reason);

  const RunTable table = run_table(dem, Direction::kRow);
  const std::size_t line = table.entries().begin() != table.entries().end()
                               ? std::get<0>(table.entries().begin()->first)
                               : 0;
  const auto total = static_cast<std::int64_t>(table.total_volume());

  UnipeakComparison cmp;
  std::vector<std::uint64_t> lengths;
  for (Elevation h = 1; h <= dem.max_elevation(); ++h) {
    const std::uint64_t d = table.covered(line, h);  // Phi_h - Phi_{h+1}
    lengths.push_back(d);
    if (d != 0) cmp.derivative_probs.emplace_back(static_cast<std::int64_t>(d), total);
  }
  std::sort(lengths.begin(), lengths.end());
  cmp.distinct_level_lengths = std::adjacent_find(lengths.begin(), lengths.end()) == lengths.end();

  const PatternSpectrum spectrum =
      line_pattern_spectrum(dem, Direction::kRow, SpectrumEngine::kOpenings);
  for (const Rational& q : spectrum.probs())
    if (q.numerator() != 0) cmp.spectrum_probs.push_back(q);

  std::sort(cmp.derivative_probs.begin(), cmp.derivative_probs.end());
  std::sort(cmp.spectrum_probs.begin(), cmp.spectrum_probs.end());
  cmp.derivative_entropy = entropy(cmp.derivative_probs);
  cmp.gi_line = granulometric_index(spectrum);
  return cmp;
}

std::vector<Dem> reflection_family(const Dem& dem, std::size_t max_rows) {
  std::vector<std::size_t> rows;
  for (const ScanLine& line : scan_lines(dem, Direction::kRow)) {
    if (line.segments.size() != 1)
      throw InvalidArgument("row " + std::to_string(line.index) + " is not an interval");
    rows.push_back(line.index);
  }
  if (rows.size() > max_rows)
    throw InvalidArgument("reflection family of " + std::to_string(rows.size()) +
                          " rows exceeds the cap of " + std::to_string(max_rows));
  std::vector<Dem> family;
  family.reserve(std::size_t{1} << rows.size());
  for (std::size_t bits = 0; bits < (std::size_t{1} << rows.size()); ++bits) {
    std::vector<std::size_t> subset;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (bits & (std::size_t{1} << k)) subset.push_back(rows[k]);
    family.push_back(reflect_rows(dem, subset));
  }
  return family;
}

bool run_profile_equal(const Dem& a, const Dem& b, Direction direction) {
  return run_table(a, direction) == run_table(b, direction);
}

}  // namespace mdgi::oracle
