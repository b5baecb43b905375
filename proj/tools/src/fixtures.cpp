#include <algorithm>
#include <cstdlib>
#include <ostream>

#include "batch.hpp"
#include "mdgi/io.hpp"
#include "mdgi/oracle.hpp"

namespace mdgi::cli {
namespace {

using Rows = std::vector<std::vector<std::optional<Elevation>>>;
constexpr std::nullopt_t _ = std::nullopt;

struct Fixture {
  std::string name;
  std::string description;
  Dem dem;
};

Dem row(std::initializer_list<Elevation> v) {
  std::vector<std::optional<Elevation>> r(v.begin(), v.end());
  return Dem::from_rows({r});
}

std::vector<Fixture> fixtures() {
  std::vector<Fixture> f;
  const Dem base = row({2, 5, 5, 2, 2});
  f.push_back({"row_25522", "single row; B4 volumes 16,10,10,0", base});
  for (std::uint64_t k : {2, 3, 7})
    f.push_back({"row_25522_x" + std::to_string(k), "row_25522 with heights times " + std::to_string(k),
                 scale_heights(base, k)});
  f.push_back({"row_121", "single row peak", row({1, 2, 1})});
  f.push_back({"unipeak_12321", "uni-peak row with distinct run lengths", row({1, 2, 3, 2, 1})});
  f.push_back({"unipeak_constant_1", "constant row at level 1", row({1, 1, 1, 1})});
  f.push_back({"runpair_a", "same row runs as runpair_b, not a reflection of it", row({2, 1, 3, 3, 1})});
  f.push_back({"runpair_b", "same row runs as runpair_a, not a reflection of it", row({3, 3, 1, 2, 1})});
  f.push_back({"flat_3x3", "flat surface; every GI is 0", Dem::from_rows({{4, 4, 4}, {4, 4, 4}, {4, 4, 4}})});
  f.push_back({"masked_4x5", "masked 4x5 DEM with holes, volume 46",
               Dem::from_rows(Rows{{1, 2, 3, _, 1}, {2, 4, 5, 3, _}, {_, 3, 8, 5, 1}, {1, 2, _, 3, 2}})});
  std::vector<std::optional<Elevation>> pyramid(81), ridges(81);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) {
      pyramid[r * 9 + c] = Elevation(5 - std::max(std::abs(r - 4), std::abs(c - 4)));
      ridges[r * 9 + c] = Elevation(1 + (r % 4 < 2 ? 2 : 0) + c / 3);
    }
  f.push_back({"pyramid_9x9", "stepped square pyramid, levels 1..5", Dem::from_cells(9, 9, pyramid)});
  f.push_back({"ridges_9x9", "east-west ridges on a west-east ramp", Dem::from_cells(9, 9, ridges)});
  const Dem refl = Dem::from_rows(Rows{{_, 1, 3, 2, _}, {2, 4, 1, 1, 3}, {_, _, 5, 2, 1}});
  const auto family = oracle::reflection_family(refl);
  for (std::size_t m = 0; m < family.size(); ++m)
    f.push_back({"reflection_m" + std::to_string(m),
                 "interval-row DEM with rows mirrored by bitmask " + std::to_string(m), family[m]});
  return f;
}

}  // namespace

int cmd_gen_fixtures(const RunConfig& config, std::ostream& out, std::ostream&) {
  validate(config, false);
  nlohmann::ordered_json manifest = nlohmann::ordered_json::array();
  std::size_t written = 0;
  const auto all = fixtures();
  for (const auto& fx : all) {
    const std::string file = fx.name + ".csv";
    auto csv = open_output(config.out_dir / file);
    write_fixture_csv(csv, fx.dem);
    manifest.push_back({{"name", fx.name}, {"file", file}, {"description", fx.description}});
    ++written;
  }
  // one ESRI grid so both readers get exercised
  auto asc = open_output(config.out_dir / "masked_4x5_grid.asc");
  write_esri_ascii(asc, std::find_if(all.begin(), all.end(), [](const Fixture& fx) {
                          return fx.name == "masked_4x5";
                        })->dem);
  manifest.push_back({{"name", "masked_4x5_grid"},
                      {"file", "masked_4x5_grid.asc"},
                      {"description", "masked_4x5 as an ESRI ASCII grid"}});
  nlohmann::ordered_json doc;
  doc["metadata"] = metadata(config);
  doc["fixtures"] = manifest;
  open_output(config.out_dir / "fixtures.json") << doc.dump(2) << '\n';
  out << "gen-fixtures: " << written + 1 << " files written to " << config.out_dir.string() << '\n';
  return 0;
}

}  // namespace mdgi::cli
