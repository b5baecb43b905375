#include <fnmatch.h>

#include <algorithm>
#include <set>

#include "mdgi/error.hpp"
#include "mdgi_cli/cli.hpp"

namespace fs = std::filesystem;

namespace mdgi::cli {

void validate(const RunConfig& config, bool need_inputs) {
  if (config.step && !(*config.step > 0)) throw InvalidArgument("step must be > 0");
  if (config.jobs == 0) throw InvalidArgument("jobs must be >= 1");
  if (config.ses.empty()) throw InvalidArgument("no structuring elements selected");
  if (need_inputs && config.inputs.empty()) throw InvalidArgument("no inputs given");
}

std::optional<Quantization> quantization_of(const RunConfig& config) {
  if (!config.step) return std::nullopt;
  return Quantization{*config.step, config.datum};
}

namespace {

bool dem_extension(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".asc" || ext == ".csv";
}

bool has_wildcard(const std::string& s) { return s.find_first_of("*?[") != std::string::npos; }

}  // namespace

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::set<fs::path> found;
  for (const auto& input : inputs) {
    const fs::path p(input);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && dem_extension(entry.path())) found.insert(entry.path());
      continue;
    }
    const std::string name = p.filename().string();
    if (!has_wildcard(name)) {
      found.insert(p);
      continue;
    }
    // only the last component may hold wildcards
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(dir, ec)) {
      found.insert(p);
      continue;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string candidate = entry.path().filename().string();
      if (entry.is_regular_file() && fnmatch(name.c_str(), candidate.c_str(), 0) == 0)
        found.insert(p.has_parent_path() ? entry.path() : fs::path(candidate));
    }
  }
  std::vector<fs::path> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return input_id(a) < input_id(b);
  });
  return out;
}

std::string input_id(const fs::path& path) { return path.stem().string(); }

}  // namespace mdgi::cli
