#include "batch.hpp"

#include <ostream>

#include "mdgi/error.hpp"

namespace mdgi::cli {

nlohmann::ordered_json metadata(const RunConfig& config) {
  nlohmann::ordered_json q;
  if (config.step) {
    q["mode"] = "step";
    q["step"] = *config.step;
    q["datum"] = config.datum;
  } else {
    q["mode"] = "exact";
  }
  nlohmann::ordered_json m;
  m["tool"] = "mdgi";
  m["version"] = "0.1.0";
  m["pad_convention"] = "zero";
  m["log_base"] = "e";
  m["quantization"] = q;
  return m;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::size_t write_errors(const RunConfig& config,
                         const std::vector<std::pair<std::string, std::string>>& failures,
                         std::ostream& err) {
  auto out = open_output(config.out_dir / "errors.csv");
  out << "input,message\n";
  for (const auto& [input, message] : failures) {
    out << csv_field(input) << ',' << csv_field(message) << '\n';
    err << "mdgi: " << input << ": " << message << '\n';
  }
  return failures.size();
}

}  // namespace mdgi::cli
