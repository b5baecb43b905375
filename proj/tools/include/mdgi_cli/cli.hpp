#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mdgi/dem.hpp"
#include "mdgi/features.hpp"
#include "mdgi/morphology.hpp"
#include "mdgi/spectrum.hpp"

namespace mdgi::cli {

enum class Format { kCsv, kJson };

struct RunConfig {
  /// Files, directories (their .asc/.csv entries) or filename globs.
  std::vector<std::string> inputs;
  std::vector<NamedSe> ses{kAllNamedSes.begin(), kAllNamedSes.end()};
  /// Unset: values must already be positive integers.
  std::optional<double> step;
  double datum = 0.0;
  std::filesystem::path out_dir = ".";
  Format format = Format::kCsv;
  std::size_t jobs = 1;
  bool oracle_check = false;

  // oracle-check
  std::uint64_t max_work = 1'000'000;  // cells * levels
  std::optional<std::size_t> corrupt_at;

  // features
  std::filesystem::path labels;

  // train-tree / classify
  std::filesystem::path features;
  std::filesystem::path tree;
  std::string label_column = "label";
  std::size_t max_depth = 2;
};

/// Throws InvalidArgument on step <= 0, jobs == 0, an empty direction set, or
/// (when `need_inputs`) no inputs.
void validate(const RunConfig& config, bool need_inputs);

std::optional<Quantization> quantization_of(const RunConfig& config);

/// Expands directories and globs, drops duplicates and sorts. Literal paths are
/// kept even when missing so that the failure is reported per file.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& inputs);

/// File stem; used as the row id and output file prefix.
std::string input_id(const std::filesystem::path& path);

// Formatting -----------------------------------------------------------------

/// loss / total written unreduced ("6/16"), or "0".
std::string format_probability(std::uint64_t loss, std::uint64_t total);
/// 6 significant digits.
std::string format_real(double value);
/// Quotes a CSV field when needed.
std::string csv_field(const std::string& value);

/// One CSV line per scale: n,volume,p_n.
void write_spectrum_csv(std::ostream& out, const PatternSpectrum& ps);

/// id, GI_B1..GI_B4, GI_B, Z1..Z4, X0..X15, degenerate, high, low[, label]
std::string features_header(bool with_label);
std::string features_row(const FeatureRecord& record, bool with_label);

/// Parses a features CSV as written by features_row(). Labels are read from
/// `label_column` when it is non-empty and present. Throws ParseError.
std::vector<FeatureRecord> read_features_csv(std::istream& in, const std::string& label_column,
                                             bool require_label);

/// Two-column CSV (id,label) with a header line. Throws ParseError.
std::vector<std::pair<std::string, std::string>> read_labels_csv(std::istream& in);

// Commands -------------------------------------------------------------------
// Each returns the process exit code: 0 on success, 1 when any input failed.

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_features(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_train_tree(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_gen_fixtures(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line, argv[0] included. Usage errors return 2.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mdgi::cli
