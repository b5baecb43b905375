#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mdgi_cli/cli.hpp"

namespace mdgi::cli {

template <class T>
struct Outcome {
  std::filesystem::path input;
  std::string id;
  std::optional<T> value;
  std::string error;  // set iff !value
};

/// Runs `work(path, id)` for every input on up to `jobs` threads. Results keep
/// the input order; an exception fails only its own file.
template <class T, class Work>
std::vector<Outcome<T>> run_batch(const std::vector<std::filesystem::path>& inputs,
                                  std::size_t jobs, Work work) {
  std::vector<Outcome<T>> results(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    results[i].input = inputs[i];
    results[i].id = input_id(inputs[i]);
    if (i > 0 && results[i].id == results[i - 1].id)
      results[i].error = "duplicate id '" + results[i].id + "' (also " +
                         inputs[i - 1].string() + ")";
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < results.size();) {
      auto& r = results[i];
      if (!r.error.empty()) continue;
      try {
        r.value = work(r.input, r.id);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  const std::size_t n = std::min(jobs, std::max<std::size_t>(inputs.size(), 1));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return results;
}

nlohmann::ordered_json metadata(const RunConfig& config);

/// Creates parent directories; throws Error when the file cannot be opened.
std::ofstream open_output(const std::filesystem::path& path);

/// Writes <out_dir>/errors.csv (input,message) and one stderr line per failure.
/// Returns the number of failures.
template <class T>
std::size_t report_errors(const RunConfig& config, const std::vector<Outcome<T>>& results,
                          std::ostream& err);

std::size_t write_errors(const RunConfig& config,
                         const std::vector<std::pair<std::string, std::string>>& failures,
                         std::ostream& err);

template <class T>
std::size_t report_errors(const RunConfig& config, const std::vector<Outcome<T>>& results,
                          std::ostream& err) {
  std::vector<std::pair<std::string, std::string>> failures;
  for (const auto& r : results)
    if (!r.value) failures.emplace_back(r.input.string(), r.error);
  return write_errors(config, failures, err);
}

}  // namespace mdgi::cli
