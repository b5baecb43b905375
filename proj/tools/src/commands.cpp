#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "batch.hpp"
#include "mdgi/classify.hpp"
#include "mdgi/error.hpp"
#include "mdgi/io.hpp"
#include "mdgi/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace mdgi::cli {
namespace {

double rounded(double v) { return std::stod(format_real(v)); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> prob_strings(const PatternSpectrum& ps) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ps.size(); ++i)
    out.push_back(format_probability(ps.loss(i), ps.total_volume()));
  return out;
}

std::uint64_t work_of(const Dem& dem) {
  return std::uint64_t(dem.cell_count()) * dem.max_elevation();
}

struct OracleRow {
  std::string id;
  std::string se;
  std::string family;
  std::string status;
  std::string first_diff;
  std::string detail;
};

std::vector<OracleRow> oracle_rows(const Dem& dem, const std::string& id, const RunConfig& config) {
  std::vector<OracleRow> rows;
  const bool capped = work_of(dem) > config.max_work;
  for (NamedSe se : config.ses) {
    if (se == NamedSe::kB) continue;  // the run path covers lines only
    const Direction d = direction_of(se);
    const std::string name(to_string(se));
    if (capped) {
      const std::string why = "cells*levels " + std::to_string(work_of(dem)) + " exceeds cap " +
                              std::to_string(config.max_work);
      rows.push_back({id, name, "homothetic", "SKIP", "", why});
      rows.push_back({id, name, "line", "SKIP", "", why});
      continue;
    }
    const oracle::RunTable table = oracle::run_table(dem, d);
    const std::pair<PatternSpectrum, PatternSpectrum> pairs[] = {
        {pattern_spectrum(dem, se), oracle::spectrum_from_runs(table, oracle::RunFamily::kHomothetic, d)},
        {line_pattern_spectrum(dem, d), oracle::spectrum_from_runs(table, oracle::RunFamily::kLine, d)},
    };
    for (const auto& [morph, runs] : pairs) {
      std::vector<Rational> a = morph.probs();
      const std::vector<Rational> b = runs.probs();
      if (config.corrupt_at) {
        // test hook: add one unit of volume at p-vector index *corrupt_at
        if (*config.corrupt_at >= a.size()) a.resize(*config.corrupt_at + 1, Rational(0));
        a[*config.corrupt_at] += Rational(1, static_cast<std::int64_t>(morph.total_volume()));
      }
      OracleRow row{id, name, morph.family == ScaleFamily::kLine ? "line" : "homothetic", "PASS", "", ""};
      if (a != b) {
        std::size_t i = 0;
        while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
        row.status = "FAIL";
        row.first_diff = std::to_string(i);
        row.detail = "morphology " + (i < a.size() ? to_string(a[i]) : std::string("none")) +
                     " vs runs " + (i < b.size() ? to_string(b[i]) : std::string("none"));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config, true);
  const auto inputs = expand_inputs(config.inputs);
  const auto q = quantization_of(config);
  fs::create_directories(config.out_dir);

  const auto results = run_batch<int>(inputs, config.jobs, [&](const fs::path& path, const std::string& id) {
    const Dem dem = load_dem(path, q);
    ordered_json summary;
    summary["id"] = id;
    summary["input"] = path.generic_string();
    summary["metadata"] = metadata(config);
    summary["width"] = dem.width();
    summary["height"] = dem.height();
    summary["cells"] = dem.cell_count();
    summary["volume"] = volume(dem);
    ordered_json spectra = ordered_json::object();
    for (NamedSe se : config.ses) {
      const PatternSpectrum ps = pattern_spectrum(dem, se);
      const std::string name(to_string(se));
      ordered_json entry;
      entry["n0"] = ps.size();
      entry["gi"] = rounded(granulometric_index(ps));
      if (config.format == Format::kCsv) {
        const std::string file = id + "." + name + ".csv";
        auto csv = open_output(config.out_dir / file);
        write_spectrum_csv(csv, ps);
        entry["csv"] = file;
      } else {
        entry["volumes"] = ps.volumes;
        entry["p"] = prob_strings(ps);
      }
      spectra[name] = entry;
    }
    summary["spectra"] = spectra;
    if (config.oracle_check) {
      ordered_json checks = ordered_json::array();
      for (const auto& r : oracle_rows(dem, id, config))
        checks.push_back({{"se", r.se}, {"family", r.family}, {"status", r.status},
                          {"first_diff", r.first_diff}, {"detail", r.detail}});
      summary["oracle_check"] = checks;
    }
    open_output(config.out_dir / (id + ".summary.json")) << dump(summary);
    int failed = 0;
    if (config.oracle_check)
      for (const auto& c : summary["oracle_check"]) failed += c["status"] == "FAIL";
    if (failed) throw Error("oracle check failed for " + std::to_string(failed) + " spectra");
    return 0;
  });

  const std::size_t failures = report_errors(config, results, err);
  out << "spectrum: " << inputs.size() - failures << " of " << inputs.size() << " inputs written to "
      << config.out_dir.string() << '\n';
  return failures ? 1 : 0;
}

int cmd_features(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config, true);
  const auto inputs = expand_inputs(config.inputs);
  const auto q = quantization_of(config);
  std::map<std::string, std::string> labels;
  if (!config.labels.empty()) {
    std::ifstream in(config.labels);
    if (!in) throw Error("cannot open " + config.labels.string());
    for (auto& [id, label] : read_labels_csv(in)) labels[id] = label;
  }
  fs::create_directories(config.out_dir);

  const auto results = run_batch<FeatureRecord>(inputs, config.jobs,
                                                [&](const fs::path& path, const std::string& id) {
    FeatureRecord r = feature_record(load_dem(path, q), id);
    if (auto it = labels.find(id); it != labels.end()) r.label = it->second;
    return r;
  });

  const bool with_label = !labels.empty();
  auto csv = open_output(config.out_dir / "features.csv");
  csv << features_header(with_label) << '\n';
  for (const auto& r : results)
    if (r.value) csv << features_row(*r.value, with_label) << '\n';
  const std::size_t failures = report_errors(config, results, err);
  out << "features: " << inputs.size() - failures << " rows written to "
      << (config.out_dir / "features.csv").string() << '\n';
  return failures ? 1 : 0;
}

int cmd_oracle_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config, false);
  const auto inputs = expand_inputs(config.inputs);
  const auto q = quantization_of(config);
  fs::create_directories(config.out_dir);

  const auto results = run_batch<std::vector<OracleRow>>(
      inputs, config.jobs,
      [&](const fs::path& path, const std::string& id) { return oracle_rows(load_dem(path, q), id, config); });

  auto report = open_output(config.out_dir / "oracle_report.csv");
  const std::string header = "id,se,family,status,first_diff_index,detail";
  report << header << '\n';
  out << header << '\n';
  std::size_t fail = 0, skip = 0, pass = 0;
  for (const auto& r : results) {
    if (!r.value) continue;
    for (const auto& row : *r.value) {
      const std::string line = csv_field(row.id) + "," + row.se + "," + row.family + "," + row.status +
                               "," + row.first_diff + "," + csv_field(row.detail);
      report << line << '\n';
      out << line << '\n';
      fail += row.status == "FAIL";
      skip += row.status == "SKIP";
      pass += row.status == "PASS";
    }
  }
  if (skip) err << "mdgi: " << skip << " checks skipped (cap " << config.max_work << ")\n";
  const std::size_t failures = report_errors(config, results, err);
  out << "oracle-check: " << pass << " pass, " << fail << " fail, " << skip << " skipped, "
      << failures << " unreadable\n";
  return (fail || failures) ? 1 : 0;
}

namespace {

std::vector<FeatureRecord> load_features(const RunConfig& config, bool require_label) {
  if (config.features.empty()) throw InvalidArgument("no features file given");
  std::ifstream in(config.features);
  if (!in) throw Error("cannot open " + config.features.string());
  try {
    return read_features_csv(in, config.label_column, require_label);
  } catch (const ParseError& e) {
    throw Error(config.features.string() + ": " + e.what());
  }
}

// unreduced: 69/138 rather than 1/2
std::string accuracy_line(const Rational& acc, std::size_t n) {
  const auto total = static_cast<std::int64_t>(n);
  return "accuracy " + std::to_string(acc.numerator() * total / acc.denominator()) + "/" +
         std::to_string(total) + " = " + format_real(to_double(acc));
}

}  // namespace

int cmd_train_tree(const RunConfig& config, std::ostream& out, std::ostream&) {
  validate(config, false);
  const auto records = load_features(config, true);
  const auto samples = labeled_samples(records);
  const DecisionTree tree = train_cart(samples, config.max_depth);
  const Rational acc = training_accuracy(tree, samples);

  ordered_json doc;
  doc["metadata"] = metadata(config);
  doc["training"] = {{"features", config.features.generic_string()},
                     {"label_column", config.label_column},
                     {"records", samples.size()},
                     {"max_depth", config.max_depth},
                     {"depth", tree.depth()},
                     {"accuracy", to_string(acc)},
                     {"accuracy_decimal", rounded(to_double(acc))}};
  doc["tree"] = ordered_json::parse(tree_to_json(tree));
  open_output(config.out_dir / "tree.json") << dump(doc);
  const std::string text = render_text(tree);
  open_output(config.out_dir / "tree.txt") << text;
  out << text << accuracy_line(acc, samples.size()) << '\n';
  return 0;
}

int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream&) {
  validate(config, false);
  if (config.tree.empty()) throw InvalidArgument("no tree file given");
  std::ifstream tin(config.tree);
  if (!tin) throw Error("cannot open " + config.tree.string());
  std::stringstream text;
  text << tin.rdbuf();
  std::string tree_text = text.str();
  // files written by train-tree wrap the tree with metadata
  if (const auto j = ordered_json::parse(tree_text, nullptr, false); j.is_object() && j.contains("tree"))
    tree_text = j["tree"].dump();
  const DecisionTree tree = tree_from_json(tree_text);

  const auto records = load_features(config, false);
  const bool labeled = !records.empty() && std::all_of(records.begin(), records.end(),
                                                       [](const FeatureRecord& r) { return r.label.has_value(); });
  auto csv = open_output(config.out_dir / "predictions.csv");
  csv << (labeled ? "id,predicted,label\n" : "id,predicted\n");
  std::int64_t correct = 0;
  for (const auto& r : records) {
    const std::string& p = predict(tree, r.x);
    csv << csv_field(r.id) << ',' << csv_field(p);
    if (labeled) {
      csv << ',' << csv_field(*r.label);
      correct += p == *r.label;
    }
    csv << '\n';
  }
  ordered_json doc;
  doc["metadata"] = metadata(config);
  doc["records"] = records.size();
  if (labeled) {
    const Rational acc(correct, static_cast<std::int64_t>(records.size()));
    doc["accuracy"] = to_string(acc);
    doc["accuracy_decimal"] = rounded(to_double(acc));
    out << accuracy_line(acc, records.size()) << '\n';
  }
  open_output(config.out_dir / "classify.json") << dump(doc);
  out << "classify: " << records.size() << " predictions written to "
      << (config.out_dir / "predictions.csv").string() << '\n';
  return 0;
}

}  // namespace mdgi::cli
