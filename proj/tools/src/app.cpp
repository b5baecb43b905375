#include <fstream>
#include <functional>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "batch.hpp"
#include "mdgi/error.hpp"

using nlohmann::json;

namespace mdgi::cli {
namespace {

// A command-line option that a config file key may also set.
struct Binding {
  std::string key;
  CLI::App* owner;
  CLI::Option* option;
  std::function<void(const json&)> assign;
};

const std::set<std::string> kConfigKeys = {
    "inputs", "se",       "step",     "datum",    "out_dir", "format",       "jobs",
    "oracle_check", "max_work", "labels", "features", "tree", "label_column", "max_depth"};

class Builder {
 public:
  Builder(RunConfig& config, std::vector<std::string>& se_names) : c_(config), se_(se_names) {}

  void inputs(CLI::App* app, const std::string& help) {
    bind(app, "inputs", app->add_option("inputs", c_.inputs, help),
         [this](const json& j) { c_.inputs = j.get<std::vector<std::string>>(); });
  }
  void out_dir(CLI::App* app) {
    bind(app, "out_dir", app->add_option("-o,--out-dir", c_.out_dir, "Output directory")->capture_default_str(),
         [this](const json& j) { c_.out_dir = j.get<std::string>(); });
  }
  void dem_options(CLI::App* app) {
    bind(app, "se",
         app->add_option("--se", se_, "Structuring elements (B1,B2,B3,B4,B)")->delimiter(','),
         [this](const json& j) { se_ = j.get<std::vector<std::string>>(); });
    bind(app, "step", app->add_option("--step", c_.step, "Quantization step; omit for integer inputs"),
         [this](const json& j) { c_.step = j.get<double>(); });
    bind(app, "datum", app->add_option("--datum", c_.datum, "Quantization datum")->capture_default_str(),
         [this](const json& j) { c_.datum = j.get<double>(); });
    bind(app, "jobs", app->add_option("-j,--jobs", c_.jobs, "Files processed in parallel")->capture_default_str(),
         [this](const json& j) { c_.jobs = j.get<std::size_t>(); });
  }
  void format(CLI::App* app) {
    const std::map<std::string, Format> names{{"csv", Format::kCsv}, {"json", Format::kJson}};
    bind(app, "format",
         app->add_option("--format", c_.format, "csv: one CSV per element; json: spectra inside the summary")
             ->transform(CLI::CheckedTransformer(names, CLI::ignore_case)),
         [this, names](const json& j) {
           const auto it = names.find(j.get<std::string>());
           if (it == names.end()) throw InvalidArgument("format must be csv or json");
           c_.format = it->second;
         });
  }
  void oracle(CLI::App* app, bool toggle) {
    if (toggle)
      bind(app, "oracle_check", app->add_flag("--oracle-check", c_.oracle_check, "Also compare against run counts"),
           [this](const json& j) { c_.oracle_check = j.get<bool>(); });
    bind(app, "max_work",
         app->add_option("--max-work", c_.max_work, "Skip DEMs whose cells x levels exceeds this")
             ->capture_default_str(),
         [this](const json& j) { c_.max_work = j.get<std::uint64_t>(); });
  }
  void labels(CLI::App* app) {
    bind(app, "labels", app->add_option("--labels", c_.labels, "CSV of id,label added as a label column"),
         [this](const json& j) { c_.labels = j.get<std::string>(); });
  }
  void features(CLI::App* app, bool required) {
    auto* opt = app->add_option("--features", c_.features, "Features CSV");
    if (required) opt->required();
    bind(app, "features", opt, [this](const json& j) { c_.features = j.get<std::string>(); });
    bind(app, "label_column",
         app->add_option("--label-column", c_.label_column, "Column holding class labels")->capture_default_str(),
         [this](const json& j) { c_.label_column = j.get<std::string>(); });
  }
  void max_depth(CLI::App* app) {
    bind(app, "max_depth", app->add_option("--max-depth", c_.max_depth, "Tree depth cap")->capture_default_str(),
         [this](const json& j) { c_.max_depth = j.get<std::size_t>(); });
  }
  void tree(CLI::App* app) {
    bind(app, "tree", app->add_option("--tree", c_.tree, "Tree JSON from train-tree"),
         [this](const json& j) { c_.tree = j.get<std::string>(); });
  }

  // Config values fill in whatever the command line left unset.
  void apply(const json& file, CLI::App* selected) {
    if (!file.is_object()) throw InvalidArgument("config file must hold a JSON object");
    for (const auto& [key, value] : file.items())
      if (!kConfigKeys.count(key)) throw InvalidArgument("unknown config key '" + key + "'");
    for (const auto& b : bindings_) {
      if (b.owner != selected || b.option->count() > 0 || !file.contains(b.key)) continue;
      try {
        b.assign(file.at(b.key));
      } catch (const json::exception& e) {
        throw InvalidArgument("config key '" + b.key + "': " + e.what());
      }
    }
  }

 private:
  void bind(CLI::App* app, std::string key, CLI::Option* opt, std::function<void(const json&)> f) {
    bindings_.push_back({std::move(key), app, opt, std::move(f)});
  }

  RunConfig& c_;
  std::vector<std::string>& se_;
  std::vector<Binding> bindings_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiscale directional granulometric indices for masked DEMs", "mdgi"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mdgi 0.1.0");
  std::string config_file;
  app.add_option("--config", config_file, "JSON config file; command-line flags override it")
      ->check(CLI::ExistingFile);

  RunConfig config;
  std::vector<std::string> se_names;
  Builder b(config, se_names);
  using Command = int (*)(const RunConfig&, std::ostream&, std::ostream&);
  std::vector<std::pair<CLI::App*, Command>> commands;

  auto* spectrum = app.add_subcommand("spectrum", "Pattern spectra and GI per element");
  b.inputs(spectrum, "DEM files (.asc, .csv), directories or globs");
  b.out_dir(spectrum);
  b.dem_options(spectrum);
  b.format(spectrum);
  b.oracle(spectrum, true);
  commands.emplace_back(spectrum, cmd_spectrum);

  auto* features = app.add_subcommand("features", "One feature row per DEM");
  b.inputs(features, "DEM files (.asc, .csv), directories or globs");
  b.out_dir(features);
  b.dem_options(features);
  b.labels(features);
  commands.emplace_back(features, cmd_features);

  auto* oracle = app.add_subcommand("oracle-check", "Compare morphological spectra with run counts");
  b.inputs(oracle, "DEM files (.asc, .csv), directories or globs");
  b.out_dir(oracle);
  b.dem_options(oracle);
  b.oracle(oracle, false);
  oracle->add_option("--corrupt-at", config.corrupt_at, "Perturb the morphology p-vector at this index")
      ->group("");
  commands.emplace_back(oracle, cmd_oracle_check);

  auto* train = app.add_subcommand("train-tree", "Fit a CART tree on a features CSV");
  b.features(train, true);
  b.max_depth(train);
  b.out_dir(train);
  commands.emplace_back(train, cmd_train_tree);

  auto* classify = app.add_subcommand("classify", "Predict classes with a trained tree");
  b.tree(classify);
  classify->get_option("--tree")->required();
  b.features(classify, true);
  b.out_dir(classify);
  commands.emplace_back(classify, cmd_classify);

  auto* gen = app.add_subcommand("gen-fixtures", "Write the small reference DEMs");
  b.out_dir(gen);
  commands.emplace_back(gen, cmd_gen_fixtures);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  CLI::App* selected = nullptr;
  Command command = nullptr;
  for (auto& [sub, cmd] : commands)
    if (sub->parsed()) selected = sub, command = cmd;

  try {
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      json file;
      try {
        file = json::parse(in);
      } catch (const json::exception& e) {
        throw InvalidArgument(config_file + ": " + e.what());
      }
      b.apply(file, selected);
    }
    if (!se_names.empty()) {
      config.ses.clear();
      for (const auto& name : se_names) {
        const NamedSe se = parse_named_se(name);
        if (std::find(config.ses.begin(), config.ses.end(), se) == config.ses.end()) config.ses.push_back(se);
      }
      std::sort(config.ses.begin(), config.ses.end());
    }
    validate(config, selected == spectrum || selected == features);
  } catch (const Error& e) {
    err << "mdgi: " << e.what() << '\n';
    return 2;
  }

  try {
    return command(config, out, err);
  } catch (const std::exception& e) {
    err << "mdgi: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mdgi::cli
