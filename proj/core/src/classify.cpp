#include "mdgi/classify.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "mdgi/error.hpp"

namespace mdgi {

namespace {

using Counts = std::map<std::string, std::uint64_t>;
__extension__ typedef __int128 Int128;

const std::string& majority(const Counts& counts) {
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

std::uint64_t sum_of_squares(const Counts& counts) {
  std::uint64_t s = 0;
  for (const auto& [label, c] : counts) s += c * c;
  return s;
}

// Gini impurity of a split is 1 - (SL/nL + SR/nR)/n with S the sum of squared
// class counts, so the best split maximizes SL/nL + SR/nR. Kept as a fraction
// and compared exactly so the chosen split never depends on rounding.
struct Score {
  Int128 num = 0;
  Int128 den = 1;
  bool operator>(const Score& o) const { return num * o.den > o.num * den; }
};

struct Split {
  std::size_t feature;
  double threshold;
  Score score;
};

double midpoint(double a, double b) {
  const double mid = a + (b - a) / 2;
  return mid < b ? mid : a;
}

class Builder {
 public:
  Builder(std::span<const LabeledSample> samples, std::size_t max_depth)
      : samples_(samples), max_depth_(max_depth) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> all(samples_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    grow(all, 0);
    return std::move(nodes_);
  }

 private:
  std::size_t grow(const std::vector<std::size_t>& idx, std::size_t depth) {
    const std::size_t id = nodes_.size();
    nodes_.emplace_back();
    Counts counts;
    for (std::size_t i : idx) ++counts[samples_[i].label];
    nodes_[id].counts = counts;
    nodes_[id].label = majority(counts);
    nodes_[id].depth = depth;
    if (depth >= max_depth_ || counts.size() == 1) return id;

    const std::optional<Split> split = best_split(idx, counts);
    if (!split) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx)
      (samples_[i].x[split->feature] <= split->threshold ? left : right).push_back(i);
    nodes_[id].leaf = false;
    nodes_[id].feature = split->feature;
    nodes_[id].threshold = split->threshold;
    const std::size_t l = grow(left, depth + 1);
    const std::size_t r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& idx, const Counts& total) const {
    const Score parent{static_cast<Int128>(sum_of_squares(total)), static_cast<Int128>(idx.size())};
    std::optional<Split> best;
    std::vector<std::size_t> order = idx;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return samples_[a].x[f] < samples_[b].x[f];
      });
      Counts left;
      Counts right = total;
      std::uint64_t sl = 0, sr = sum_of_squares(total);
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const std::string& label = samples_[order[k]].label;
        // moving one sample changes c^2 by 2c+1 on the left and 2c-1 on the right
        sl += 2 * left[label] + 1;
        ++left[label];
        sr -= 2 * right[label] - 1;
        --right[label];
        const double a = samples_[order[k]].x[f];
        const double b = samples_[order[k + 1]].x[f];
        if (!(a < b)) continue;
        const Int128 nl = static_cast<Int128>(k + 1);
        const Int128 nr = static_cast<Int128>(order.size() - k - 1);
        const Score score{static_cast<Int128>(sl) * nr + static_cast<Int128>(sr) * nl, nl * nr};
        if (!(score > parent)) continue;
        if (!best || score > best->score) best = Split{f, midpoint(a, b), score};
      }
    }
    return best;
  }

  std::span<const LabeledSample> samples_;
  std::size_t max_depth_;
  std::vector<TreeNode> nodes_;
};

const TreeNode& leaf_for(const DecisionTree& tree, const FeatureVector& x) {
  const TreeNode* node = &tree.nodes().front();
  while (!node->leaf) node = &tree.nodes()[x[node->feature] <= node->threshold ? node->left : node->right];
  return *node;
}

void render(const DecisionTree& tree, std::size_t id, std::size_t indent, std::ostringstream& out) {
  const TreeNode& node = tree.nodes()[id];
  std::string prefix;
  for (std::size_t i = 0; i < indent; ++i) prefix += "|   ";
  if (node.leaf) {
    out << prefix << "|--- class: " << node.label << " [";
    bool first = true;
    for (const auto& [label, c] : node.counts) {
      out << (first ? "" : ", ") << label << ": " << c;
      first = false;
    }
    out << "]\n";
    return;
  }
  out << prefix << "|--- X" << node.feature << " <= " << node.threshold << '\n';
  render(tree, node.left, indent + 1, out);
  out << prefix << "|--- X" << node.feature << " >  " << node.threshold << '\n';
  render(tree, node.right, indent + 1, out);
}

}  // namespace

std::vector<LabeledSample> labeled_samples(std::span<const FeatureRecord> records) {
  std::vector<LabeledSample> out;
  out.reserve(records.size());
  for (const FeatureRecord& r : records) {
    if (!r.label) throw InvalidArgument("record '" + r.id + "' has no label");
    out.push_back({r.x, *r.label});
  }
  return out;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t max_depth)
    : nodes_(std::move(nodes)), max_depth_(max_depth) {
  if (nodes_.empty()) throw InvalidArgument("a decision tree needs at least one node");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode& n = nodes_[i];
    if (n.leaf) continue;
    if (n.feature >= kFeatureCount) throw InvalidArgument("split feature out of range");
    if (n.left <= i || n.right <= i || n.left >= nodes_.size() || n.right >= nodes_.size())
      throw InvalidArgument("node " + std::to_string(i) + " has invalid children");
  }
}

std::size_t DecisionTree::depth() const {
  std::size_t d = 0;
  for (const TreeNode& n : nodes_)
    if (n.leaf) d = std::max(d, n.depth);
  return d;
}

DecisionTree train_cart(std::span<const LabeledSample> samples, std::size_t max_depth) {
  if (samples.empty()) throw InvalidArgument("cannot train on an empty dataset");
  return DecisionTree(Builder(samples, max_depth).build(), max_depth);
}

const std::string& predict(const DecisionTree& tree, const FeatureVector& x) {
  return leaf_for(tree, x).label;
}

Rational training_accuracy(const DecisionTree& tree, std::span<const LabeledSample> samples) {
  if (samples.empty()) throw InvalidArgument("accuracy of an empty dataset");
  std::int64_t correct = 0;
  for (const LabeledSample& s : samples)
    if (predict(tree, s.x) == s.label) ++correct;
  return Rational(correct, static_cast<std::int64_t>(samples.size()));
}

std::string tree_to_json(const DecisionTree& tree) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    const TreeNode& n = tree.nodes()[i];
    nlohmann::ordered_json j;
    j["id"] = i;
    j["depth"] = n.depth;
    if (!n.leaf) {
      j["feature"] = n.feature;
      j["threshold"] = n.threshold;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    j["label"] = n.label;
    j["counts"] = n.counts;
    nodes.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["max_depth"] = tree.max_depth();
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

DecisionTree tree_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    std::vector<TreeNode> nodes;
    for (const auto& j : doc.at("nodes")) {
      TreeNode n;
      n.depth = j.at("depth").get<std::size_t>();
      n.label = j.at("label").get<std::string>();
      n.counts = j.at("counts").get<Counts>();
      if (j.contains("feature")) {
        n.leaf = false;
        n.feature = j.at("feature").get<std::size_t>();
        n.threshold = j.at("threshold").get<double>();
        n.left = j.at("left").get<std::size_t>();
        n.right = j.at("right").get<std::size_t>();
      }
      nodes.push_back(std::move(n));
    }
    return DecisionTree(std::move(nodes), doc.at("max_depth").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::kMalformedHeader, 1, 0, std::string("tree JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(ParseError::Kind::kBadValue, 1, 0, std::string("tree JSON: ") + e.what());
  }
}

std::string render_text(const DecisionTree& tree) {
  std::ostringstream out;
  out << std::setprecision(6);
  render(tree, 0, 0, out);
  return out.str();
}

}  // namespace mdgi
