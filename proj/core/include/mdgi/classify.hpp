#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mdgi/features.hpp"
#include "mdgi/rational.hpp"

namespace mdgi {

struct LabeledSample {
  FeatureVector x{};
  std::string label;
};

/// Throws InvalidArgument if any record has no label.
std::vector<LabeledSample> labeled_samples(std::span<const FeatureRecord> records);

struct TreeNode {
  bool leaf = true;
  // internal nodes
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  // every node keeps its training class counts; leaves predict `label`
  std::map<std::string, std::uint64_t> counts;
  std::string label;
  std::size_t depth = 0;

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary CART tree. nodes()[0] is the root; children always follow their parent.
class DecisionTree {
 public:
  DecisionTree(std::vector<TreeNode> nodes, std::size_t max_depth);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t max_depth() const noexcept { return max_depth_; }
  /// Depth of the deepest leaf (0 for a single leaf).
  std::size_t depth() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t max_depth_;
};

/// Greedy Gini CART. Splits are midpoints between adjacent distinct values and
/// send x <= threshold left. Among equally good splits the lowest feature index
/// wins, then the lowest threshold. A node becomes a leaf at the depth cap, when
/// pure, or when no split lowers the impurity. Leaves predict the majority
/// class, ties going to the lexicographically smallest label. max_depth = 0
/// gives the single majority leaf. Throws InvalidArgument on an empty dataset.
DecisionTree train_cart(std::span<const LabeledSample> samples, std::size_t max_depth);

const std::string& predict(const DecisionTree& tree, const FeatureVector& x);

/// Exact fraction of samples predicted correctly. Throws InvalidArgument when empty.
Rational training_accuracy(const DecisionTree& tree, std::span<const LabeledSample> samples);

std::string tree_to_json(const DecisionTree& tree);
/// Throws ParseError on malformed input.
DecisionTree tree_from_json(const std::string& text);

/// Indented text rendering, one line per branch test or leaf.
std::string render_text(const DecisionTree& tree);

}  // namespace mdgi
