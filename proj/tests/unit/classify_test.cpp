#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "mdgi/classify.hpp"
#include "mdgi/error.hpp"

namespace mdgi {
namespace {

LabeledSample sample(std::initializer_list<double> head, std::string label) {
  LabeledSample s;
  std::size_t k = 0;
  for (double v : head) s.x[k++] = v;
  s.label = std::move(label);
  return s;
}

TEST(Cart, TwoSeparableRecords) {
  const std::vector<LabeledSample> data{sample({0.2}, "a"), sample({0.9}, "b")};
  const DecisionTree tree = train_cart(data, 3);
  EXPECT_EQ(tree.depth(), 1u);
  EXPECT_EQ(tree.nodes()[0].feature, 0u);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, 0.55);
  EXPECT_EQ(training_accuracy(tree, data), Rational(1));
}

TEST(Cart, IdenticalFeaturesGiveMajorityLeaf) {
  std::vector<LabeledSample> data{sample({1, 2}, "b"), sample({1, 2}, "a"), sample({1, 2}, "b"),
                                  sample({1, 2}, "a")};
  DecisionTree tree = train_cart(data, 4);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.nodes()[0].label, "a");
  data.push_back(sample({1, 2}, "b"));
  tree = train_cart(data, 4);
  EXPECT_EQ(tree.nodes()[0].label, "b");
}

TEST(Cart, SingleClassIsLeaf) {
  const std::vector<LabeledSample> data{sample({1}, "x"), sample({5}, "x")};
  const DecisionTree tree = train_cart(data, 2);
  EXPECT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(predict(tree, sample({9}, "").x), "x");
}

TEST(Cart, Errors) {
  EXPECT_THROW(train_cart({}, 2), InvalidArgument);
  const DecisionTree tree = train_cart(std::vector<LabeledSample>{sample({1}, "x")}, 1);
  EXPECT_THROW(training_accuracy(tree, {}), InvalidArgument);
  FeatureRecord unlabeled;
  EXPECT_THROW(labeled_samples(std::vector<FeatureRecord>{unlabeled}), InvalidArgument);
}

std::vector<LabeledSample> three_class_blocks() {
  // a: X0 <= 1 ; b: X0 > 1 and X5 <= 1 ; c: X0 > 1 and X5 > 1
  std::vector<LabeledSample> data;
  for (int i = 0; i < 6; ++i) {
    LabeledSample s;
    s.x[0] = 0.25 * i;
    s.x[5] = 3.0 - 0.5 * i;
    s.label = "a";
    data.push_back(s);
  }
  for (int i = 0; i < 5; ++i) {
    LabeledSample s;
    s.x[0] = 2.0 + i;
    s.x[5] = 0.1 * i;
    s.label = "b";
    data.push_back(s);
    s.x[5] = 2.0 + i;
    s.label = "c";
    data.push_back(s);
  }
  return data;
}

TEST(Cart, ThreeClassTwoSplits) {
  const auto data = three_class_blocks();
  const DecisionTree tree = train_cart(data, 5);
  EXPECT_EQ(tree.depth(), 2u);
  EXPECT_EQ(training_accuracy(tree, data), Rational(1));
  EXPECT_EQ(tree.nodes()[0].feature, 0u);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, 1.625);
}

TEST(Predict, ThresholdGoesLeft) {
  std::vector<TreeNode> nodes(3);
  nodes[0].leaf = false;
  nodes[0].feature = 3;
  nodes[0].threshold = 0.5;
  nodes[0].left = 1;
  nodes[0].right = 2;
  nodes[1].label = "low";
  nodes[1].depth = 1;
  nodes[2].label = "high";
  nodes[2].depth = 1;
  const DecisionTree tree(nodes, 1);
  FeatureVector x{};
  x[3] = 0.5;
  EXPECT_EQ(predict(tree, x), "low");
  x[3] = 0.5000001;
  EXPECT_EQ(predict(tree, x), "high");
}

TEST(Predict, HandTraceDepthTwo) {
  const auto data = three_class_blocks();
  const DecisionTree tree = train_cart(data, 2);
  FeatureVector x{};
  x[0] = 1.7;
  x[5] = 1.0;
  EXPECT_EQ(predict(tree, x), "b");
  x[5] = 1.2;
  EXPECT_EQ(predict(tree, x), "b");
  x[5] = 1.3;
  EXPECT_EQ(predict(tree, x), "c");
  x[0] = 1.6;
  EXPECT_EQ(predict(tree, x), "a");
}

TEST(DecisionTree, RejectsBadStructure) {
  std::vector<TreeNode> nodes(1);
  nodes[0].leaf = false;
  nodes[0].left = 0;
  nodes[0].right = 0;
  EXPECT_THROW(DecisionTree(nodes, 1), InvalidArgument);
  EXPECT_THROW(DecisionTree({}, 1), InvalidArgument);
}

TEST(Accuracy, MajorityBaseline) {
  std::vector<LabeledSample> data;
  for (int i = 0; i < 31; ++i) data.push_back(sample({double(i)}, "basin-a"));
  for (int i = 0; i < 69; ++i) data.push_back(sample({double(i)}, "basin-b"));
  for (int i = 0; i < 38; ++i) data.push_back(sample({double(i)}, "basin-c"));
  const DecisionTree leaf = train_cart(data, 0);
  ASSERT_EQ(leaf.nodes().size(), 1u);
  EXPECT_EQ(leaf.nodes()[0].label, "basin-b");
  EXPECT_EQ(training_accuracy(leaf, data), Rational(69, 138));
  EXPECT_EQ(training_accuracy(leaf, data), Rational(1, 2));
}

// Brute-force reference: try every feature and every midpoint, score by exact
// weighted Gini impurity.
struct RefNode {
  bool leaf = true;
  std::size_t feature = 0;
  double threshold = 0;
  std::string label;
  std::unique_ptr<RefNode> left, right;
};

Rational gini(const std::vector<const LabeledSample*>& s) {
  std::map<std::string, std::int64_t> c;
  for (auto* p : s) ++c[p->label];
  Rational g(1);
  const auto n = static_cast<std::int64_t>(s.size());
  for (auto& [l, k] : c) g -= Rational(k * k, n * n);
  return g;
}

std::unique_ptr<RefNode> reference(const std::vector<const LabeledSample*>& s, std::size_t depth,
                                   std::size_t max_depth) {
  auto node = std::make_unique<RefNode>();
  std::map<std::string, std::size_t> counts;
  for (auto* p : s) ++counts[p->label];
  std::size_t best_count = 0;
  for (auto& [l, k] : counts)
    if (k > best_count) {
      best_count = k;
      node->label = l;
    }
  if (depth >= max_depth || counts.size() == 1) return node;
  const auto n = static_cast<std::int64_t>(s.size());
  Rational best = gini(s);
  bool found = false;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    std::set<double> values;
    for (auto* p : s) values.insert(p->x[f]);
    for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
      const double t = *it + (*std::next(it) - *it) / 2;
      std::vector<const LabeledSample*> l, r;
      for (auto* p : s) (p->x[f] <= t ? l : r).push_back(p);
      const Rational score = gini(l) * Rational(static_cast<std::int64_t>(l.size()), n) +
                             gini(r) * Rational(static_cast<std::int64_t>(r.size()), n);
      if (score < best) {
        best = score;
        found = true;
        node->feature = f;
        node->threshold = t;
      }
    }
  }
  if (!found) return node;
  node->leaf = false;
  std::vector<const LabeledSample*> l, r;
  for (auto* p : s) (p->x[node->feature] <= node->threshold ? l : r).push_back(p);
  node->left = reference(l, depth + 1, max_depth);
  node->right = reference(r, depth + 1, max_depth);
  return node;
}

void expect_same(const DecisionTree& tree, std::size_t id, const RefNode& ref) {
  const TreeNode& node = tree.nodes()[id];
  ASSERT_EQ(node.leaf, ref.leaf);
  if (node.leaf) {
    EXPECT_EQ(node.label, ref.label);
    return;
  }
  EXPECT_EQ(node.feature, ref.feature);
  EXPECT_EQ(node.threshold, ref.threshold);
  expect_same(tree, node.left, *ref.left);
  expect_same(tree, node.right, *ref.right);
}

TEST(Cart, MatchesExhaustiveSearch) {
  std::mt19937 rng(301);
  const char* labels[] = {"a", "b", "c"};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<LabeledSample> data(5 + rng() % 30);
    for (auto& s : data) {
      for (std::size_t f = 0; f < kFeatureCount; ++f) s.x[f] = (rng() % 4 == 0) ? 0.0 : (rng() % 7) / 4.0;
      s.label = labels[rng() % 3];
    }
    std::vector<const LabeledSample*> ptrs;
    for (auto& s : data) ptrs.push_back(&s);
    for (std::size_t depth : {0u, 1u, 2u, 4u}) {
      const DecisionTree tree = train_cart(data, depth);
      expect_same(tree, 0, *reference(ptrs, 0, depth));
      EXPECT_LE(tree.depth(), depth);
    }
  }
}

TEST(Cart, DeterministicAndMonotone) {
  std::mt19937 rng(303);
  std::vector<LabeledSample> data(138);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (auto& v : data[i].x) v = std::uniform_real_distribution<double>(0, 1)(rng);
    data[i].label = i < 31 ? "a" : i < 100 ? "b" : "c";
  }
  Rational prev(0);
  for (std::size_t depth = 0; depth <= 40; ++depth) {
    const DecisionTree tree = train_cart(data, depth);
    EXPECT_EQ(tree, train_cart(data, depth));
    const Rational acc = training_accuracy(tree, data);
    EXPECT_GE(acc, prev);
    prev = acc;
  }
  EXPECT_EQ(prev, Rational(1));
}

TEST(TreeJson, RoundTrip) {
  const auto data = three_class_blocks();
  const DecisionTree tree = train_cart(data, 3);
  EXPECT_EQ(tree_from_json(tree_to_json(tree)), tree);
  EXPECT_THROW(tree_from_json("{"), ParseError);
  EXPECT_THROW(tree_from_json(R"({"max_depth":1,"nodes":[]})"), ParseError);
}

TEST(TreeText, Rendering) {
  const auto data = three_class_blocks();
  const std::string text = render_text(train_cart(data, 2));
  EXPECT_EQ(text,
            "|--- X0 <= 1.625\n"
            "|   |--- class: a [a: 6]\n"
            "|--- X0 >  1.625\n"
            "|   |--- X5 <= 1.2\n"
            "|   |   |--- class: b [b: 5]\n"
            "|   |--- X5 >  1.2\n"
            "|   |   |--- class: c [c: 5]\n");
}

}  // namespace
}  // namespace mdgi
