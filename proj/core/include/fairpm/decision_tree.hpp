#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fairpm/annotated_table.hpp"
#include "fairpm/rational.hpp"

namespace fairpm {

// Entropy in bits of a two-class distribution; 0 for an empty or pure one.
double entropy(std::int64_t positives, std::int64_t negatives);

enum class FeatureKind { kCategorical, kNumeric };

// Numeric when every non-⊥ value of the column is integer, real or
// timestamp; categorical otherwise (including all-⊥ columns).
std::vector<FeatureKind> infer_feature_kinds(const AnnotatedTable& table);

struct LeafCounts {
  std::int64_t favorable_positive = 0;
  std::int64_t favorable_negative = 0;
  std::int64_t deprived_positive = 0;
  std::int64_t deprived_negative = 0;

  std::int64_t positives() const { return favorable_positive + deprived_positive; }
  std::int64_t negatives() const { return favorable_negative + deprived_negative; }
  std::int64_t favorable() const { return favorable_positive + favorable_negative; }
  std::int64_t deprived() const { return deprived_positive + deprived_negative; }
  std::int64_t total() const { return positives() + negatives(); }

  void add(const Instance& inst);
};

struct Leaf {
  int id = 0;
  Label label = Label::kPositive;
  LeafCounts counts;
};

struct Split {
  std::size_t feature = 0;
  FeatureKind kind = FeatureKind::kCategorical;
  // Numeric: value <= threshold goes to the first child.
  double threshold = 0.0;
  // Categorical: one branch per observed value at the node, ⊥ included,
  // sorted by ValueOrder with ⊥ first.
  std::vector<OptionalValue> categories;
  double gain = 0.0;
  double gain_ratio = 0.0;
  // Chosen by the zero-gain lookahead rather than by best_split.
  bool lookahead = false;
};

struct TreeParams {
  std::size_t min_instances_per_leaf = 2;
  std::size_t max_depth = 20;
};

class DecisionTree {
 public:
  struct Node {
    std::optional<Split> split;         // empty for leaves
    std::vector<std::size_t> children;  // node indices, in branch order
    std::size_t default_child = 0;      // position in children with most training instances
    std::size_t training_count = 0;
    Leaf leaf;                          // meaningful for leaves only
    bool is_leaf() const { return !split.has_value(); }
  };

  DecisionTree(ExtractionPlan schema, std::vector<FeatureKind> kinds, std::vector<Node> nodes);

  const ExtractionPlan& schema() const { return schema_; }
  const std::vector<FeatureKind>& kinds() const { return kinds_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& root() const { return nodes_.front(); }

  std::size_t leaf_count() const { return leaf_nodes_.size(); }
  const Leaf& leaf(int id) const;
  std::vector<const Leaf*> leaves() const;
  std::size_t depth() const;

  // Id of the leaf that `values` is routed to. Unseen categories and ⊥
  // without a branch follow default_child.
  int route(std::span<const OptionalValue> values) const;
  Label predict(std::span<const OptionalValue> values) const;

  // Copy with the given leaves' labels flipped, which are remembered as
  // relabeled. Throws Error on unknown ids.
  DecisionTree with_flipped_leaves(const std::set<int>& ids) const;
  const std::set<int>& relabeled() const { return relabeled_; }

  friend bool operator==(const DecisionTree& a, const DecisionTree& b);

 private:
  ExtractionPlan schema_;
  std::vector<FeatureKind> kinds_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> leaf_nodes_;  // leaf id -> node index
  std::set<int> relabeled_;
};

// Best C4.5 split of the given rows, or none when no candidate has positive
// information gain. Candidates: multiway categorical splits with at least two
// branches holding min_instances_per_leaf instances; numeric thresholds at
// midpoints of consecutive distinct values leaving min_instances_per_leaf
// known values on both sides. For thresholds ⊥ is left out of the statistics
// (gain over known values, scaled by their share) and routed to the larger
// side when the node is split. Among candidates whose
// gain reaches the mean positive gain, the highest gain ratio wins; ties go to
// the lower feature index, then the lower threshold.
std::optional<Split> best_split(const AnnotatedTable& table, std::span<const std::size_t> rows,
                                const std::vector<FeatureKind>& kinds, const TreeParams& params);

// Every admissible candidate at the node with gain and gain ratio filled in.
std::vector<Split> candidate_splits(const AnnotatedTable& table, std::span<const std::size_t> rows,
                                    const std::vector<FeatureKind>& kinds, const TreeParams& params);

// Branch position of `values` under `split` for training rows; ⊥ and unseen
// values return `fallback`.
std::size_t branch_of(const Split& split, const OptionalValue& value, std::size_t fallback);

// Unpruned C4.5-style tree. Pure nodes, nodes smaller than twice the minimum
// leaf size and nodes at max_depth become leaves. When no split has positive
// gain, a zero-gain split is still taken if one of its children then admits a
// positive-gain split (one level of lookahead, so parity patterns are
// learnable). Leaves are labelled by majority, ties to +.
DecisionTree grow_tree(const AnnotatedTable& train, const TreeParams& params = {});

Rational exact_accuracy(const DecisionTree& tree, const AnnotatedTable& table);
double accuracy(const DecisionTree& tree, const AnnotatedTable& table);

// Graphviz digraph; leaves in `highlight` are filled yellow.
std::string export_dot(const DecisionTree& tree, const std::set<int>& highlight = {});

// Nested JSON summary of splits and leaf counts.
nlohmann::json tree_summary(const DecisionTree& tree);

}  // namespace fairpm
