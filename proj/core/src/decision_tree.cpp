#include "fairpm/decision_tree.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fairpm/error.hpp"

namespace fairpm {

double entropy(std::int64_t positives, std::int64_t negatives) {
  const double total = static_cast<double>(positives + negatives);
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (std::int64_t c : {positives, negatives}) {
    if (c == 0) continue;
    double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<FeatureKind> infer_feature_kinds(const AnnotatedTable& table) {
  std::vector<FeatureKind> kinds(table.schema().size(), FeatureKind::kCategorical);
  for (std::size_t f = 0; f < kinds.size(); ++f) {
    bool any = false, numeric = true;
    for (const Instance& inst : table.instances()) {
      const auto& v = inst.values[f];
      if (!v) continue;
      any = true;
      if (!v->is_numeric()) {
        numeric = false;
        break;
      }
    }
    if (any && numeric) kinds[f] = FeatureKind::kNumeric;
  }
  return kinds;
}

void LeafCounts::add(const Instance& inst) {
  bool positive = inst.label == Label::kPositive;
  if (inst.group == Group::kFavorable) {
    ++(positive ? favorable_positive : favorable_negative);
  } else {
    ++(positive ? deprived_positive : deprived_negative);
  }
}

namespace {

constexpr double kTieTolerance = 1e-12;

struct ClassCounts {
  std::int64_t pos = 0;
  std::int64_t neg = 0;
  std::int64_t total() const { return pos + neg; }
  void add(Label l) { ++(l == Label::kPositive ? pos : neg); }
};

// ⊥ orders before every value.
struct OptionalOrder {
  bool operator()(const OptionalValue& a, const OptionalValue& b) const {
    if (!a || !b) return !a && b;
    return ValueOrder{}(*a, *b);
  }
};

bool same_value(const OptionalValue& a, const OptionalValue& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

// Gain and gain ratio of a partition of `parent` into `parts`.
std::pair<double, double> score_partition(const ClassCounts& parent,
                                          const std::vector<ClassCounts>& parts) {
  const double n = static_cast<double>(parent.total());
  double remainder = 0.0, split_info = 0.0;
  for (const auto& part : parts) {
    if (part.total() == 0) continue;
    double w = static_cast<double>(part.total()) / n;
    remainder += w * entropy(part.pos, part.neg);
    split_info -= w * std::log2(w);
  }
  double gain = entropy(parent.pos, parent.neg) - remainder;
  if (gain < 0 && gain > -kTieTolerance) gain = 0.0;
  double ratio = split_info > 0 ? gain / split_info : 0.0;
  return {gain, ratio};
}

std::optional<double> numeric_value(const OptionalValue& v) {
  if (!v) return std::nullopt;
  return v->numeric();
}

}  // namespace

std::size_t branch_of(const Split& split, const OptionalValue& value, std::size_t fallback) {
  if (split.kind == FeatureKind::kNumeric) {
    auto x = numeric_value(value);
    if (!x) return fallback;
    return *x <= split.threshold ? 0 : 1;
  }
  for (std::size_t b = 0; b < split.categories.size(); ++b) {
    if (same_value(split.categories[b], value)) return b;
  }
  return fallback;
}

std::vector<Split> candidate_splits(const AnnotatedTable& table, std::span<const std::size_t> rows,
                                    const std::vector<FeatureKind>& kinds, const TreeParams& params) {
  std::vector<Split> out;
  const auto min_leaf = static_cast<std::int64_t>(std::max<std::size_t>(1, params.min_instances_per_leaf));
  ClassCounts parent;
  for (std::size_t r : rows) parent.add(table[r].label);

  for (std::size_t f = 0; f < kinds.size(); ++f) {
    if (kinds[f] == FeatureKind::kCategorical) {
      std::map<OptionalValue, ClassCounts, OptionalOrder> branches;
      for (std::size_t r : rows) branches[table[r].values[f]].add(table[r].label);
      if (branches.size() < 2) continue;
      std::size_t big = 0;
      for (const auto& [key, counts] : branches) big += counts.total() >= min_leaf;
      if (big < 2) continue;
      Split s;
      s.feature = f;
      s.kind = FeatureKind::kCategorical;
      std::vector<ClassCounts> parts;
      for (const auto& [key, counts] : branches) {
        s.categories.push_back(key);
        parts.push_back(counts);
      }
      std::tie(s.gain, s.gain_ratio) = score_partition(parent, parts);
      out.push_back(std::move(s));
      continue;
    }

    std::vector<std::pair<double, Label>> known;
    ClassCounts unknown;
    for (std::size_t r : rows) {
      if (auto x = numeric_value(table[r].values[f])) {
        known.emplace_back(*x, table[r].label);
      } else {
        unknown.add(table[r].label);
      }
    }
    std::sort(known.begin(), known.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    ClassCounts known_total;
    for (const auto& [x, l] : known) known_total.add(l);
    ClassCounts left;
    for (std::size_t i = 0; i + 1 < known.size(); ++i) {
      left.add(known[i].second);
      double lo = known[i].first, hi = known[i + 1].first;
      if (lo == hi) continue;
      ClassCounts right{known_total.pos - left.pos, known_total.neg - left.neg};
      if (left.total() < min_leaf || right.total() < min_leaf) continue;
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      Split s;
      s.feature = f;
      s.kind = FeatureKind::kNumeric;
      s.threshold = threshold;
      // As in C4.5, ⊥ stays out of the statistics: gain over the known
      // values scaled by their share, ⊥ as its own part of the split info.
      const double known_gain = score_partition(known_total, {left, right}).first;
      const double n = static_cast<double>(parent.total());
      s.gain = known_gain * static_cast<double>(known_total.total()) / n;
      double split_info = 0.0;
      for (std::int64_t part : {left.total(), right.total(), unknown.total()}) {
        if (part == 0) continue;
        double w = static_cast<double>(part) / n;
        split_info -= w * std::log2(w);
      }
      s.gain_ratio = split_info > 0 ? s.gain / split_info : 0.0;
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::optional<Split> best_split(const AnnotatedTable& table, std::span<const std::size_t> rows,
                                const std::vector<FeatureKind>& kinds, const TreeParams& params) {
  auto candidates = candidate_splits(table, rows, kinds, params);
  double gain_sum = 0.0;
  std::size_t positive = 0;
  for (const auto& c : candidates) {
    if (c.gain > kTieTolerance) {
      gain_sum += c.gain;
      ++positive;
    }
  }
  if (positive == 0) return std::nullopt;
  const double mean_gain = gain_sum / static_cast<double>(positive);
  const Split* best = nullptr;
  for (const auto& c : candidates) {
    if (c.gain <= kTieTolerance || c.gain < mean_gain - kTieTolerance) continue;
    // Candidates arrive ordered by (feature, threshold), so strict
    // improvement keeps the earliest on ties.
    if (!best || c.gain_ratio > best->gain_ratio + kTieTolerance) best = &c;
  }
  return *best;
}

DecisionTree::DecisionTree(ExtractionPlan schema, std::vector<FeatureKind> kinds, std::vector<Node> nodes)
    : schema_(std::move(schema)), kinds_(std::move(kinds)), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw Error("decision tree without nodes");
  if (kinds_.size() != schema_.size()) throw Error("decision tree: feature kinds do not match schema");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.is_leaf()) {
      auto id = static_cast<std::size_t>(n.leaf.id);
      if (leaf_nodes_.size() <= id) leaf_nodes_.resize(id + 1, nodes_.size());
      leaf_nodes_[id] = i;
    } else if (n.split->feature >= schema_.size() || n.children.empty()) {
      throw Error("decision tree: malformed internal node");
    }
  }
  for (std::size_t idx : leaf_nodes_) {
    if (idx == nodes_.size()) throw Error("decision tree: leaf ids are not contiguous");
  }
}

const Leaf& DecisionTree::leaf(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= leaf_nodes_.size()) {
    throw Error("unknown leaf id " + std::to_string(id));
  }
  return nodes_[leaf_nodes_[static_cast<std::size_t>(id)]].leaf;
}

std::vector<const Leaf*> DecisionTree::leaves() const {
  std::vector<const Leaf*> out;
  out.reserve(leaf_nodes_.size());
  for (std::size_t idx : leaf_nodes_) out.push_back(&nodes_[idx].leaf);
  return out;
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::size_t c : nodes_[i].children) {
      level[c] = level[i] + 1;
      deepest = std::max(deepest, level[c]);
    }
  }
  return deepest;
}

int DecisionTree::route(std::span<const OptionalValue> values) const {
  if (values.size() != schema_.size()) {
    throw Error("feature tuple has " + std::to_string(values.size()) + " values, schema has " +
                std::to_string(schema_.size()));
  }
  const Node* node = &nodes_.front();
  while (!node->is_leaf()) {
    std::size_t b = branch_of(*node->split, values[node->split->feature], node->default_child);
    node = &nodes_[node->children[b]];
  }
  return node->leaf.id;
}

Label DecisionTree::predict(std::span<const OptionalValue> values) const {
  return leaf(route(values)).label;
}

DecisionTree DecisionTree::with_flipped_leaves(const std::set<int>& ids) const {
  DecisionTree copy = *this;
  for (int id : ids) {
    leaf(id);  // validates
    Leaf& l = copy.nodes_[leaf_nodes_[static_cast<std::size_t>(id)]].leaf;
    l.label = flip(l.label);
    copy.relabeled_.insert(id);
  }
  return copy;
}

bool operator==(const DecisionTree& a, const DecisionTree& b) {
  if (a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    const auto& x = a.nodes_[i];
    const auto& y = b.nodes_[i];
    if (x.is_leaf() != y.is_leaf() || x.children != y.children) return false;
    if (x.is_leaf()) {
      if (x.leaf.id != y.leaf.id || x.leaf.label != y.leaf.label) return false;
    } else if (x.split->feature != y.split->feature || x.split->kind != y.split->kind ||
               x.split->threshold != y.split->threshold ||
               x.split->categories.size() != y.split->categories.size()) {
      return false;
    }
  }
  return true;
}

namespace {

class Grower {
 public:
  Grower(const AnnotatedTable& table, const TreeParams& params)
      : table_(table), params_(params), kinds_(infer_feature_kinds(table)) {}

  DecisionTree run() {
    std::vector<std::size_t> rows(table_.size());
    std::iota(rows.begin(), rows.end(), 0);
    build(rows, 0);
    return DecisionTree(table_.schema(), kinds_, std::move(nodes_));
  }

 private:
  bool splittable(std::span<const std::size_t> rows, std::size_t depth) const {
    if (depth >= params_.max_depth) return false;
    if (rows.size() < 2 * std::max<std::size_t>(1, params_.min_instances_per_leaf)) return false;
    bool pos = false, neg = false;
    for (std::size_t r : rows) (table_[r].label == Label::kPositive ? pos : neg) = true;
    return pos && neg;
  }

  std::vector<std::vector<std::size_t>> partition(const Split& split,
                                                  std::span<const std::size_t> rows) const {
    std::size_t arity = split.kind == FeatureKind::kNumeric ? 2 : split.categories.size();
    std::vector<std::vector<std::size_t>> parts(arity);
    std::vector<std::size_t> unknown;
    for (std::size_t r : rows) {
      const auto& v = table_[r].values[split.feature];
      if (split.kind == FeatureKind::kNumeric && !numeric_value(v)) {
        unknown.push_back(r);
      } else {
        parts[branch_of(split, v, 0)].push_back(r);
      }
    }
    if (!unknown.empty()) {
      auto& side = parts[0].size() >= parts[1].size() ? parts[0] : parts[1];
      side.insert(side.end(), unknown.begin(), unknown.end());
      std::sort(side.begin(), side.end());
    }
    return parts;
  }

  std::optional<Split> lookahead(std::span<const std::size_t> rows, std::size_t depth) const {
    if (depth + 1 >= params_.max_depth) return std::nullopt;
    for (Split c : candidate_splits(table_, rows, kinds_, params_)) {
      for (const auto& part : partition(c, rows)) {
        if (splittable(part, depth + 1) && best_split(table_, part, kinds_, params_)) {
          c.lookahead = true;
          return c;
        }
      }
    }
    return std::nullopt;
  }

  std::size_t build(const std::vector<std::size_t>& rows, std::size_t depth) {
    std::size_t index = nodes_.size();
    nodes_.emplace_back();
    nodes_[index].training_count = rows.size();

    std::optional<Split> split;
    if (splittable(rows, depth)) {
      split = best_split(table_, rows, kinds_, params_);
      if (!split) split = lookahead(rows, depth);
    }
    if (!split) {
      Leaf leaf;
      leaf.id = next_leaf_++;
      for (std::size_t r : rows) leaf.counts.add(table_[r]);
      leaf.label = leaf.counts.positives() >= leaf.counts.negatives() ? Label::kPositive : Label::kNegative;
      nodes_[index].leaf = leaf;
      return index;
    }

    auto parts = partition(*split, rows);
    std::size_t default_child = 0;
    for (std::size_t b = 1; b < parts.size(); ++b) {
      if (parts[b].size() > parts[default_child].size()) default_child = b;
    }
    std::vector<std::size_t> children;
    for (const auto& part : parts) children.push_back(build(part, depth + 1));
    nodes_[index].split = std::move(split);
    nodes_[index].children = std::move(children);
    nodes_[index].default_child = default_child;
    return index;
  }

  const AnnotatedTable& table_;
  TreeParams params_;
  std::vector<FeatureKind> kinds_;
  std::vector<DecisionTree::Node> nodes_;
  int next_leaf_ = 0;
};

}  // namespace

DecisionTree grow_tree(const AnnotatedTable& train, const TreeParams& params) {
  if (train.empty()) throw Error("cannot grow a tree on an empty table");
  return Grower(train, params).run();
}

Rational exact_accuracy(const DecisionTree& tree, const AnnotatedTable& table) {
  if (table.empty()) throw Error("accuracy of an empty table is undefined");
  std::int64_t correct = 0;
  for (const Instance& inst : table.instances()) correct += tree.predict(inst.values) == inst.label;
  return Rational(correct, static_cast<std::int64_t>(table.size()));
}

double accuracy(const DecisionTree& tree, const AnnotatedTable& table) {
  return to_double(exact_accuracy(tree, table));
}

namespace {

std::string format_number(double x) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, end);
}

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string category_text(const OptionalValue& v) { return v ? v->to_display() : "(missing)"; }

}  // namespace

std::string export_dot(const DecisionTree& tree, const std::set<int>& highlight) {
  std::ostringstream out;
  out << "digraph DecisionTree {\n";
  out << "  node [fontname=\"Helvetica\"];\n";
  const auto& nodes = tree.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) {
      const auto& c = n.leaf.counts;
      std::ostringstream label;
      label << "leaf " << n.leaf.id << ": " << to_string(n.leaf.label) << "\nfavorable +" << c.favorable_positive
            << " -" << c.favorable_negative << "\ndeprived +" << c.deprived_positive << " -"
            << c.deprived_negative;
      out << "  n" << i << " [shape=box, label=\"" << dot_escape(label.str()) << "\"";
      if (highlight.contains(n.leaf.id)) out << ", style=filled, fillcolor=yellow";
      out << "];\n";
    } else {
      out << "  n" << i << " [shape=ellipse, label=\""
          << dot_escape(tree.schema()[n.split->feature].name()) << "\"];\n";
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) continue;
    for (std::size_t b = 0; b < n.children.size(); ++b) {
      std::string edge;
      if (n.split->kind == FeatureKind::kNumeric) {
        edge = (b == 0 ? "<= " : "> ") + format_number(n.split->threshold);
      } else {
        edge = "= " + category_text(n.split->categories[b]);
      }
      out << "  n" << i << " -> n" << n.children[b] << " [label=\"" << dot_escape(edge) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

namespace {

nlohmann::json summarize(const DecisionTree& tree, std::size_t index) {
  const auto& n = tree.nodes()[index];
  nlohmann::json j;
  if (n.is_leaf()) {
    const auto& c = n.leaf.counts;
    j["leaf"] = n.leaf.id;
    j["label"] = std::string(to_string(n.leaf.label));
    j["relabeled"] = tree.relabeled().contains(n.leaf.id);
    j["counts"] = {{"favorable_positive", c.favorable_positive},
                   {"favorable_negative", c.favorable_negative},
                   {"deprived_positive", c.deprived_positive},
                   {"deprived_negative", c.deprived_negative}};
    return j;
  }
  j["feature"] = tree.schema()[n.split->feature].name();
  j["training_count"] = n.training_count;
  j["gain_ratio"] = n.split->gain_ratio;
  nlohmann::json branches = nlohmann::json::array();
  for (std::size_t b = 0; b < n.children.size(); ++b) {
    nlohmann::json branch;
    if (n.split->kind == FeatureKind::kNumeric) {
      branch["condition"] = (b == 0 ? "<= " : "> ") + format_number(n.split->threshold);
    } else {
      branch["condition"] = "= " + category_text(n.split->categories[b]);
    }
    branch["node"] = summarize(tree, n.children[b]);
    branches.push_back(std::move(branch));
  }
  j["branches"] = std::move(branches);
  return j;
}

}  // namespace

nlohmann::json tree_summary(const DecisionTree& tree) { return summarize(tree, 0); }

}  // namespace fairpm
