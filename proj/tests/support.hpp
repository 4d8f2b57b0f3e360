#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "fairpm/annotated_table.hpp"
#include "fairpm/decision_tree.hpp"
#include "fairpm/fairness.hpp"
#include "fairpm/petri_net.hpp"
#include "fairpm/random.hpp"

namespace fairpm::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(FAIRPM_FIXTURES) / name;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_fixture(const std::string& name) { return read_text(fixture_path(name)); }

class TempDir {
 public:
  explicit TempDir(const std::string& stem) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            (stem + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Every regular file under `dir`, name -> content.
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  if (!std::filesystem::exists(dir)) return files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[std::filesystem::relative(e.path(), dir).string()] = read_text(e.path());
  }
  return files;
}

// --- relabeling oracle ------------------------------------------------------
//
// Works from instance routing alone: which leaf each training instance
// reaches and its group/label. Leaf counts and delta formulas are not used.

struct RoutedInstance {
  int leaf;
  Group group;
  Label label;
};

inline std::vector<RoutedInstance> route_all(const DecisionTree& tree, const AnnotatedTable& table) {
  std::vector<RoutedInstance> out;
  for (const auto& inst : table.instances()) out.push_back({tree.route(inst.values), inst.group, inst.label});
  return out;
}

struct Outcome {
  Rational disc;
  Rational accuracy;
};

// disc and accuracy when the leaves in `flipped` predict the opposite label.
inline Outcome evaluate_flips(const DecisionTree& tree, const std::vector<RoutedInstance>& routed,
                              const std::set<int>& flipped) {
  std::int64_t fav = 0, dep = 0, fav_pos = 0, dep_pos = 0, correct = 0;
  for (const auto& r : routed) {
    Label predicted = tree.leaf(r.leaf).label;
    if (flipped.contains(r.leaf)) predicted = predicted == Label::kPositive ? Label::kNegative : Label::kPositive;
    bool pos = predicted == Label::kPositive;
    if (r.group == Group::kFavorable) {
      ++fav;
      fav_pos += pos;
    } else {
      ++dep;
      dep_pos += pos;
    }
    correct += predicted == r.label;
  }
  return {Rational(fav_pos, fav) - Rational(dep_pos, dep),
          Rational(correct, static_cast<std::int64_t>(routed.size()))};
}

struct BruteForce {
  bool feasible = false;
  Rational best_accuracy;  // of the best feasible subset
  std::set<int> best;
};

// Highest-accuracy subset of `leaves` whose disc is at most `epsilon`.
inline BruteForce brute_force_relabel(const DecisionTree& tree, const AnnotatedTable& train,
                                      const std::vector<int>& leaves, const Rational& epsilon) {
  auto routed = route_all(tree, train);
  BruteForce res;
  const std::size_t n = leaves.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::set<int> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) s.insert(leaves[i]);
    }
    Outcome o = evaluate_flips(tree, routed, s);
    if (o.disc > epsilon) continue;
    if (!res.feasible || o.accuracy > res.best_accuracy) {
      res.feasible = true;
      res.best_accuracy = o.accuracy;
      res.best = s;
    }
  }
  return res;
}

// --- C4.5 oracle ------------------------------------------------------------

inline double oracle_entropy(double p, double n) {
  double t = p + n;
  if (t == 0) return 0;
  double h = 0;
  if (p > 0) h -= p / t * std::log2(p / t);
  if (n > 0) h -= n / t * std::log2(n / t);
  return h;
}

struct OracleCandidate {
  std::size_t feature;
  double threshold;  // NaN for categorical
  double gain;
  double ratio;
};

// Independent enumeration of the admissible candidates at a node.
inline std::vector<OracleCandidate> oracle_candidates(const AnnotatedTable& t, const std::vector<std::size_t>& rows,
                                                      const std::vector<FeatureKind>& kinds,
                                                      std::size_t min_leaf) {
  std::vector<OracleCandidate> out;
  double P = 0, Nn = 0;
  for (auto r : rows) (t[r].label == Label::kPositive ? P : Nn) += 1;
  const double total = P + Nn;
  for (std::size_t f = 0; f < kinds.size(); ++f) {
    if (kinds[f] == FeatureKind::kCategorical) {
      std::map<std::string, std::pair<double, double>> parts;
      for (auto r : rows) {
        const auto& v = t[r].values[f];
        std::string key = v ? "v" + std::to_string(static_cast<int>(v->tag())) + ":" + v->to_display() : "missing";
        (t[r].label == Label::kPositive ? parts[key].first : parts[key].second) += 1;
      }
      std::size_t big = 0;
      for (auto& [k, c] : parts) big += c.first + c.second >= static_cast<double>(min_leaf);
      if (parts.size() < 2 || big < 2) continue;
      double rem = 0, si = 0;
      for (auto& [k, c] : parts) {
        double w = (c.first + c.second) / total;
        rem += w * oracle_entropy(c.first, c.second);
        si -= w * std::log2(w);
      }
      double gain = oracle_entropy(P, Nn) - rem;
      out.push_back({f, NAN, gain, si > 0 ? gain / si : 0});
      continue;
    }
    std::vector<std::pair<double, Label>> known;
    double unknown = 0;
    for (auto r : rows) {
      const auto& v = t[r].values[f];
      if (v && v->numeric()) {
        known.emplace_back(*v->numeric(), t[r].label);
      } else {
        unknown += 1;
      }
    }
    std::set<double> distinct;
    for (auto& k : known) distinct.insert(k.first);
    std::vector<double> sorted(distinct.begin(), distinct.end());
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      double th = (sorted[i] + sorted[i + 1]) / 2;
      double lp = 0, ln = 0, rp = 0, rn = 0;
      for (auto& [x, l] : known) {
        bool left = x <= sorted[i];
        bool pos = l == Label::kPositive;
        (left ? (pos ? lp : ln) : (pos ? rp : rn)) += 1;
      }
      if (lp + ln < static_cast<double>(min_leaf) || rp + rn < static_cast<double>(min_leaf)) continue;
      double kt = lp + ln + rp + rn;
      double gain_known = oracle_entropy(lp + rp, ln + rn) - (lp + ln) / kt * oracle_entropy(lp, ln) -
                          (rp + rn) / kt * oracle_entropy(rp, rn);
      double gain = gain_known * kt / total;
      double si = 0;
      for (double part : {lp + ln, rp + rn, unknown}) {
        if (part > 0) si -= part / total * std::log2(part / total);
      }
      out.push_back({f, th, gain, si > 0 ? gain / si : 0});
    }
  }
  return out;
}

// Training rows reaching each node, by replaying the learner's routing.
inline std::vector<std::vector<std::size_t>> node_rows(const DecisionTree& tree, const AnnotatedTable& table) {
  std::vector<std::vector<std::size_t>> rows(tree.nodes().size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::size_t n = 0;
    while (true) {
      rows[n].push_back(r);
      const auto& node = tree.nodes()[n];
      if (node.is_leaf()) break;
      n = node.children[branch_of(*node.split, table[r].values[node.split->feature], node.default_child)];
    }
  }
  return rows;
}

// Re-checks every split chosen by best_split (lookahead splits excluded)
// against the oracle: among candidates reaching the mean positive gain, no
// gain ratio beats the chosen one. Also checks that splittable leaves have no
// positive-gain candidate. Returns a description of the first violation.
inline std::string recheck_splits(const DecisionTree& tree, const AnnotatedTable& table, const TreeParams& params,
                                  std::size_t* checked = nullptr) {
  constexpr double kTol = 1e-9;
  auto rows = node_rows(tree, table);
  std::vector<std::size_t> depth(tree.nodes().size(), 0);
  for (std::size_t n = 0; n < tree.nodes().size(); ++n) {
    for (std::size_t c : tree.nodes()[n].children) depth[c] = depth[n] + 1;
  }
  for (std::size_t n = 0; n < tree.nodes().size(); ++n) {
    const auto& node = tree.nodes()[n];
    if (node.split && node.split->lookahead) continue;
    auto cands = oracle_candidates(table, rows[n], tree.kinds(), std::max<std::size_t>(1, params.min_instances_per_leaf));
    double sum = 0;
    std::size_t positive = 0;
    for (const auto& c : cands) {
      if (c.gain > kTol) {
        sum += c.gain;
        ++positive;
      }
    }
    if (node.is_leaf()) {
      // Leaves created for a reason other than exhausted gain are skipped.
      bool pure = node.leaf.counts.positives() == 0 || node.leaf.counts.negatives() == 0;
      if (pure || rows[n].size() < 2 * std::max<std::size_t>(1, params.min_instances_per_leaf) ||
          depth[n] >= params.max_depth) {
        continue;
      }
      if (positive > 0) return "node " + std::to_string(n) + ": leaf although a positive-gain split exists";
      continue;
    }
    if (checked) ++*checked;
    if (positive == 0) return "node " + std::to_string(n) + ": split without positive-gain candidate";
    const double mean = sum / static_cast<double>(positive);
    double best_ratio = -1;
    for (const auto& c : cands) {
      if (c.gain > kTol && c.gain + kTol >= mean) best_ratio = std::max(best_ratio, c.ratio);
    }
    const Split& s = *node.split;
    const OracleCandidate* mine = nullptr;
    for (const auto& c : cands) {
      bool same = c.feature == s.feature &&
                  (s.kind == FeatureKind::kCategorical ? std::isnan(c.threshold) : c.threshold == s.threshold);
      if (same) mine = &c;
    }
    if (!mine) return "node " + std::to_string(n) + ": chosen split is not an admissible candidate";
    if (std::abs(mine->gain - s.gain) > kTol || std::abs(mine->ratio - s.gain_ratio) > kTol) {
      return "node " + std::to_string(n) + ": reported gain or ratio differs from the oracle";
    }
    if (mine->gain + kTol < mean) return "node " + std::to_string(n) + ": chosen split below the mean gain";
    if (mine->ratio + kTol < best_ratio) return "node " + std::to_string(n) + ": a candidate has higher gain ratio";
  }
  return {};
}

// True when some node splits on a feature whose name matches `attribute`.
inline bool splits_on(const DecisionTree& tree, const SituationFeature& feature) {
  for (const auto& node : tree.nodes()) {
    if (node.split && tree.schema()[node.split->feature] == feature) return true;
  }
  return false;
}

// --- Petri net random walk --------------------------------------------------

// Fires uniformly chosen enabled transitions from the initial marking until
// the final marking is reached; returns the visible labels. Walks longer than
// `max_steps` are restarted.
inline std::vector<std::string> random_fitting_walk(const PetriNet& net, Rng& rng, std::size_t max_steps = 200) {
  while (true) {
    Marking m = net.initial_marking();
    std::vector<std::string> labels;
    for (std::size_t step = 0; step < max_steps; ++step) {
      if (m == net.final_marking()) return labels;
      std::vector<std::size_t> enabled;
      for (std::size_t t = 0; t < net.transitions().size(); ++t) {
        if (net.enabled(m, t)) enabled.push_back(t);
      }
      if (enabled.empty()) break;
      std::size_t t = enabled[rng.below(enabled.size())];
      net.fire(m, t);
      if (!net.transitions()[t].silent()) labels.push_back(*net.transitions()[t].label);
    }
  }
}

// --- statistics -------------------------------------------------------------

inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = (static_cast<double>(i + j) / 2.0) + 1.0;
    i = j + 1;
  }
  return rank;
}

// Spearman rank correlation with average ranks for ties; NaN if either
// series is constant.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto rx = average_ranks(x), ry = average_ranks(y);
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n, my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return NAN;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace fairpm::testing
