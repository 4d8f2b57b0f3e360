#include "fairpm/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "fairpm/error.hpp"

namespace fairpm {

DiscReport disc_from_counts(const GroupCounts& c) {
  if (c.favorable == 0 || c.deprived == 0) {
    throw Error(std::string("discrimination undefined: the ") + (c.favorable == 0 ? "favorable" : "deprived") +
                " group is empty");
  }
  DiscReport r;
  r.favorable = c.favorable;
  r.deprived = c.deprived;
  r.favorable_rate = Rational(c.favorable_positive, c.favorable);
  r.deprived_rate = Rational(c.deprived_positive, c.deprived);
  r.disc = r.favorable_rate - r.deprived_rate;
  return r;
}

DiscReport disc_data(const AnnotatedTable& table) { return disc_from_counts(table.counts()); }

DiscReport disc_classifier(const DecisionTree& tree, const AnnotatedTable& table) {
  GroupCounts c;
  for (const Instance& inst : table.instances()) {
    bool positive = tree.predict(inst.values) == Label::kPositive;
    if (inst.group == Group::kFavorable) {
      ++c.favorable;
      c.favorable_positive += positive;
    } else {
      ++c.deprived;
      c.deprived_positive += positive;
    }
  }
  return disc_from_counts(c);
}

std::vector<RelabelCandidate> enumerate_candidates(const DecisionTree& tree, RelabelMode mode, DiscGoal goal) {
  std::int64_t F = 0, D = 0, N = 0;
  auto leaves = tree.leaves();
  for (const Leaf* l : leaves) {
    F += l->counts.favorable();
    D += l->counts.deprived();
    N += l->counts.total();
  }
  std::vector<RelabelCandidate> out;
  if (F == 0 || D == 0) return out;
  for (const Leaf* l : leaves) {
    const LeafCounts& c = l->counts;
    Direction dir = l->label == Label::kNegative ? Direction::kNegToPos : Direction::kPosToNeg;
    if (mode == RelabelMode::kNegToPos && dir != Direction::kNegToPos) continue;
    if (mode == RelabelMode::kPosToNeg && dir != Direction::kPosToNeg) continue;
    Rational dd = Rational(c.favorable(), F) - Rational(c.deprived(), D);
    Rational da(c.positives() - c.negatives(), N);
    std::int64_t loss = std::max<std::int64_t>(0, c.negatives() - c.positives());
    if (dir == Direction::kPosToNeg) {
      dd = -dd;
      da = -da;
      loss = std::max<std::int64_t>(0, c.positives() - c.negatives());
    }
    bool progress = goal == DiscGoal::kReduce ? dd < 0 : dd > 0;
    if (!progress) continue;
    out.push_back({l->id, dir, dd, da, loss});
  }
  return out;
}

std::set<int> RelabelPlan::leaf_ids() const {
  std::set<int> ids;
  for (const auto& c : chosen) ids.insert(c.leaf_id);
  return ids;
}

RelabelProblem make_relabel_problem(const DecisionTree& tree, const AnnotatedTable& train, RelabelMode mode,
                                    const RelabelOptions& options) {
  RelabelProblem p;
  p.base_disc = disc_classifier(tree, train).disc;
  p.base_accuracy = exact_accuracy(tree, train);
  p.training_size = static_cast<std::int64_t>(train.size());
  DiscGoal goal = DiscGoal::kReduce;
  if (options.constraint == DiscConstraint::kAbsolute && p.base_disc < -decimal_rational(options.epsilon)) {
    goal = DiscGoal::kIncrease;
  }
  p.candidates = enumerate_candidates(tree, mode, goal);
  return p;
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

void validate_options(const RelabelOptions& o) {
  if (!(o.epsilon >= 0.0) || !std::isfinite(o.epsilon)) throw Error("epsilon must be a non-negative number");
  if (!(o.granularity > 0.0) || !(o.granularity <= 1.0)) throw Error("granularity must lie in (0, 1]");
}

// The problem in reduction form: every item lowers disc by `gain` > 0 and
// the target is disc <= epsilon (or within [-epsilon, epsilon]).
struct Reduced {
  Rational base;
  Rational epsilon;
  std::vector<Rational> gain;
  std::vector<std::int64_t> cost;
  bool absolute = false;
};

Reduced reduce(const RelabelProblem& p, const RelabelOptions& o) {
  Reduced r;
  r.epsilon = decimal_rational(o.epsilon);
  r.absolute = o.constraint == DiscConstraint::kAbsolute;
  // Under |disc| with disc far below zero, mirror so progress means reduction.
  bool mirror = r.absolute && p.base_disc < -r.epsilon;
  r.base = mirror ? Rational(-p.base_disc) : p.base_disc;
  for (const auto& c : p.candidates) {
    Rational g = mirror ? c.delta_disc : Rational(-c.delta_disc);
    if (g <= 0) throw Error("relabel candidate for leaf " + std::to_string(c.leaf_id) + " makes no progress");
    r.gain.push_back(g);
    r.cost.push_back(c.loss_instances);
  }
  return r;
}

bool satisfied(const Reduced& r, const Rational& total_gain) {
  Rational after = r.base - total_gain;
  if (after > r.epsilon) return false;
  return !r.absolute || after >= -r.epsilon;
}

RelabelPlan make_plan(const RelabelProblem& p, const RelabelOptions& o, std::vector<std::size_t> items,
                      bool feasible, double granularity) {
  std::sort(items.begin(), items.end());
  RelabelPlan plan;
  plan.predicted_disc = p.base_disc;
  plan.predicted_accuracy = p.base_accuracy;
  for (std::size_t i : items) {
    const auto& c = p.candidates[i];
    plan.chosen.push_back(c);
    plan.predicted_disc += c.delta_disc;
    plan.predicted_accuracy += c.delta_acc;
    plan.loss_instances += c.loss_instances;
  }
  plan.feasible = feasible;
  plan.granularity = granularity;
  plan.reverse_discrimination = plan.predicted_disc < -decimal_rational(o.epsilon);
  return plan;
}

std::vector<std::size_t> all_items(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

Rational total_gain(const Reduced& r, const std::vector<std::size_t>& items) {
  Rational s = 0;
  for (std::size_t i : items) s += r.gain[i];
  return s;
}

std::int64_t total_cost(const Reduced& r, const std::vector<std::size_t>& items) {
  std::int64_t s = 0;
  for (std::size_t i : items) s += r.cost[i];
  return s;
}

struct DpResult {
  bool found = false;
  std::int64_t cost = 0;
  std::vector<std::size_t> items;
};

// Minimum-cost set of items whose integer weights sum to at least `need`.
// Sums beyond `need` are clamped to it, so the state space is need + 1.
DpResult covering_dp(const std::vector<std::int64_t>& w, const std::vector<std::int64_t>& cost,
                     std::int64_t need) {
  DpResult res;
  if (need <= 0) {
    res.found = true;
    return res;
  }
  const std::size_t n = w.size();
  const auto states = static_cast<std::size_t>(need) + 1;
  std::vector<std::int64_t> best(states, kInf);
  best[0] = 0;
  std::vector<bool> take(n * states, false);
  std::vector<std::int64_t> pred_full(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] <= 0) continue;
    for (std::int64_t r = need; r >= 0; --r) {
      if (best[r] == kInf) continue;
      std::int64_t r2 = std::min(need, r + w[i]);
      if (r2 == r) continue;
      std::int64_t c = best[r] + cost[i];
      if (c < best[r2]) {
        best[r2] = c;
        take[i * states + static_cast<std::size_t>(r2)] = true;
        if (r2 == need) pred_full[i] = r;
      }
    }
  }
  if (best[need] == kInf) return res;
  res.found = true;
  res.cost = best[need];
  std::int64_t r = need;
  for (std::size_t i = n; i-- > 0 && r > 0;) {
    if (!take[i * states + static_cast<std::size_t>(r)]) continue;
    res.items.push_back(i);
    r = r == need ? pred_full[i] : r - w[i];
  }
  return res;
}

// Minimum-cost set whose weights sum into [lo, hi] (no clamping); ties go to
// the smallest sum. When nothing lands in range, `fallback_target` selects
// the reachable sum nearest to it instead and `found` stays false.
DpResult window_dp(const std::vector<std::int64_t>& w, const std::vector<std::int64_t>& cost, std::int64_t lo,
                   std::int64_t hi, const Rational& fallback_target) {
  DpResult res;
  hi = std::max<std::int64_t>(hi, 0);
  const std::size_t n = w.size();
  const auto states = static_cast<std::size_t>(hi) + 1;
  std::vector<std::int64_t> best(states, kInf);
  best[0] = 0;
  std::vector<bool> take(n * states, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] <= 0) continue;
    for (std::int64_t r = hi - w[i]; r >= 0; --r) {
      if (best[r] == kInf) continue;
      std::int64_t c = best[r] + cost[i];
      if (c < best[r + w[i]]) {
        best[r + w[i]] = c;
        take[i * states + static_cast<std::size_t>(r + w[i])] = true;
      }
    }
  }
  std::int64_t pick = -1;
  for (std::int64_t r = std::max<std::int64_t>(lo, 0); r <= hi; ++r) {
    if (best[r] != kInf && (pick < 0 || best[r] < best[pick])) pick = r;
  }
  res.found = pick >= 0;
  if (!res.found) {
    for (std::int64_t r = 0; r <= hi; ++r) {
      if (best[r] == kInf) continue;
      if (pick < 0) {
        pick = r;
        continue;
      }
      auto d_new = abs(fallback_target - r), d_old = abs(fallback_target - pick);
      if (d_new < d_old || (d_new == d_old && best[r] < best[pick])) pick = r;
    }
  }
  res.cost = best[pick];
  std::int64_t r = pick;
  for (std::size_t i = n; i-- > 0 && r > 0;) {
    if (!take[i * states + static_cast<std::size_t>(r)]) continue;
    res.items.push_back(i);
    r -= w[i];
  }
  return res;
}

// Exact minimum-cost covering set by knapsack over integer costs, maximising
// the exact gain for each budget. Returns nothing if the table is too large.
std::optional<std::vector<std::size_t>> exact_covering(const Reduced& r, const Rational& need) {
  using boost::multiprecision::cpp_int;
  const std::size_t n = r.gain.size();
  std::int64_t budget = 0;
  for (auto c : r.cost) budget += c;
  if (static_cast<double>(n) * static_cast<double>(budget + 1) > 2e7) return std::nullopt;
  cpp_int scale = 1;
  for (const auto& g : r.gain) scale = lcm(scale, cpp_int(denominator(g)));
  std::vector<cpp_int> value(n);
  for (std::size_t i = 0; i < n; ++i) value[i] = numerator(r.gain[i]) * (scale / denominator(r.gain[i]));
  const auto states = static_cast<std::size_t>(budget) + 1;
  std::vector<cpp_int> best(states, cpp_int(-1));
  best[0] = 0;
  std::vector<bool> take(n * states, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::int64_t b = budget - r.cost[i]; b >= 0; --b) {
      if (best[b] < 0) continue;
      auto b2 = static_cast<std::size_t>(b + r.cost[i]);
      cpp_int v = best[b] + value[i];
      if (v > best[b2]) {
        best[b2] = v;
        take[i * states + b2] = true;
      }
    }
  }
  Rational need_scaled = need * Rational(scale);
  for (std::int64_t b = 0; b <= budget; ++b) {
    if (best[b] < 0 || Rational(best[b]) < need_scaled) continue;
    std::vector<std::size_t> items;
    std::int64_t s = b;
    for (std::size_t i = n; i-- > 0;) {
      if (!take[i * states + static_cast<std::size_t>(s)]) continue;
      items.push_back(i);
      s -= r.cost[i];
    }
    return items;
  }
  return std::nullopt;
}

std::vector<std::int64_t> scaled_weights(const Reduced& r, std::int64_t K, bool round_up) {
  std::vector<std::int64_t> w;
  w.reserve(r.gain.size());
  for (const auto& g : r.gain) w.push_back(round_up ? ceil_int(g * K) : floor_int(g * K));
  return w;
}

std::int64_t snap_units(double granularity) {
  return std::max<std::int64_t>(1, std::llround(1.0 / granularity));
}

RelabelPlan select_signed(const RelabelProblem& p, const RelabelOptions& o, const Reduced& r) {
  const Rational need = r.base - r.epsilon;
  std::int64_t K = snap_units(o.granularity);
  std::optional<DpResult> best;
  double best_g = 0.0;
  for (int level = 0; level < 3; ++level, K *= 10) {
    const double g = 1.0 / static_cast<double>(K);
    const std::int64_t need_units = ceil_int(need * K);
    DpResult low = covering_dp(scaled_weights(r, K, true), r.cost, need_units);
    if (!low.found) break;  // even the relaxation fails: nothing is feasible
    if (satisfied(r, total_gain(r, low.items))) return make_plan(p, o, low.items, true, g);
    DpResult safe = covering_dp(scaled_weights(r, K, false), r.cost, need_units);
    if (safe.found) {
      if (!best || safe.cost < best->cost) {
        best = safe;
        best_g = g;
      }
      if (safe.cost == low.cost) return make_plan(p, o, safe.items, true, g);
    }
  }
  auto everything = all_items(r.gain.size());
  if (!satisfied(r, total_gain(r, everything))) return make_plan(p, o, everything, false, best_g);
  if (auto exact = exact_covering(r, need)) {
    if (!best || total_cost(r, *exact) < best->cost) return make_plan(p, o, *exact, true, 0.0);
  }
  if (best) return make_plan(p, o, best->items, true, best_g);
  return make_plan(p, o, everything, true, 0.0);
}

RelabelPlan select_absolute(const RelabelProblem& p, const RelabelOptions& o, const Reduced& r) {
  std::int64_t K = snap_units(o.granularity);
  DpResult last;
  double last_g = 0.0;
  for (int level = 0; level < 3; ++level, K *= 10) {
    const double g = 1.0 / static_cast<double>(K);
    auto w = scaled_weights(r, K, false);
    std::int64_t lo = ceil_int((r.base - r.epsilon) * K);
    // Rounded-down weights never overstate the reduction, so the lower end
    // of the window is safe; the upper end is verified exactly.
    std::int64_t hi = floor_int((r.base + r.epsilon) * K);
    DpResult res = window_dp(w, r.cost, lo, hi, r.base * K);
    if (res.found && satisfied(r, total_gain(r, res.items))) return make_plan(p, o, res.items, true, g);
    last = res;
    last_g = g;
  }
  return make_plan(p, o, last.items, false, last_g);
}

std::vector<std::size_t> greedy_order(const RelabelProblem& p) {
  // Candidates that cost no accuracy rank ahead of all others, by disc gain.
  const Rational unit = p.training_size > 0 ? Rational(1, p.training_size) : Rational(1);
  std::vector<Rational> ratio;
  std::vector<bool> free;
  for (const auto& c : p.candidates) {
    free.push_back(c.delta_acc >= 0);
    Rational denom = std::max(Rational(-c.delta_acc), unit);
    ratio.push_back(Rational(abs(c.delta_disc)) / denom);
  }
  auto order = all_items(p.candidates.size());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (free[a] != free[b]) return bool(free[a]);
    if (ratio[a] != ratio[b]) return ratio[a] > ratio[b];
    return p.candidates[a].leaf_id < p.candidates[b].leaf_id;
  });
  return order;
}

}  // namespace

RelabelPlan select_relabeling(const RelabelProblem& problem, const RelabelOptions& options) {
  validate_options(options);
  Reduced r = reduce(problem, options);
  if (satisfied(r, 0)) return make_plan(problem, options, {}, true, 0.0);
  if (r.absolute) return select_absolute(problem, options, r);
  return select_signed(problem, options, r);
}

RelabelPlan select_relabeling_greedy(const RelabelProblem& problem, const RelabelOptions& options) {
  validate_options(options);
  Reduced r = reduce(problem, options);
  if (satisfied(r, 0)) return make_plan(problem, options, {}, true, 0.0);
  std::vector<std::size_t> taken;
  Rational gain = 0;
  for (std::size_t i : greedy_order(problem)) {
    taken.push_back(i);
    gain += r.gain[i];
    if (satisfied(r, gain)) return make_plan(problem, options, taken, true, 0.0);
  }
  return make_plan(problem, options, taken, false, 0.0);
}

RelabelPlan select_relabeling_exhaustive(const RelabelProblem& problem, const RelabelOptions& options) {
  validate_options(options);
  Reduced r = reduce(problem, options);
  const std::size_t n = r.gain.size();
  if (n > 24) throw Error("exhaustive relabel search limited to 24 candidates");
  std::optional<std::uint32_t> best_feasible;
  std::int64_t best_cost = 0;
  std::uint32_t closest = 0;
  Rational closest_after = r.base;
  std::int64_t closest_cost = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Rational gain = 0;
    std::int64_t cost = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        gain += r.gain[i];
        cost += r.cost[i];
      }
    }
    if (satisfied(r, gain)) {
      if (!best_feasible || cost < best_cost) {
        best_feasible = mask;
        best_cost = cost;
      }
      continue;
    }
    Rational after = r.base - gain;
    Rational score = r.absolute ? Rational(abs(after)) : after;
    Rational old = r.absolute ? Rational(abs(closest_after)) : closest_after;
    if (score < old || (score == old && cost < closest_cost)) {
      closest = mask;
      closest_after = after;
      closest_cost = cost;
    }
  }
  std::uint32_t mask = best_feasible ? *best_feasible : closest;
  std::vector<std::size_t> items;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1u) items.push_back(i);
  }
  return make_plan(problem, options, items, best_feasible.has_value(), 0.0);
}

DecisionTree apply_relabeling(const DecisionTree& tree, const RelabelPlan& plan) {
  std::set<int> ids;
  for (const auto& c : plan.chosen) {
    if (c.leaf_id < 0 || static_cast<std::size_t>(c.leaf_id) >= tree.leaf_count()) {
      throw Error("relabel plan names unknown leaf " + std::to_string(c.leaf_id));
    }
    Label expected = c.direction == Direction::kNegToPos ? Label::kNegative : Label::kPositive;
    if (tree.leaf(c.leaf_id).label != expected) {
      throw Error("relabel plan direction does not match the label of leaf " + std::to_string(c.leaf_id));
    }
    ids.insert(c.leaf_id);
  }
  return tree.with_flipped_leaves(ids);
}

namespace {

std::string exact_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) s += "/" + denominator(r).str();
  return s;
}

}  // namespace

nlohmann::json to_json(const DiscReport& report) {
  return {
      {"disc", report.value()},
      {"disc_exact", exact_string(report.disc)},
      {"favorable_positive_rate", to_double(report.favorable_rate)},
      {"deprived_positive_rate", to_double(report.deprived_rate)},
      {"favorable", report.favorable},
      {"deprived", report.deprived},
  };
}

nlohmann::json to_json(const RelabelPlan& plan) {
  nlohmann::json chosen = nlohmann::json::array();
  for (const auto& c : plan.chosen) {
    chosen.push_back({
        {"leaf", c.leaf_id},
        {"direction", c.direction == Direction::kNegToPos ? "-to+" : "+to-"},
        {"delta_disc", to_double(c.delta_disc)},
        {"delta_acc", to_double(c.delta_acc)},
        {"loss_instances", c.loss_instances},
    });
  }
  return {
      {"chosen", chosen},
      {"predicted_disc", to_double(plan.predicted_disc)},
      {"predicted_disc_exact", exact_string(plan.predicted_disc)},
      {"predicted_accuracy", to_double(plan.predicted_accuracy)},
      {"predicted_accuracy_exact", exact_string(plan.predicted_accuracy)},
      {"loss_instances", plan.loss_instances},
      {"feasible", plan.feasible},
      {"reverse_discrimination", plan.reverse_discrimination},
      {"granularity", plan.granularity},
  };
}

}  // namespace fairpm
