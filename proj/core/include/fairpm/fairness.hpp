#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fairpm/annotated_table.hpp"
#include "fairpm/decision_tree.hpp"
#include "fairpm/labels.hpp"
#include "fairpm/rational.hpp"

namespace fairpm {

// Demographic parity: positive rate of the favorable group minus positive
// rate of the deprived group.
struct DiscReport {
  Rational disc;
  Rational favorable_rate;
  Rational deprived_rate;
  std::int64_t favorable = 0;
  std::int64_t deprived = 0;

  double value() const { return to_double(disc); }
};

// Throws Error when either group is empty.
DiscReport disc_from_counts(const GroupCounts& counts);
DiscReport disc_data(const AnnotatedTable& table);
DiscReport disc_classifier(const DecisionTree& tree, const AnnotatedTable& table);

enum class Direction { kNegToPos, kPosToNeg };

struct RelabelCandidate {
  int leaf_id = 0;
  Direction direction = Direction::kNegToPos;
  Rational delta_disc;
  Rational delta_acc;
  // max(0, -delta_acc) expressed in training instances.
  std::int64_t loss_instances = 0;
};

// Which sign of delta-disc counts as progress.
enum class DiscGoal { kReduce, kIncrease };

// One candidate per leaf whose label is the mode's source label, with deltas
// derived from the leaf's training counts. Candidates that make no progress
// toward the goal are left out.
std::vector<RelabelCandidate> enumerate_candidates(const DecisionTree& tree, RelabelMode mode,
                                                   DiscGoal goal = DiscGoal::kReduce);

enum class DiscConstraint {
  kSigned,    // disc <= epsilon
  kAbsolute,  // |disc| <= epsilon
};

struct RelabelOptions {
  double epsilon = 0.05;
  double granularity = 1e-3;
  DiscConstraint constraint = DiscConstraint::kSigned;
};

struct RelabelProblem {
  Rational base_disc;
  Rational base_accuracy;
  std::int64_t training_size = 0;
  std::vector<RelabelCandidate> candidates;
};

struct RelabelPlan {
  std::vector<RelabelCandidate> chosen;
  Rational predicted_disc;
  Rational predicted_accuracy;
  std::int64_t loss_instances = 0;
  bool feasible = true;
  // Resulting disc below -epsilon: the favorable group is now disadvantaged.
  bool reverse_discrimination = false;
  // Granularity of the pass that produced the plan; 0 when no DP ran.
  double granularity = 0.0;

  std::set<int> leaf_ids() const;
};

// Base disc/accuracy on the training table plus candidates for `mode`. The
// goal is chosen from the sign of the base disc under an absolute
// constraint, and is always kReduce for a signed one.
RelabelProblem make_relabel_problem(const DecisionTree& tree, const AnnotatedTable& train,
                                    RelabelMode mode, const RelabelOptions& options);

// Minimum-loss leaf set meeting the constraint, by dynamic programming over
// disc units of size `granularity` (snapped to 1/K for an integer K). One
// pass rounds each delta away from zero and bounds the optimum from below;
// its plan is returned when it is exactly feasible. A second pass rounds
// toward zero, so its plans are always feasible. When the two disagree the
// DP re-runs at granularity/10, at most twice, and then an exact
// cost-indexed search settles the remaining gap where it is small enough.
// If no subset meets the constraint, every candidate is taken and the plan
// is marked infeasible.
RelabelPlan select_relabeling(const RelabelProblem& problem, const RelabelOptions& options);

// Reference strategy: candidates without accuracy loss first, then the rest
// in descending order of |delta_disc| / max(loss, 1/N), taken until the
// constraint holds.
RelabelPlan select_relabeling_greedy(const RelabelProblem& problem, const RelabelOptions& options);

// Exhaustive minimum-loss subset; intended for small candidate sets.
RelabelPlan select_relabeling_exhaustive(const RelabelProblem& problem, const RelabelOptions& options);

// New tree with the plan's leaves flipped. Throws Error for unknown leaves or
// a direction that does not match the leaf's current label.
DecisionTree apply_relabeling(const DecisionTree& tree, const RelabelPlan& plan);

nlohmann::json to_json(const DiscReport& report);
nlohmann::json to_json(const RelabelPlan& plan);

}  // namespace fairpm
