#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "fairpm/annotated_table.hpp"
#include "fairpm/decision_tree.hpp"
#include "fairpm/fairness.hpp"
#include "fairpm/specification.hpp"

namespace fairpm {

struct InjectionSpec {
  std::vector<double> levels;
  std::uint64_t seed = 0;
  std::size_t repeats = 5;

  // Throws Error unless levels are non-empty, strictly increasing, inside
  // [0, 1) and repeats is positive.
  void validate() const;
};

struct InjectionResult {
  AnnotatedTable table;
  DiscReport achieved;
  double flip_probability = 0.0;
  std::size_t flipped = 0;
};

// Lowers the deprived group's positive rate to p_f - target by turning each
// deprived + label into - with probability (p_d - p_d') / p_d. Throws Error
// when the target needs a negative rate (naming the largest reachable level)
// or lies below the current disc.
InjectionResult inject_discrimination(const AnnotatedTable& table, double target, std::uint64_t seed);

struct ExperimentParams {
  TreeParams tree;
  double granularity = 1e-3;
  DiscConstraint constraint = DiscConstraint::kSigned;
  double train_fraction = 0.6;
};

// Test-split metrics form the report; the training-side values back the
// threshold and monotonicity checks.
struct ExperimentRow {
  double level = 0.0;  // injected level, or the data disc in an epsilon sweep
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double disc_data = 0.0;  // measured on the full (injected) table
  double disc_standard = 0.0;
  double disc_fair = 0.0;
  double acc_standard = 0.0;
  double acc_fair = 0.0;

  Rational disc_standard_train;
  Rational disc_fair_train;
  Rational acc_standard_train;
  Rational acc_fair_train;
  bool feasible = true;
  bool reverse_discrimination = false;
  std::size_t relabeled = 0;
};

// Called once per row with both trees, e.g. to write DOT files.
using TreeObserver = std::function<void(const ExperimentRow&, const DecisionTree& standard,
                                        const DecisionTree& fair)>;

// Standard and fair tree on one split; epsilon and relabel mode come from
// `spec`.
ExperimentRow run_experiment(const AnnotatedTable& train, const AnnotatedTable& test,
                             const SituationSpecification& spec, const ExperimentParams& params,
                             const TreeObserver& observer = {});

// For every level and repeat i (seed + i): inject, split, grow, relabel,
// measure. Rows are ordered by (level, seed).
std::vector<ExperimentRow> run_sweep(const AnnotatedTable& table, const SituationSpecification& spec,
                                     const InjectionSpec& injection, const ExperimentParams& params,
                                     const TreeObserver& observer = {});

// One split and one standard tree, relabeled once per epsilon.
std::vector<ExperimentRow> run_epsilon_sweep(const AnnotatedTable& table, const SituationSpecification& spec,
                                             const std::vector<double>& epsilons, std::uint64_t seed,
                                             const ExperimentParams& params, const TreeObserver& observer = {});

// Header level,seed,disc_data,disc_standard,disc_fair,acc_standard,acc_fair.
void write_report(const std::vector<ExperimentRow>& rows, std::ostream& out);
// Same columns with epsilon in place of level.
void write_epsilon_report(const std::vector<ExperimentRow>& rows, std::ostream& out);

// level_{L}_seed_{S}_{standard|fair}.dot
std::string dot_filename(double level, std::uint64_t seed, bool fair);

}  // namespace fairpm
