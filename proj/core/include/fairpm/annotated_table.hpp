#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "fairpm/event_log.hpp"
#include "fairpm/labels.hpp"
#include "fairpm/situation.hpp"
#include "fairpm/specification.hpp"

namespace fairpm {

struct SituationRef {
  std::size_t trace_index = 0;
  std::size_t prefix_length = 0;
};

struct Instance {
  std::vector<OptionalValue> values;  // one per plan feature, empty = ⊥
  Group group = Group::kFavorable;
  Label label = Label::kPositive;
  std::optional<SituationRef> source;
};

struct GroupCounts {
  std::int64_t favorable = 0;
  std::int64_t deprived = 0;
  std::int64_t favorable_positive = 0;
  std::int64_t deprived_positive = 0;
};

// Annotated situation table: independent feature values plus sensitive group
// and class label for every situation.
class AnnotatedTable {
 public:
  AnnotatedTable(ExtractionPlan schema, std::vector<Instance> instances);

  const ExtractionPlan& schema() const { return schema_; }
  const std::vector<Instance>& instances() const { return instances_; }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }

  GroupCounts counts() const;

  // Situations dropped during extraction because the sensitive or class
  // feature evaluated to ⊥.
  std::size_t dropped() const { return dropped_; }
  void set_dropped(std::size_t n) { dropped_ = n; }

 private:
  ExtractionPlan schema_;
  std::vector<Instance> instances_;
  std::size_t dropped_ = 0;
};

// Picks S_{L,⊥} or S_{L,act} from the class feature's anchor and evaluates
// every situation. Throws Error if nothing survives or only one sensitive
// group is present.
AnnotatedTable build_annotated_table(const EventLog& log, const SituationSpecification& spec);

// Seeded shuffle; the first ceil(fraction * N) instances form the training
// part. Throws Error if either part would be empty.
std::pair<AnnotatedTable, AnnotatedTable> split_table(const AnnotatedTable& table,
                                                      double train_fraction, std::uint64_t seed);

// Header: feature names, "sensitive", "label". ⊥ is an empty field; groups
// are favorable/deprived and labels +/-.
void write_table_csv(const AnnotatedTable& table, std::ostream& out);
// Cell types are inferred (see infer_value).
AnnotatedTable read_table_csv(std::string_view text);

}  // namespace fairpm
