#include "fairpm/annotated_table.hpp"

#include <cmath>
#include <numeric>

#include "fairpm/csv.hpp"
#include "fairpm/error.hpp"
#include "fairpm/random.hpp"

namespace fairpm {

AnnotatedTable::AnnotatedTable(ExtractionPlan schema, std::vector<Instance> instances)
    : schema_(std::move(schema)), instances_(std::move(instances)) {
  for (std::size_t i = 0; i < instances_.size(); ++i) {
    if (instances_[i].values.size() != schema_.size()) {
      throw Error("instance " + std::to_string(i) + " has " +
                  std::to_string(instances_[i].values.size()) + " values, schema has " +
                  std::to_string(schema_.size()));
    }
  }
}

GroupCounts AnnotatedTable::counts() const {
  GroupCounts c;
  for (const Instance& inst : instances_) {
    bool positive = inst.label == Label::kPositive;
    if (inst.group == Group::kFavorable) {
      ++c.favorable;
      c.favorable_positive += positive;
    } else {
      ++c.deprived;
      c.deprived_positive += positive;
    }
  }
  return c;
}

AnnotatedTable build_annotated_table(const EventLog& log, const SituationSpecification& spec) {
  spec.validate();
  auto situations = derive_situations(log, spec.label.feature.anchor);
  std::vector<Instance> instances;
  instances.reserve(situations.size());
  std::size_t dropped = 0;
  for (const Situation& s : situations) {
    auto sensitive = eval_feature(spec.sensitive.feature, s);
    auto label_value = eval_feature(spec.label.feature, s);
    std::optional<Label> label;
    if (label_value) label = spec.label(*label_value);
    if (!sensitive || !label) {
      ++dropped;
      continue;
    }
    Instance inst;
    inst.values.reserve(spec.plan.size());
    for (const auto& f : spec.plan.features()) inst.values.push_back(eval_feature(f, s));
    inst.group = spec.sensitive(*sensitive);
    inst.label = *label;
    inst.source = SituationRef{s.trace_index(), s.length()};
    instances.push_back(std::move(inst));
  }
  AnnotatedTable table(spec.plan, std::move(instances));
  table.set_dropped(dropped);
  if (table.empty()) {
    throw Error("annotated table is empty: " + std::to_string(situations.size()) +
                " situations, " + std::to_string(dropped) + " dropped for missing sensitive/class values");
  }
  auto c = table.counts();
  if (c.favorable == 0 || c.deprived == 0) {
    throw Error(std::string("annotated table contains only the ") +
                (c.favorable == 0 ? "deprived" : "favorable") +
                " group; discrimination is undefined");
  }
  return table;
}

std::pair<AnnotatedTable, AnnotatedTable> split_table(const AnnotatedTable& table,
                                                      double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train fraction must lie in (0, 1)");
  }
  const std::size_t n = table.size();
  // The epsilon absorbs representation error, e.g. 0.6 * 5.
  auto train_size = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
  if (train_size == 0 || train_size >= n) {
    throw Error("split of " + std::to_string(n) + " instances leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<Instance> train, test;
  train.reserve(train_size);
  test.reserve(n - train_size);
  for (std::size_t i = 0; i < n; ++i) {
    (i < train_size ? train : test).push_back(table[order[i]]);
  }
  return {AnnotatedTable(table.schema(), std::move(train)),
          AnnotatedTable(table.schema(), std::move(test))};
}

void write_table_csv(const AnnotatedTable& table, std::ostream& out) {
  csv::Row header;
  for (const auto& f : table.schema().features()) header.push_back(f.name());
  header.push_back("sensitive");
  header.push_back("label");
  csv::write_row(out, header);
  for (const Instance& inst : table.instances()) {
    csv::Row row;
    row.reserve(header.size());
    for (const auto& v : inst.values) row.push_back(v ? v->to_display() : std::string{});
    row.emplace_back(to_string(inst.group));
    row.emplace_back(to_string(inst.label));
    csv::write_row(out, row);
  }
}

AnnotatedTable read_table_csv(std::string_view text) {
  auto rows = csv::read(text);
  if (rows.empty()) throw ParseError("table CSV: missing header");
  const csv::Row& header = rows.front();
  if (header.size() < 3 || header[header.size() - 2] != "sensitive" || header.back() != "label") {
    throw ParseError("table CSV: header must end with sensitive,label after at least one feature", 1, 1);
  }
  std::vector<SituationFeature> features;
  for (std::size_t c = 0; c + 2 < header.size(); ++c) features.push_back(SituationFeature::from_name(header[c]));
  ExtractionPlan plan(std::move(features));

  std::vector<Instance> instances;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    if (row.size() != header.size()) {
      throw ParseError("table CSV: row " + std::to_string(r) + " has " + std::to_string(row.size()) + " fields",
                       r + 1, 1);
    }
    Instance inst;
    for (std::size_t c = 0; c < plan.size(); ++c) {
      if (row[c].empty()) {
        inst.values.emplace_back();
      } else {
        inst.values.emplace_back(infer_value(row[c]));
      }
    }
    const std::string& g = row[row.size() - 2];
    const std::string& l = row.back();
    if (g == "favorable") {
      inst.group = Group::kFavorable;
    } else if (g == "deprived") {
      inst.group = Group::kDeprived;
    } else {
      throw ParseError("table CSV: row " + std::to_string(r) + " has sensitive '" + g + "'", r + 1, 1);
    }
    if (l == "+") {
      inst.label = Label::kPositive;
    } else if (l == "-") {
      inst.label = Label::kNegative;
    } else {
      throw ParseError("table CSV: row " + std::to_string(r) + " has label '" + l + "'", r + 1, 1);
    }
    instances.push_back(std::move(inst));
  }
  return AnnotatedTable(std::move(plan), std::move(instances));
}

}  // namespace fairpm
