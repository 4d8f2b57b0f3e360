#include <sstream>

#include <gtest/gtest.h>

#include "fairpm/annotated_table.hpp"
#include "fairpm/conformance.hpp"
#include "fairpm/enrichment.hpp"
#include "fairpm/error.hpp"
#include "fairpm/random.hpp"
#include "fairpm/specification.hpp"
#include "fairpm/xes.hpp"
#include "support.hpp"

namespace fairpm {
namespace {

Event make_event(const std::string& activity, std::int64_t time, std::uint32_t ordinal, const std::string& resource = "") {
  Event e;
  e.activity = activity;
  e.time = Timestamp{time};
  e.ordinal = ordinal;
  if (!resource.empty()) e.attributes.emplace("resource", resource);
  return e;
}

EventLog aba_log() {
  Trace t;
  t.attributes.emplace("concept:name", "t");
  t.attributes.emplace("channel", "web");
  t.events = {make_event("A", 1, 0, "r1"), make_event("B", 5, 1), make_event("A", 9, 2, "r2")};
  return EventLog({t});
}

SituationFeature trace_feature(const std::string& a) { return {std::nullopt, a}; }
SituationFeature event_feature(const std::string& act, const std::string& a) { return {act, a}; }

TEST(DeriveSituations, TraceLevel) {
  EventLog log = aba_log();
  auto s = derive_situations(log, std::nullopt);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].length(), 3u);
}

TEST(DeriveSituations, ActivityAnchor) {
  EventLog log = aba_log();
  auto s = derive_situations(log, std::string("A"));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].length(), 1u);
  EXPECT_EQ(s[1].length(), 3u);
  for (const auto& x : s) EXPECT_EQ(x.last_event().activity, "A");
}

TEST(DeriveSituations, AbsentAnchor) {
  EventLog log = aba_log();
  EXPECT_TRUE(derive_situations(log, std::string("C")).empty());
}

TEST(EvalFeature, TraceLevel) {
  EventLog log = aba_log();
  auto s = derive_situations(log, std::nullopt);
  EXPECT_EQ(eval_feature(trace_feature("channel"), s[0])->as_text(), "web");
  EXPECT_FALSE(eval_feature(trace_feature("missing"), s[0]));
}

TEST(EvalFeature, LatestOccurrenceWins) {
  EventLog log = aba_log();
  auto s = derive_situations(log, std::nullopt);
  EXPECT_EQ(eval_feature(event_feature("A", "resource"), s[0])->as_text(), "r2");
  auto prefixes = derive_situations(log, std::string("A"));
  EXPECT_EQ(eval_feature(event_feature("A", "resource"), prefixes[0])->as_text(), "r1");
}

TEST(EvalFeature, AbsentActivityOrAttribute) {
  EventLog log = aba_log();
  auto prefixes = derive_situations(log, std::string("A"));
  EXPECT_FALSE(eval_feature(event_feature("B", "resource"), prefixes[0]));
  EXPECT_FALSE(eval_feature(event_feature("B", "resource"), prefixes[1]));
  EXPECT_FALSE(eval_feature(event_feature("C", "resource"), prefixes[1]));
}

EventLog random_log(Rng& rng) {
  std::vector<Trace> traces;
  for (std::uint64_t i = 0, n = 1 + rng.below(6); i < n; ++i) {
    Trace t;
    t.attributes.emplace("concept:name", "t" + std::to_string(i));
    for (std::uint32_t k = 0, m = static_cast<std::uint32_t>(1 + rng.below(7)); k < m; ++k) {
      Event e = make_event(std::string(1, static_cast<char>('A' + rng.below(3))),
                           static_cast<std::int64_t>(rng.below(5)), k);
      if (rng.bernoulli(0.7)) e.attributes.emplace("x", static_cast<std::int64_t>(rng.below(100)));
      t.events.push_back(e);
    }
    t.normalize();
    traces.push_back(t);
  }
  return EventLog(traces);
}

TEST(Situations, PropertiesOnRandomLogs) {
  Rng rng(3);
  for (int round = 0; round < 100; ++round) {
    EventLog log = random_log(rng);
    ASSERT_EQ(derive_situations(log, std::nullopt).size(), log.size());
    for (std::string act : {"A", "B", "C"}) {
      auto s = derive_situations(log, act);
      std::size_t occurrences = 0;
      for (const auto& t : log.traces()) {
        for (const auto& e : t.events) occurrences += e.activity == act;
      }
      ASSERT_EQ(s.size(), occurrences);
      for (const auto& x : s) {
        ASSERT_GT(x.length(), 0u);
        ASSERT_EQ(x.last_event().activity, act);
        const Trace& source = log.traces()[x.trace_index()];
        ASSERT_EQ(x.events().data(), source.events.data());
        // Brute-force oracle for the activity-anchored feature.
        for (std::string f : {"A", "B", "C"}) {
          const Event* best = nullptr;
          for (const auto& e : x.events()) {
            if (e.activity == f && (!best || best->key() < e.key())) best = &e;
          }
          OptionalValue want;
          if (best) want = best->attribute("x");
          ASSERT_EQ(eval_feature(event_feature(f, "x"), x), want);
        }
      }
      // Every full trace whose last event is `act` is one of the maximal prefixes.
      for (std::size_t i = 0; i < log.size(); ++i) {
        const Trace& t = log.traces()[i];
        if (t.events.back().activity != act) continue;
        bool found = false;
        for (const auto& x : s) found |= x.trace_index() == i && x.length() == t.events.size();
        ASSERT_TRUE(found);
      }
    }
  }
}

TEST(Plan, NamesAndValidation) {
  EXPECT_EQ(event_feature("A", "org:resource").name(), "A@org:resource");
  EXPECT_EQ(trace_feature("channel").name(), "channel");
  EXPECT_EQ(SituationFeature::from_name("a@b@c"), event_feature("a@b", "c"));
  EXPECT_EQ(SituationFeature::from_name("channel"), trace_feature("channel"));
  EXPECT_THROW(ExtractionPlan({}), Error);
  EXPECT_THROW(ExtractionPlan({trace_feature("a"), trace_feature("a")}), Error);
  EXPECT_THROW(ExtractionPlan({trace_feature("")}), Error);
}

SituationSpecification claims_spec() { return parse_specification(testing::read_fixture("claims_spec.json")); }

EventLog claims_log() {
  EventLog log = parse_xes(testing::read_fixture("claims.xes"));
  log = enrich_all(log, EnrichmentConfig{});
  return enrich_conformance(log, replay_log(parse_pnml(testing::read_fixture("sequence.pnml")), log,
                                            default_label_map(parse_pnml(testing::read_fixture("sequence.pnml")))));
}

TEST(Specification, ParsesAndRoundTrips) {
  SituationSpecification spec = claims_spec();
  EXPECT_EQ(spec.plan.size(), 3u);
  EXPECT_EQ(spec.sensitive.deprived_values.size(), 2u);
  EXPECT_DOUBLE_EQ(spec.epsilon, 0.05);
  EXPECT_EQ(spec.relabel_mode, RelabelMode::kBoth);
  SituationSpecification again = parse_specification(specification_to_json(spec));
  EXPECT_EQ(again.plan.features(), spec.plan.features());
  EXPECT_EQ(specification_to_json(again), specification_to_json(spec));
}

TEST(Specification, Validation) {
  SituationSpecification spec = claims_spec();
  SituationSpecification bad = spec;
  bad.sensitive.feature = spec.plan[0];
  EXPECT_THROW(bad.validate(), Error);
  bad = spec;
  bad.label.feature = spec.sensitive.feature;
  EXPECT_THROW(bad.validate(), Error);
  bad = spec;
  bad.epsilon = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = spec;
  bad.sensitive.deprived_values.clear();
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_THROW(parse_specification("{\"plan\": []}"), Error);
  EXPECT_THROW(parse_specification("not json"), Error);
}

TEST(Binarizers, TagExactAndThreshold) {
  SituationSpecification spec = claims_spec();
  EXPECT_EQ(spec.sensitive(AttributeValue("erin")), Group::kDeprived);
  EXPECT_EQ(spec.sensitive(AttributeValue("alice")), Group::kFavorable);
  EXPECT_EQ(spec.label(AttributeValue(std::int64_t{86400000})), Label::kPositive);
  EXPECT_EQ(spec.label(AttributeValue(std::int64_t{86400001})), Label::kNegative);
  EXPECT_FALSE(spec.label(AttributeValue("long")));
  ClassBinarizer lt{trace_feature("score"), ThresholdRule{10, Orientation::kLess}};
  EXPECT_EQ(lt(AttributeValue(9.5)), Label::kNegative);
  EXPECT_EQ(lt(AttributeValue(10)), Label::kPositive);
  ClassBinarizer cat{trace_feature("trace:delay"), std::set<AttributeValue, ValueOrder>{AttributeValue("on-time")}};
  EXPECT_EQ(cat(AttributeValue("on-time")), Label::kPositive);
  EXPECT_EQ(cat(AttributeValue("delayed")), Label::kNegative);
}

TEST(AnnotatedTableBuild, FourTraceFixture) {
  AnnotatedTable t = build_annotated_table(claims_log(), claims_spec());
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t.dropped(), 0u);
  // c3 runs 36 hours, beyond the one-day threshold.
  EXPECT_EQ(t[2].label, Label::kNegative);
  EXPECT_EQ(t[0].label, Label::kPositive);
  EXPECT_EQ(t[1].group, Group::kDeprived);
  EXPECT_EQ(t[0].values[1]->as_text(), "r1");
  EXPECT_FALSE(t[1].values[1]);  // c2 has no A
  EXPECT_TRUE(t[1].values[2]->as_boolean());
  GroupCounts c = t.counts();
  EXPECT_EQ(c.favorable, 2);
  EXPECT_EQ(c.deprived, 2);
}

TEST(AnnotatedTableBuild, DropsSituationsWithoutSensitiveValue) {
  EventLog log = claims_log();
  std::vector<Trace> traces = log.release();
  traces[0].attributes.erase("responsible");
  AnnotatedTable t = build_annotated_table(EventLog(traces), claims_spec());
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.dropped(), 1u);
}

TEST(AnnotatedTableBuild, EventAnchoredClass) {
  Trace t1, t2;
  t1.attributes = {{"concept:name", "a"}, {"who", "x"}};
  t2.attributes = {{"concept:name", "b"}, {"who", "y"}};
  t1.events = {make_event("BILLED", 0, 0), make_event("CHECK", 1, 1), make_event("BILLED", 2, 2)};
  t2.events = {make_event("CHECK", 0, 0), make_event("BILLED", 1, 1)};
  for (auto* t : {&t1, &t2}) {
    for (auto& e : t->events) e.attributes.emplace("ok", e.ordinal % 2 == 0);
  }
  SituationSpecification spec{ExtractionPlan({event_feature("CHECK", "ok")}),
                              {trace_feature("who"), {AttributeValue("y")}},
                              {event_feature("BILLED", "ok"), std::set<AttributeValue, ValueOrder>{AttributeValue(true)}},
                              0.05,
                              RelabelMode::kBoth};
  AnnotatedTable table = build_annotated_table(EventLog({t1, t2}), spec);
  ASSERT_EQ(table.size(), 3u);
  EXPECT_FALSE(table[0].values[0]);  // CHECK after the first BILLED
  EXPECT_TRUE(table[1].values[0]);
  for (const auto& inst : table.instances()) ASSERT_TRUE(inst.source);
}

TEST(AnnotatedTableBuild, Errors) {
  SituationSpecification spec = claims_spec();
  spec.sensitive.feature = trace_feature("nobody");
  EXPECT_THROW(build_annotated_table(claims_log(), spec), Error);
  spec = claims_spec();
  spec.sensitive.deprived_values = {AttributeValue("zed")};
  EXPECT_THROW(build_annotated_table(claims_log(), spec), Error);
}

AnnotatedTable numbered(std::size_t n) {
  ExtractionPlan plan({trace_feature("id")});
  std::vector<Instance> rows;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back({{AttributeValue(static_cast<std::int64_t>(i))},
                    i % 2 ? Group::kDeprived : Group::kFavorable,
                    Label::kPositive,
                    std::nullopt});
  }
  return AnnotatedTable(plan, rows);
}

TEST(Split, SizesFollowCeiling) {
  auto [a, b] = split_table(numbered(10), 0.6, 1);
  EXPECT_EQ(a.size(), 6u);
  EXPECT_EQ(b.size(), 4u);
  auto [c, d] = split_table(numbered(5), 0.6, 1);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(d.size(), 2u);
}

TEST(Split, DeterministicPartition) {
  auto ids = [](const AnnotatedTable& t) {
    std::vector<std::int64_t> v;
    for (const auto& i : t.instances()) v.push_back(i.values[0]->as_integer());
    return v;
  };
  auto [a, b] = split_table(numbered(50), 0.6, 42);
  auto [c, d] = split_table(numbered(50), 0.6, 42);
  EXPECT_EQ(ids(a), ids(c));
  EXPECT_EQ(ids(b), ids(d));
  auto all = ids(a);
  auto rest = ids(b);
  all.insert(all.end(), rest.begin(), rest.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], static_cast<std::int64_t>(i));
  EXPECT_EQ(a.schema().features(), numbered(1).schema().features());
}

TEST(Split, Errors) {
  EXPECT_THROW(split_table(numbered(1), 0.6, 0), Error);
  EXPECT_THROW(split_table(numbered(10), 0.0, 0), Error);
  EXPECT_THROW(split_table(numbered(10), 1.0, 0), Error);
}

TEST(TableCsv, RoundTripKeepsMissingValues) {
  AnnotatedTable t = build_annotated_table(claims_log(), claims_spec());
  std::ostringstream out;
  write_table_csv(t, out);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "channel,A@org:resource,trace:deviation,sensitive,label");
  AnnotatedTable back = read_table_csv(out.str());
  ASSERT_EQ(back.size(), t.size());
  EXPECT_EQ(back.schema().features(), t.schema().features());
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_EQ(back[i].values, t[i].values);
    EXPECT_EQ(back[i].group, t[i].group);
    EXPECT_EQ(back[i].label, t[i].label);
  }
  EXPECT_THROW(read_table_csv("a,sensitive,label\nx,favorable,maybe\n"), Error);
}

TEST(TableCsv, EightInstanceFixture) {
  AnnotatedTable t = read_table_csv(testing::read_fixture("eight.csv"));
  GroupCounts c = t.counts();
  EXPECT_EQ(c.favorable, 4);
  EXPECT_EQ(c.deprived, 4);
  EXPECT_EQ(c.favorable_positive, 2);
  EXPECT_EQ(c.deprived_positive, 1);
}

}  // namespace
}  // namespace fairpm
