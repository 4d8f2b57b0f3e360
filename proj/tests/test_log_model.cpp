#include <cmath>
#include <cstring>
#include <limits>

#include <gtest/gtest.h>

#include "fairpm/csv_log.hpp"
#include "fairpm/error.hpp"
#include "fairpm/event_log.hpp"
#include "fairpm/random.hpp"
#include "fairpm/timestamp.hpp"
#include "fairpm/xes.hpp"
#include "support.hpp"

namespace fairpm {
namespace {

std::string xes_log(const std::string& body) {
  return "<?xml version=\"1.0\"?>\n<log xes.version=\"1.0\" xmlns=\"http://www.xes-standard.org/\">\n" + body +
         "</log>\n";
}

std::string xes_event(const std::string& activity, const std::string& time, const std::string& extra = "") {
  return "<event><string key=\"concept:name\" value=\"" + activity + "\"/><date key=\"time:timestamp\" value=\"" +
         time + "\"/>" + extra + "</event>\n";
}

Event event(std::string activity, std::int64_t millis, std::uint32_t ordinal) {
  Event e;
  e.activity = std::move(activity);
  e.time = Timestamp{millis};
  e.ordinal = ordinal;
  return e;
}

TEST(AttributeValue, ComparesOnlyWithinATag) {
  EXPECT_EQ(compare(AttributeValue(1), AttributeValue(2)), std::partial_ordering::less);
  EXPECT_EQ(compare(AttributeValue("b"), AttributeValue("a")), std::partial_ordering::greater);
  EXPECT_EQ(compare(AttributeValue(1), AttributeValue(1.0)), std::partial_ordering::unordered);
  EXPECT_EQ(compare(AttributeValue(true), AttributeValue("true")), std::partial_ordering::unordered);
  EXPECT_FALSE(AttributeValue(1) == AttributeValue(1.0));
}

TEST(AttributeValue, InfersTags) {
  EXPECT_EQ(infer_value("true").tag(), ValueTag::kBoolean);
  EXPECT_EQ(infer_value("42").tag(), ValueTag::kInteger);
  EXPECT_EQ(infer_value("-4.5").tag(), ValueTag::kReal);
  EXPECT_EQ(infer_value("2024-01-01T00:00:00Z").tag(), ValueTag::kTimestamp);
  EXPECT_EQ(infer_value("web").tag(), ValueTag::kText);
  EXPECT_EQ(infer_value("12abc").tag(), ValueTag::kText);
}

TEST(Timestamp, ResolvesOffsetsToUtc) {
  auto a = parse_iso8601("2011-03-01T10:00:00.000+01:00");
  auto b = parse_iso8601("2011-03-01T09:00:00Z");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->millis, b->millis);
  EXPECT_EQ(parse_iso8601("1970-01-01T00:00:00.250Z")->millis, 250);
  EXPECT_EQ(parse_iso8601("1970-01-01 00:00:01")->millis, 1000);
  EXPECT_FALSE(parse_iso8601("yesterday"));
  EXPECT_FALSE(parse_iso8601("2011-13-01T00:00:00Z"));
  EXPECT_EQ(format_iso8601(*a), "2011-03-01T09:00:00.000+00:00");
  EXPECT_EQ(parse_iso8601(format_iso8601(Timestamp{-1}))->millis, -1);
}

TEST(Xes, MinimalDocument) {
  EventLog log = parse_xes(xes_log("<trace>" + xes_event("A", "2024-01-01T00:00:00Z") + "</trace>"));
  ASSERT_EQ(log.size(), 1u);
  ASSERT_EQ(log.traces()[0].events.size(), 1u);
  EXPECT_EQ(log.traces()[0].events[0].activity, "A");
}

TEST(Xes, DocumentWithoutTraces) {
  EventLog log = parse_xes(xes_log("<string key=\"concept:name\" value=\"empty\"/>"));
  EXPECT_EQ(log.size(), 0u);
  EXPECT_EQ(log.attributes().at("concept:name").as_text(), "empty");
}

TEST(Xes, EqualTimestampsKeepDocumentOrder) {
  const std::string t = "2024-01-01T00:00:00Z";
  EventLog log = parse_xes(xes_log("<trace>" + xes_event("first", t) + xes_event("second", t) + xes_event("third", t) +
                                   "</trace>"));
  const auto& events = log.traces()[0].events;
  ASSERT_EQ(events.size(), 3u);
  EXPECT_EQ(events[0].activity, "first");
  EXPECT_EQ(events[1].activity, "second");
  EXPECT_EQ(events[2].activity, "third");
  EXPECT_LT(events[0].key(), events[1].key());
}

TEST(Xes, EventsAreSortedByTime) {
  EventLog log = parse_xes(xes_log("<trace>" + xes_event("late", "2024-01-02T00:00:00Z") +
                                   xes_event("early", "2024-01-01T00:00:00Z") + "</trace>"));
  EXPECT_EQ(log.traces()[0].events[0].activity, "early");
}

TEST(Xes, MalformedXmlReportsPosition) {
  try {
    parse_xes("<log>\n  <trace>\n    <event>\n  </trace>\n</log>\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0u);
    EXPECT_GT(e.column(), 0u);
  }
}

TEST(Xes, MissingTimestampNamesTheTrace) {
  std::string doc = xes_log("<trace>" + xes_event("A", "2024-01-01T00:00:00Z") + "</trace><trace>" +
                            xes_event("A", "2024-01-01T00:00:00Z") +
                            "<event><string key=\"concept:name\" value=\"B\"/></event></trace>");
  try {
    parse_xes(doc);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("trace 1"), std::string::npos) << e.what();
  }
  EventLog log = parse_xes(doc, XesReadOptions{true});
  const auto& events = log.traces()[1].events;
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[1].activity, "B");
  EXPECT_EQ(events[1].time, events[0].time);
}

TEST(Xes, UnknownExtensionsArePlainAttributes) {
  EventLog log = parse_xes(xes_log("<trace><string key=\"cost:currency\" value=\"EUR\"/>" +
                                   xes_event("A", "2024-01-01T00:00:00Z",
                                             "<string key=\"lifecycle:transition\" value=\"complete\"/>") +
                                   "</trace>"));
  EXPECT_EQ(log.traces()[0].attributes.at("cost:currency").as_text(), "EUR");
  EXPECT_EQ(log.traces()[0].events[0].attributes.at("lifecycle:transition").as_text(), "complete");
}

TEST(Xes, SerializeEmptyLog) {
  EventLog log = parse_xes(serialize_xes(EventLog{}));
  EXPECT_EQ(log.size(), 0u);
}

TEST(Xes, RoundTripPreservesAllTagsBitExact) {
  Trace t;
  t.attributes.emplace("concept:name", "case <1> & \"quoted\"");
  t.attributes.emplace("count", AttributeValue(std::int64_t{-9007199254740993}));
  t.attributes.emplace("ratio", 0.1);
  t.attributes.emplace("tiny", 5e-324);
  t.attributes.emplace("huge", -1.7976931348623157e308);
  t.attributes.emplace("flag", true);
  t.attributes.emplace("due", Timestamp{1704067200123});
  Event e = event("Register", 1704067200000, 0);
  e.attributes.emplace("org:resource", "r1");
  e.attributes.emplace("amount", 1.0 / 3.0);
  e.attributes.emplace("ok", false);
  t.events.push_back(e);
  t.events.push_back(event("Decide", 1704067200000, 1));
  EventLog log({t});

  EventLog back = parse_xes(serialize_xes(log));
  ASSERT_EQ(back.size(), 1u);
  const Trace& b = back.traces()[0];
  EXPECT_EQ(b.attributes, log.traces()[0].attributes);
  ASSERT_EQ(b.events.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(b.events[i].activity, log.traces()[0].events[i].activity);
    EXPECT_EQ(b.events[i].time, log.traces()[0].events[i].time);
    EXPECT_EQ(b.events[i].attributes, log.traces()[0].events[i].attributes);
  }
  double got = b.events[0].attributes.at("amount").as_real();
  double want = 1.0 / 3.0;
  EXPECT_EQ(std::memcmp(&got, &want, sizeof(double)), 0);
}

TEST(Xes, RandomLogsRoundTrip) {
  Rng rng(7);
  for (int round = 0; round < 20; ++round) {
    std::vector<Trace> traces;
    for (std::uint64_t i = 0, n = rng.below(6); i < n; ++i) {
      Trace t;
      t.attributes.emplace("concept:name", "t" + std::to_string(i));
      for (std::uint32_t k = 0, m = static_cast<std::uint32_t>(rng.below(5)); k < m; ++k) {
        Event e = event(std::string(1, static_cast<char>('A' + rng.below(4))),
                        static_cast<std::int64_t>(rng.below(5)) * 1000, k);
        e.attributes.emplace("x", rng.uniform() * 1e6 - 5e5);
        t.events.push_back(e);
      }
      traces.push_back(t);
    }
    EventLog log(traces);
    EventLog back = parse_xes(serialize_xes(log));
    ASSERT_EQ(back.size(), log.size());
    for (std::size_t i = 0; i < log.size(); ++i) {
      const auto& x = log.traces()[i];
      const auto& y = back.traces()[i];
      ASSERT_EQ(x.events.size(), y.events.size());
      for (std::size_t k = 0; k < x.events.size(); ++k) {
        EXPECT_EQ(x.events[k].activity, y.events[k].activity);
        EXPECT_EQ(x.events[k].time, y.events[k].time);
        EXPECT_EQ(x.events[k].attributes, y.events[k].attributes);
      }
    }
  }
}

TEST(EventLog, RejectsEmptyActivityAndDuplicateOrdinals) {
  Trace t;
  t.events.push_back(event("", 0, 0));
  EXPECT_THROW(EventLog({t}), Error);
  Trace u;
  u.events.push_back(event("A", 0, 3));
  u.events.push_back(event("B", 0, 3));
  EXPECT_THROW(EventLog({u}), Error);
}

TEST(EventLog, CatalogRecordsObservedValues) {
  Trace a, b;
  a.attributes.emplace("channel", "web");
  b.attributes.emplace("channel", "phone");
  a.events.push_back(event("A", 0, 0));
  b.events.push_back(event("B", 0, 0));
  EventLog log({a, b});
  const auto& info = log.trace_catalog().at("channel");
  EXPECT_EQ(info.values.size(), 2u);
  EXPECT_TRUE(info.tags.contains(ValueTag::kText));
  EXPECT_EQ(log.event_catalog().at("concept:name").values.size(), 2u);
}

Trace three_events() {
  Trace t;
  t.events = {event("A", 10, 0), event("B", 20, 1), event("C", 30, 2)};
  return t;
}

TEST(EventsUpTo, CutoffBelowAllEvents) {
  Trace t = three_events();
  EXPECT_TRUE(events_up_to(t, EventKey{Timestamp{5}, 0}).empty());
}

TEST(EventsUpTo, CutoffAtLastEventReturnsEverything) {
  Trace t = three_events();
  EXPECT_EQ(events_up_to(t, t.events.back().key()).size(), 3u);
}

TEST(EventsUpTo, CutoffAtSecondEvent) {
  Trace t = three_events();
  auto span = events_up_to(t, t.events[1].key());
  ASSERT_EQ(span.size(), 2u);
  EXPECT_EQ(span[0].activity, "A");
  EXPECT_EQ(span[1].activity, "B");
}

TEST(EventsUpTo, MonotoneAndOrderedOnRandomTraces) {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    Trace t;
    for (std::uint32_t k = 0, n = static_cast<std::uint32_t>(1 + rng.below(8)); k < n; ++k) {
      t.events.push_back(event("A", static_cast<std::int64_t>(rng.below(4)), k));
    }
    t.normalize();
    for (std::size_t i = 1; i < t.events.size(); ++i) ASSERT_LT(t.events[i - 1].key(), t.events[i].key());
    EventKey c1{Timestamp{static_cast<std::int64_t>(rng.below(5))}, static_cast<std::uint32_t>(rng.below(8))};
    EventKey c2{Timestamp{c1.time.millis + static_cast<std::int64_t>(rng.below(2))},
                static_cast<std::uint32_t>(rng.below(8))};
    if (c2 < c1) std::swap(c1, c2);
    auto r1 = events_up_to(t, c1), r2 = events_up_to(t, c2);
    ASSERT_LE(r1.size(), r2.size());
    EXPECT_EQ(r1.data(), r2.data());  // prefix of the same sequence
    std::size_t brute = 0;
    for (const auto& e : t.events) brute += e.key() <= c1;
    EXPECT_EQ(r1.size(), brute);
    EXPECT_EQ(events_up_to(t, t.events.back().key()).size(), t.events.size());
  }
}

TEST(LatestEvent, AbsentActivity) {
  Trace t = three_events();
  EXPECT_EQ(latest_event_with_activity(t.events, "Z"), nullptr);
}

TEST(LatestEvent, SingleOccurrence) {
  Trace t = three_events();
  const Event* e = latest_event_with_activity(t.events, "B");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->time.millis, 20);
}

TEST(LatestEvent, PicksTheLastOccurrence) {
  Trace t;
  t.events = {event("A", 1, 0), event("B", 2, 1), event("A", 3, 2), event("C", 4, 3)};
  const Event* e = latest_event_with_activity(t.events, "A");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e, &t.events[2]);
}

TEST(CsvLog, ParsesQuotedFieldsAndInfersTypes) {
  EventLog log = parse_csv_log(testing::read_fixture("claims.csv"));
  ASSERT_EQ(log.size(), 2u);
  const Trace& c1 = log.traces()[0];
  EXPECT_EQ(c1.case_id(), "c1");
  ASSERT_EQ(c1.events.size(), 2u);
  EXPECT_EQ(c1.events[0].attributes.at("amount").as_integer(), 120);
  EXPECT_FALSE(c1.events[1].attributes.contains("amount"));
  const Trace& c2 = log.traces()[1];
  EXPECT_EQ(c2.case_id(), "c,2");
  EXPECT_EQ(c2.events[0].attributes.at("org:resource").as_text(), "r \"quoted\"");
  EXPECT_EQ(c2.events[0].time.millis, parse_iso8601("2024-01-02T07:00:00Z")->millis);
}

TEST(CsvLog, RejectsBadTimestampsWithRow) {
  try {
    parse_csv_log("case,activity,timestamp\nc1,A,soon\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_csv_log("case,activity,timestamp\nc1,\"A,2024\n"), ParseError);
}

}  // namespace
}  // namespace fairpm
