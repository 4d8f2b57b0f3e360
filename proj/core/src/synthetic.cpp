#include "fairpm/synthetic.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "fairpm/error.hpp"
#include "fairpm/random.hpp"

namespace fairpm {

namespace {

constexpr std::int64_t kHour = 60LL * 60 * 1000;
// 2024-01-01T00:00:00Z
constexpr std::int64_t kStart = 1704067200000LL;

const std::array<const char*, 4> kFavorable = {"alice", "bob", "carol", "dave"};
const std::array<const char*, 2> kDeprived = {"erin", "frank"};
const std::array<const char*, 3> kChannels = {"web", "phone", "branch"};
const std::array<const char*, 2> kDepartments = {"north", "south"};

template <typename Array>
const char* pick(Rng& rng, const Array& a) {
  return a[rng.below(a.size())];
}

Event make_event(std::string activity, std::int64_t millis, std::string resource, std::uint32_t ordinal) {
  Event e;
  e.activity = std::move(activity);
  e.time = Timestamp{millis};
  e.attributes.emplace(std::string(kOrgResource), std::move(resource));
  e.ordinal = ordinal;
  return e;
}

}  // namespace

EventLog generate_synthetic_log(const SyntheticLogOptions& o) {
  if (o.traces == 0) throw Error("synthetic log needs at least one trace");
  Rng rng(o.seed);
  std::vector<Trace> traces;
  traces.reserve(o.traces);
  for (std::size_t i = 0; i < o.traces; ++i) {
    Trace t;
    bool deprived = rng.bernoulli(o.deprived_share);
    std::string responsible = deprived ? pick(rng, kDeprived) : pick(rng, kFavorable);
    std::string channel = pick(rng, kChannels);
    t.attributes.emplace(std::string(kConceptName), "case-" + std::to_string(i + 1));
    t.attributes.emplace("channel", channel);
    t.attributes.emplace("department", pick(rng, kDepartments));
    t.attributes.emplace("responsible", responsible);

    auto amount = static_cast<std::int64_t>(100 + rng.below(99) * 100);
    double p_delay = 0.1 + (amount > 5000 ? 0.35 : 0.0) + (channel == "phone" ? 0.15 : 0.0);
    bool delayed = rng.bernoulli(p_delay);
    double hours = delayed ? 50.0 + rng.uniform() * 50.0 : 10.0 + rng.uniform() * 37.0;
    auto total = static_cast<std::int64_t>(hours * static_cast<double>(kHour));

    std::string checker;
    bool proxy = rng.bernoulli(o.proxy_strength);
    if (deprived == proxy) {
      checker = "tom";
    } else {
      checker = rng.bernoulli(0.5) ? "uma" : "vic";
    }
    bool review = amount > 7000 || rng.bernoulli(0.2);

    std::int64_t start = kStart + static_cast<std::int64_t>(i) * 2 * kHour;
    std::uint32_t ordinal = 0;
    Event reg = make_event("Register", start, rng.bernoulli(0.5) ? "clerk1" : "clerk2", ordinal++);
    reg.attributes.emplace("amount", amount);
    t.events.push_back(std::move(reg));
    t.events.push_back(make_event("Check", start + total / 4, checker, ordinal++));
    if (review) t.events.push_back(make_event("Review", start + total / 2, "manager", ordinal++));
    t.events.push_back(make_event("Decide", start + total, responsible, ordinal++));
    traces.push_back(std::move(t));
  }
  return EventLog(std::move(traces));
}

EnrichmentConfig synthetic_enrichment_config() {
  EnrichmentConfig c;
  c.delay_mode = DelayThresholdMode::kAbsoluteMillis;
  c.delay_value = static_cast<double>(48 * kHour);
  return c;
}

SituationSpecification synthetic_specification() {
  SituationSpecification spec{
      ExtractionPlan({
          {std::nullopt, "channel"},
          {std::nullopt, "department"},
          {"Register", "amount"},
          {"Check", std::string(kOrgResource)},
          {"Decide", std::string(attr::kPrevActivity)},
      }),
      SensitiveBinarizer{{std::nullopt, "responsible"}, {AttributeValue("erin"), AttributeValue("frank")}},
      ClassBinarizer{{std::nullopt, std::string(attr::kTraceDelay)},
                     std::set<AttributeValue, ValueOrder>{AttributeValue(std::string(attr::kOnTime))}},
  };
  spec.validate();
  return spec;
}

AnnotatedTable generate_random_table(const RandomTableOptions& o) {
  if (o.rows < 2) throw Error("random table needs at least two rows");
  if (o.features == 0) throw Error("random table needs at least one feature");
  Rng rng(o.seed);
  std::vector<SituationFeature> features;
  for (std::size_t f = 0; f < o.features; ++f) features.push_back({std::nullopt, "f" + std::to_string(f)});

  // Hidden rule: one "good" category or threshold per feature.
  std::vector<std::int64_t> arity(o.features), good(o.features);
  for (std::size_t f = 0; f < o.features; ++f) {
    bool numeric = f % 2 == 0 && f > 0;
    arity[f] = numeric ? 10 : static_cast<std::int64_t>(2 + rng.below(3));
    good[f] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(arity[f])));
  }

  std::vector<Instance> rows;
  rows.reserve(o.rows);
  for (std::size_t i = 0; i < o.rows; ++i) {
    Instance inst;
    // The first two rows pin both groups.
    bool deprived = i < 2 ? i == 1 : rng.bernoulli(0.4);
    inst.group = deprived ? Group::kDeprived : Group::kFavorable;
    double score = 0.0;
    for (std::size_t f = 0; f < o.features; ++f) {
      bool numeric = f % 2 == 0 && f > 0;
      std::int64_t v;
      if (f == 0) {
        bool proxy = rng.bernoulli(o.proxy_strength);
        v = (deprived == proxy) ? 0 : 1 + static_cast<std::int64_t>(rng.below(2));
      } else {
        v = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(arity[f])));
      }
      bool hit = numeric ? v >= good[f] : v == good[f];
      score += hit ? 1.0 : 0.0;
      if (f > 0 && rng.bernoulli(o.missing_rate)) {
        inst.values.emplace_back();
      } else if (numeric) {
        inst.values.emplace_back(AttributeValue(v));
      } else {
        inst.values.emplace_back(AttributeValue(std::string(1, static_cast<char>('a' + v))));
      }
    }
    double p = 0.25 + 0.5 * score / static_cast<double>(o.features) + (deprived ? -o.bias / 2 : o.bias / 2);
    p = std::clamp(p, 0.05, 0.95);
    inst.label = rng.bernoulli(p) ? Label::kPositive : Label::kNegative;
    rows.push_back(std::move(inst));
  }
  return AnnotatedTable(ExtractionPlan(std::move(features)), std::move(rows));
}

}  // namespace fairpm
