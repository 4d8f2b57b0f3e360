#pragma once

#include <cstdint>

#include "fairpm/annotated_table.hpp"
#include "fairpm/enrichment.hpp"
#include "fairpm/event_log.hpp"
#include "fairpm/specification.hpp"

namespace fairpm {

// Claim-handling process: Register, Check, optional Review, Decide.
// Trace attributes: concept:name, channel, department, responsible. Register
// carries an integer amount, every event an org:resource. Whether a case
// runs over 48 hours depends on amount and channel only, so the data is
// close to fair. The Check resource is correlated with the responsible
// employee and acts as a proxy for the sensitive attribute.
struct SyntheticLogOptions {
  std::size_t traces = 1000;
  std::uint64_t seed = 0;
  // Probability that a deprived case is checked by the proxy team member
  // (and that a favorable one is not).
  double proxy_strength = 0.85;
  // Share of cases handled by a deprived responsible.
  double deprived_share = 0.4;
};

EventLog generate_synthetic_log(const SyntheticLogOptions& options);

// Enrichment settings for the synthetic log: delayed means longer than 48h.
EnrichmentConfig synthetic_enrichment_config();

// Plan channel, department, Register@amount, Check@org:resource,
// Decide@prev:activity; sensitive feature responsible with deprived values
// erin and frank; class trace:delay with on-time desirable.
SituationSpecification synthetic_specification();

// Random annotated table with trace-level features f0..f{k-1}. f0 is a
// categorical proxy of the group; the rest alternate between categorical
// and small-integer columns with a few ⊥ cells. Labels follow a hidden
// rule over the features, with the deprived group's positive rate lowered
// by `bias`.
struct RandomTableOptions {
  std::size_t rows = 200;
  std::size_t features = 4;
  std::uint64_t seed = 0;
  double bias = 0.3;
  double proxy_strength = 0.75;
  double missing_rate = 0.03;
};

AnnotatedTable generate_random_table(const RandomTableOptions& options);

}  // namespace fairpm
