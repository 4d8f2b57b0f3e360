#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>

#include "fairpm/event_log.hpp"
#include "fairpm/petri_net.hpp"

namespace fairpm {

// Per-trace conformance counters. Model moves are approximated by the number
// of missing tokens under token replay; imported alignment results carry
// real move counts.
struct ReplayResult {
  bool deviation = false;
  int missing_tokens = 0;
  int remaining_tokens = 0;
  int log_moves = 0;
  int model_moves = 0;
  bool fitting = true;

  // Derives fitting and deviation from the counters.
  static ReplayResult from_counts(int missing, int remaining, int log_moves, int model_moves);

  friend bool operator==(const ReplayResult&, const ReplayResult&) = default;
};

// Activity -> transition index.
using LabelMap = std::map<std::string, std::size_t, std::less<>>;

// Exact match of activity and transition label; the lowest transition id wins
// when several transitions share a label.
LabelMap default_label_map(const PetriNet& net);

// Token-based replay. Silent transitions are fired, via a breadth-first
// search bounded by the number of silent transitions, when that enables the
// next event's transition or reaches the final marking at the end.
ReplayResult token_replay(const PetriNet& net, const Trace& trace, const LabelMap& labels);

using ConformanceResults = std::map<std::string, ReplayResult, std::less<>>;

ConformanceResults replay_log(const PetriNet& net, const EventLog& log, const LabelMap& labels);

// CSV with header case_id,deviation,model_moves,log_moves. Deviation is
// recomputed from the move counts.
ConformanceResults import_alignment_results(std::string_view text);
ConformanceResults import_alignment_results(std::istream& in);

}  // namespace fairpm
