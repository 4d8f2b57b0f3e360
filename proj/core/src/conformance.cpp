#include "fairpm/conformance.hpp"

#include <charconv>
#include <deque>
#include <iterator>
#include <set>

#include "fairpm/csv.hpp"
#include "fairpm/error.hpp"

namespace fairpm {

ReplayResult ReplayResult::from_counts(int missing, int remaining, int log_moves,
                                       int model_moves) {
  ReplayResult r;
  r.missing_tokens = missing;
  r.remaining_tokens = remaining;
  r.log_moves = log_moves;
  r.model_moves = model_moves;
  r.fitting = missing == 0 && remaining == 0 && log_moves == 0 && model_moves == 0;
  r.deviation = !r.fitting;
  return r;
}

LabelMap default_label_map(const PetriNet& net) {
  LabelMap labels;
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    const auto& label = net.transitions()[t].label;
    if (label) labels.try_emplace(*label, t);
  }
  return labels;
}

namespace {

// Shortest sequence of silent firings from `start` to a marking satisfying
// `goal`, expanding transitions in id order. Returns the reached marking.
template <typename Goal>
std::optional<Marking> silent_search(const PetriNet& net, const Marking& start, Goal goal) {
  if (goal(start)) return start;
  std::vector<std::size_t> silent;
  for (std::size_t t = 0; t < net.transitions().size(); ++t) {
    if (net.transitions()[t].silent()) silent.push_back(t);
  }
  if (silent.empty()) return std::nullopt;

  std::set<Marking> seen{start};
  std::vector<Marking> frontier{start};
  for (std::size_t depth = 0; depth < silent.size() && !frontier.empty(); ++depth) {
    std::vector<Marking> next;
    for (const Marking& m : frontier) {
      for (std::size_t t : silent) {
        if (!net.enabled(m, t)) continue;
        Marking after = m;
        net.fire(after, t);
        if (!seen.insert(after).second) continue;
        if (goal(after)) return after;
        next.push_back(std::move(after));
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace

ReplayResult token_replay(const PetriNet& net, const Trace& trace, const LabelMap& labels) {
  Marking m = net.initial_marking();
  int missing = 0;
  int log_moves = 0;

  for (const Event& event : trace.events) {
    auto mapped = labels.find(event.activity);
    if (mapped == labels.end()) {
      ++log_moves;
      continue;
    }
    std::size_t t = mapped->second;
    if (!net.enabled(m, t)) {
      if (auto reached = silent_search(net, m, [&](const Marking& x) { return net.enabled(x, t); })) {
        m = std::move(*reached);
      } else {
        for (const auto& [p, w] : net.preset(t)) {
          if (m[p] < w) {
            missing += w - m[p];
            m[p] = w;
          }
        }
      }
    }
    net.fire(m, t);
  }

  const Marking& target = net.final_marking();
  if (auto reached = silent_search(net, m, [&](const Marking& x) { return x == target; })) {
    m = std::move(*reached);
  }
  int remaining = 0;
  for (std::size_t p = 0; p < m.size(); ++p) {
    if (m[p] < target[p]) missing += target[p] - m[p];
    if (m[p] > target[p]) remaining += m[p] - target[p];
  }
  return ReplayResult::from_counts(missing, remaining, log_moves, missing);
}

ConformanceResults replay_log(const PetriNet& net, const EventLog& log, const LabelMap& labels) {
  ConformanceResults results;
  for (const Trace& trace : log.traces()) {
    results.insert_or_assign(trace.case_id(), token_replay(net, trace, labels));
  }
  return results;
}

namespace {

std::optional<int> parse_count(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

}  // namespace

ConformanceResults import_alignment_results(std::string_view text) {
  auto rows = csv::read(text);
  if (rows.empty()) throw ParseError("alignment CSV: missing header");
  const csv::Row expected{"case_id", "deviation", "model_moves", "log_moves"};
  if (rows.front() != expected) {
    throw ParseError("alignment CSV: header must be case_id,deviation,model_moves,log_moves", 1, 1);
  }
  ConformanceResults results;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const csv::Row& row = rows[r];
    auto fail = [&](const std::string& why) {
      return ParseError("alignment CSV: row " + std::to_string(r) + ": " + why, r + 1, 1);
    };
    if (row.size() != 4) throw fail("expected 4 fields");
    const std::string& flag = row[1];
    if (flag != "true" && flag != "false" && flag != "1" && flag != "0") {
      throw fail("deviation must be true/false");
    }
    auto model = parse_count(row[2]);
    auto log = parse_count(row[3]);
    if (!model || !log) throw fail("move counts must be integers");
    if (*model < 0 || *log < 0) throw fail("move counts must be nonnegative");
    ReplayResult result = ReplayResult::from_counts(*model, 0, *log, *model);
    results.insert_or_assign(row[0], result);
  }
  return results;
}

ConformanceResults import_alignment_results(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return import_alignment_results(std::string_view(text));
}

}  // namespace fairpm
