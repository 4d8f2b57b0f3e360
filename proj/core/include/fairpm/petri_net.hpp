#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairpm {

using Marking = std::vector<int>;  // tokens per place index

struct Transition {
  std::string id;
  std::optional<std::string> label;  // absent for silent transitions

  bool silent() const { return !label.has_value(); }
};

struct Arc {
  std::string source;
  std::string target;
  int weight = 1;
};

// Place/transition net with initial and final marking. Places and
// transitions are kept sorted by id; indices refer to that order.
class PetriNet {
 public:
  PetriNet(std::vector<std::string> places, std::vector<Transition> transitions,
           std::vector<Arc> arcs, const std::map<std::string, int>& initial,
           const std::map<std::string, int>& final_marking);

  const std::vector<std::string>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Marking& initial_marking() const { return initial_; }
  const Marking& final_marking() const { return final_; }

  std::optional<std::size_t> place_index(std::string_view id) const;
  std::optional<std::size_t> transition_index(std::string_view id) const;

  // (place index, weight) pairs.
  const std::vector<std::pair<std::size_t, int>>& preset(std::size_t t) const { return pre_[t]; }
  const std::vector<std::pair<std::size_t, int>>& postset(std::size_t t) const { return post_[t]; }

  bool enabled(const Marking& m, std::size_t t) const;
  // Fires without checking enablement; may drive places negative only if the
  // caller skipped the check.
  void fire(Marking& m, std::size_t t) const;

  std::size_t silent_count() const;

 private:
  std::vector<std::string> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  Marking initial_;
  Marking final_;
  std::vector<std::vector<std::pair<std::size_t, int>>> pre_;
  std::vector<std::vector<std::pair<std::size_t, int>>> post_;
};

// Reads a PNML document with exactly one <net>. Transitions without a name,
// or marked invisible through ProM's toolspecific element, are silent.
// Missing initial marking: one token on every source place. Missing final
// marking: one token on every sink place; an error if there is none.
PetriNet parse_pnml(std::string_view document);
PetriNet parse_pnml(std::istream& in);

}  // namespace fairpm
