#include "fairpm/petri_net.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iterator>
#include <set>

#include "fairpm/error.hpp"
#include "xml.hpp"

namespace fairpm {

PetriNet::PetriNet(std::vector<std::string> places, std::vector<Transition> transitions,
                   std::vector<Arc> arcs, const std::map<std::string, int>& initial,
                   const std::map<std::string, int>& final_marking)
    : places_(std::move(places)), transitions_(std::move(transitions)), arcs_(std::move(arcs)) {
  std::sort(places_.begin(), places_.end());
  if (std::adjacent_find(places_.begin(), places_.end()) != places_.end()) {
    throw Error("Petri net: duplicate place id");
  }
  std::sort(transitions_.begin(), transitions_.end(),
            [](const Transition& a, const Transition& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < transitions_.size(); ++i) {
    if (transitions_[i - 1].id == transitions_[i].id) {
      throw Error("Petri net: duplicate transition id '" + transitions_[i].id + "'");
    }
  }
  for (const auto& t : transitions_) {
    if (place_index(t.id)) throw Error("Petri net: id '" + t.id + "' used for place and transition");
  }

  pre_.resize(transitions_.size());
  post_.resize(transitions_.size());
  for (const Arc& arc : arcs_) {
    if (arc.weight <= 0) throw Error("Petri net: arc weight must be positive");
    auto sp = place_index(arc.source), tp = place_index(arc.target);
    auto st = transition_index(arc.source), tt = transition_index(arc.target);
    if (sp && tt) {
      pre_[*tt].emplace_back(*sp, arc.weight);
    } else if (st && tp) {
      post_[*st].emplace_back(*tp, arc.weight);
    } else {
      throw Error("Petri net: arc " + arc.source + " -> " + arc.target +
                  " must connect a place and a transition");
    }
  }

  auto to_marking = [&](const std::map<std::string, int>& tokens, const char* what) {
    Marking m(places_.size(), 0);
    for (const auto& [id, count] : tokens) {
      auto p = place_index(id);
      if (!p) throw Error(std::string("Petri net: ") + what + " marking references unknown place '" + id + "'");
      if (count < 0) throw Error(std::string("Petri net: negative ") + what + " marking");
      m[*p] += count;
    }
    return m;
  };
  initial_ = to_marking(initial, "initial");
  final_ = to_marking(final_marking, "final");
}

std::optional<std::size_t> PetriNet::place_index(std::string_view id) const {
  auto it = std::lower_bound(places_.begin(), places_.end(), id);
  if (it == places_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - places_.begin());
}

std::optional<std::size_t> PetriNet::transition_index(std::string_view id) const {
  auto it = std::lower_bound(transitions_.begin(), transitions_.end(), id,
                             [](const Transition& t, std::string_view key) { return t.id < key; });
  if (it == transitions_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - transitions_.begin());
}

bool PetriNet::enabled(const Marking& m, std::size_t t) const {
  return std::all_of(pre_[t].begin(), pre_[t].end(),
                     [&](const auto& in) { return m[in.first] >= in.second; });
}

void PetriNet::fire(Marking& m, std::size_t t) const {
  for (const auto& [p, w] : pre_[t]) m[p] -= w;
  for (const auto& [p, w] : post_[t]) m[p] += w;
}

std::size_t PetriNet::silent_count() const {
  return static_cast<std::size_t>(std::count_if(
      transitions_.begin(), transitions_.end(), [](const Transition& t) { return t.silent(); }));
}

namespace {

int read_token_count(const xml::Element& holder) {
  const xml::Element* text = holder.child("text");
  std::string_view raw = text ? std::string_view(text->text) : std::string_view(holder.text);
  while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
  while (!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
  if (ec != std::errc{} || ptr != raw.data() + raw.size() || value < 0) {
    throw ParseError("PNML: token count '" + std::string(raw) + "'", holder.line, 1);
  }
  return value;
}

std::optional<std::string> read_name(const xml::Element& node) {
  const xml::Element* name = node.child("name");
  if (!name) return std::nullopt;
  const xml::Element* text = name->child("text");
  if (!text) return std::nullopt;
  return text->text;
}

bool marked_invisible(const xml::Element& transition) {
  for (const xml::Element* tool : transition.children_named("toolspecific")) {
    if (tool->attribute("activity") == std::optional<std::string_view>("$invisible$")) return true;
  }
  return false;
}

struct NetContent {
  std::vector<std::string> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
  std::map<std::string, int> initial;
  bool has_initial = false;
};

void collect(const xml::Element& container, NetContent& out) {
  for (const auto& node : container.children) {
    if (node.name == "page") {
      collect(node, out);
    } else if (node.name == "place") {
      auto id = node.attribute("id");
      if (!id) throw ParseError("PNML: place without id", node.line, 1);
      out.places.emplace_back(*id);
      if (const xml::Element* marking = node.child("initialMarking")) {
        out.has_initial = true;
        if (int tokens = read_token_count(*marking); tokens > 0) out.initial[std::string(*id)] += tokens;
      }
    } else if (node.name == "transition") {
      auto id = node.attribute("id");
      if (!id) throw ParseError("PNML: transition without id", node.line, 1);
      Transition t{std::string(*id), read_name(node)};
      if (marked_invisible(node)) t.label.reset();
      out.transitions.push_back(std::move(t));
    } else if (node.name == "arc") {
      auto source = node.attribute("source");
      auto target = node.attribute("target");
      if (!source || !target) throw ParseError("PNML: arc without source/target", node.line, 1);
      Arc arc{std::string(*source), std::string(*target), 1};
      if (const xml::Element* inscription = node.child("inscription")) {
        arc.weight = read_token_count(*inscription);
      }
      out.arcs.push_back(std::move(arc));
    }
  }
}

}  // namespace

PetriNet parse_pnml(std::string_view document) {
  xml::Element root = xml::parse(document);
  std::vector<const xml::Element*> nets =
      root.name == "net" ? std::vector<const xml::Element*>{&root} : root.children_named("net");
  if (nets.empty()) throw ParseError("PNML: no <net> element", root.line, 1);
  if (nets.size() > 1) throw ParseError("PNML: expected one <net>, found " + std::to_string(nets.size()), nets[1]->line, 1);
  const xml::Element& net = *nets.front();

  NetContent content;
  collect(net, content);

  std::set<std::string> has_input, has_output;
  for (const Arc& arc : content.arcs) {
    has_output.insert(arc.source);
    has_input.insert(arc.target);
  }
  if (!content.has_initial) {
    for (const auto& p : content.places) {
      if (!has_input.contains(p)) content.initial[p] = 1;
    }
  }

  std::map<std::string, int> final_marking;
  bool declared_final = false;
  if (const xml::Element* finals = net.child("finalmarkings")) {
    if (const xml::Element* marking = finals->child("marking")) {
      declared_final = true;
      for (const xml::Element* place : marking->children_named("place")) {
        auto ref = place->attribute("idref");
        if (!ref) throw ParseError("PNML: final marking place without idref", place->line, 1);
        if (int tokens = read_token_count(*place); tokens > 0) final_marking[std::string(*ref)] += tokens;
      }
    }
  }
  if (!declared_final) {
    for (const auto& p : content.places) {
      if (!has_output.contains(p)) final_marking[p] = 1;
    }
    if (final_marking.empty()) {
      throw ParseError("PNML: no final marking declared and no sink place to infer it from", net.line, 1);
    }
  }
  return PetriNet(std::move(content.places), std::move(content.transitions),
                  std::move(content.arcs), content.initial, final_marking);
}

PetriNet parse_pnml(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_pnml(std::string_view(text));
}

}  // namespace fairpm
