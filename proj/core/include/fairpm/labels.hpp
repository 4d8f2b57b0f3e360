#pragma once

#include <string_view>

namespace fairpm {

// Sensitive-feature group: favorable (⊕) or deprived (⊖).
enum class Group { kFavorable, kDeprived };

// Class label: + desirable, - undesirable.
enum class Label { kPositive, kNegative };

enum class RelabelMode { kBoth, kNegToPos, kPosToNeg };

inline Label flip(Label l) { return l == Label::kPositive ? Label::kNegative : Label::kPositive; }
inline Group swap(Group g) { return g == Group::kFavorable ? Group::kDeprived : Group::kFavorable; }

inline std::string_view to_string(Label l) { return l == Label::kPositive ? "+" : "-"; }
inline std::string_view to_string(Group g) {
  return g == Group::kFavorable ? "favorable" : "deprived";
}
std::string_view to_string(RelabelMode mode);
// "both", "neg_to_pos", "pos_to_neg"; throws Error otherwise.
RelabelMode parse_relabel_mode(std::string_view text);

}  // namespace fairpm
