#pragma once

// Words in projective measurement operators of several commuting parties.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

namespace steercert::detail {

struct Letter {
  std::size_t party;
  std::size_t setting;
  std::size_t outcome;
  friend auto operator<=>(const Letter&, const Letter&) = default;
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

// Operators of different parties commute; within a party, P_{a|x} P_{a'|x}
// = delta_{aa'} P_{a|x}. Returns nullopt for the zero operator.
inline std::optional<Word> canonical(Word w) {
  std::stable_sort(w.begin(), w.end(),
                   [](const Letter& a, const Letter& b) { return a.party < b.party; });
  Word out;
  out.reserve(w.size());
  for (const Letter& l : w) {
    if (!out.empty() && out.back().party == l.party && out.back().setting == l.setting) {
      if (out.back().outcome != l.outcome) return std::nullopt;
      continue;
    }
    out.push_back(l);
  }
  return out;
}

inline Word reversed(Word w) {
  std::reverse(w.begin(), w.end());
  return w;
}

// Canonical form of u^dag v.
inline std::optional<Word> product(const Word& u, const Word& v) {
  Word w = reversed(u);
  w.insert(w.end(), v.begin(), v.end());
  return canonical(std::move(w));
}

inline Word adjoint(const Word& w) { return *canonical(reversed(w)); }

// Each party appears at most once: the operator is a product of commuting
// projectors and its expectation is a marginal probability.
inline bool is_local_product(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i].party == w[i - 1].party) return false;
  return true;
}

// Words of length <= level built from the given letters, in canonical form,
// without duplicates or zeros; the empty word comes first.
inline std::vector<Word> monomials(const std::vector<Letter>& letters, int level) {
  std::vector<Word> out{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= level; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (const Letter& l : letters) {
        Word c = w;
        c.push_back(l);
        auto can = canonical(c);
        if (!can || static_cast<int>(can->size()) != len) continue;
        if (std::find(out.begin(), out.end(), *can) != out.end()) continue;
        out.push_back(*can);
        next.push_back(*can);
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace steercert::detail
