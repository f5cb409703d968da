#pragma once
// Braid words over the Artin generators of B_n: parsing, canonical formatting,
// free reduction, and elementary word operations.

#include <cctype>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "braidflow/errors.hpp"

namespace braidflow {

// One signed generator: sigma_index^sign with sign in {+1, -1}.
struct Letter {
  int index;
  int sign;
  friend bool operator==(const Letter&, const Letter&) = default;
};

struct BraidWord {
  int n_strands = 2;
  std::vector<Letter> letters;
  friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

// Grammar: word := (letter WS*)* ; letter := "s" INT ("^" ("-1" | "+1"))? ;
// INT := [1-9][0-9]*. An omitted exponent means +1. Leading whitespace is
// tolerated so that round-tripping formatted text never depends on trimming.
inline BraidWord parse_word(const std::string& text, int n_strands) {
  if (n_strands < 2) throw InputError("n_strands must be at least 2");
  BraidWord w;
  w.n_strands = n_strands;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> void {
    throw InputError("word syntax error at position " + std::to_string(i + 1) +
                     ": " + what);
  };
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t letter_start = i;
    if (text[i] != 's') fail("expected 's'");
    ++i;
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])) ||
        text[i] == '0')
      fail("expected generator index starting with a nonzero digit");
    long index = 0;
    while (i < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[i]))) {
      index = index * 10 + (text[i] - '0');
      if (index > 1000000) fail("generator index too large");
      ++i;
    }
    int sign = +1;
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (i + 1 < text.size() && text[i] == '-' && text[i + 1] == '1') {
        sign = -1;
        i += 2;
      } else if (i + 1 < text.size() && text[i] == '+' && text[i + 1] == '1') {
        i += 2;
      } else {
        fail("expected exponent -1 or +1");
      }
    }
    if (index < 1 || index > n_strands - 1) {
      i = letter_start;
      fail("generator index out of range");
    }
    w.letters.push_back({static_cast<int>(index), sign});
  }
  return w;
}

// Canonical text: "s<k>" or "s<k>^-1", single spaces between letters.
inline std::string format_word(const BraidWord& w) {
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += ' ';
    out += 's';
    out += std::to_string(w.letters[i].index);
    if (w.letters[i].sign < 0) out += "^-1";
  }
  return out;
}

// Removes adjacent inverse pairs until none remain; a stack pass catches
// nested cancellations in one sweep.
inline BraidWord free_reduce(const BraidWord& w) {
  BraidWord out;
  out.n_strands = w.n_strands;
  for (const Letter& l : w.letters) {
    if (!out.letters.empty() && out.letters.back().index == l.index &&
        out.letters.back().sign == -l.sign) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(l);
    }
  }
  return out;
}

inline BraidWord inverse_word(const BraidWord& w) {
  BraidWord out;
  out.n_strands = w.n_strands;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back({it->index, -it->sign});
  return out;
}

inline BraidWord concat(const BraidWord& a, const BraidWord& b) {
  if (a.n_strands != b.n_strands)
    throw InputError("cannot concatenate words with different strand counts");
  BraidWord out = a;
  out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
  return out;
}

inline int exponent_sum(const BraidWord& w) {
  int s = 0;
  for (const Letter& l : w.letters) s += l.sign;
  return s;
}

// Deterministic across platforms: mt19937 output is standard-specified and we
// reduce it with plain modulo instead of distribution objects.
inline BraidWord random_word(int n_strands, int length, unsigned seed) {
  if (n_strands < 2) throw InputError("n_strands must be at least 2");
  if (length < 0) throw InputError("length must be nonnegative");
  std::mt19937 gen(seed);
  BraidWord w;
  w.n_strands = n_strands;
  w.letters.reserve(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    int index = 1 + static_cast<int>(gen() % static_cast<unsigned>(n_strands - 1));
    int sign = (gen() % 2u) ? +1 : -1;
    w.letters.push_back({index, sign});
  }
  return w;
}

}  // namespace braidflow
