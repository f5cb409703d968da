#pragma once
// Independent word-problem oracle: bounded breadth-first search over free
// reduction, the two relation families applied as rewrites, and insertion of
// canceling letter pairs. Slow and only for short words, but it shares no
// code or theory with the normal form, which is the point.

#include <cstdint>
#include <cstdlib>
#include <deque>
#include <string>
#include <unordered_set>
#include <vector>

#include "braidflow/braid_word.hpp"

namespace braidflow {

enum class OracleVerdict {
  equal,            // rewrote w1 w2^{-1} to the empty word
  distinct,         // exhausted every word reachable within the length bound
  budget_exceeded,  // node budget ran out first; no definite answer
};

namespace detail {

// State encoding: one signed byte per letter, +k for sigma_k, -k for its
// inverse. States are kept free-reduced so each group element has one code
// per reduced spelling.
using Code = std::vector<std::int8_t>;

inline Code reduce_code(const Code& in) {
  Code out;
  out.reserve(in.size());
  for (std::int8_t c : in) {
    if (!out.empty() && out.back() == -c)
      out.pop_back();
    else
      out.push_back(c);
  }
  return out;
}

inline std::string code_key(const Code& c) {
  return std::string(reinterpret_cast<const char*>(c.data()), c.size());
}

}  // namespace detail

inline OracleVerdict brute_force_equal(const BraidWord& w1, const BraidWord& w2,
                                       int max_len, long max_nodes = 200000) {
  if (w1.n_strands != w2.n_strands)
    throw InputError("brute_force_equal requires matching strand counts");
  const int n = w1.n_strands;

  // Exponent sum is invariant under every move below, so a mismatch settles
  // the question without searching.
  if (exponent_sum(w1) != exponent_sum(w2)) return OracleVerdict::distinct;

  detail::Code start;
  for (const Letter& l : w1.letters)
    start.push_back(static_cast<std::int8_t>(l.sign * l.index));
  for (auto it = w2.letters.rbegin(); it != w2.letters.rend(); ++it)
    start.push_back(static_cast<std::int8_t>(-it->sign * it->index));
  start = detail::reduce_code(start);
  if (start.empty()) return OracleVerdict::equal;
  if (static_cast<int>(start.size()) > max_len)
    return OracleVerdict::budget_exceeded;

  std::deque<detail::Code> queue;
  std::unordered_set<std::string> visited;
  queue.push_back(start);
  visited.insert(detail::code_key(start));
  long popped = 0;

  auto offer = [&](detail::Code c) -> bool {
    c = detail::reduce_code(c);
    if (c.empty()) return true;
    if (static_cast<int>(c.size()) > max_len) return false;
    std::string key = detail::code_key(c);
    if (visited.insert(std::move(key)).second) queue.push_back(std::move(c));
    return false;
  };

  while (!queue.empty()) {
    if (++popped > max_nodes) return OracleVerdict::budget_exceeded;
    detail::Code cur = std::move(queue.front());
    queue.pop_front();
    const int len = static_cast<int>(cur.size());

    // Far commutation: sigma_i sigma_j = sigma_j sigma_i for |i-j| >= 2,
    // valid for any signs.
    for (int i = 0; i + 1 < len; ++i) {
      const int a = std::abs(cur[i]), b = std::abs(cur[i + 1]);
      if (std::abs(a - b) >= 2) {
        detail::Code next = cur;
        std::swap(next[i], next[i + 1]);
        if (offer(std::move(next))) return OracleVerdict::equal;
      }
    }

    // Braid relation on uniform-sign triples: x y x -> y x y for |x-y| = 1.
    for (int i = 0; i + 2 < len; ++i) {
      const std::int8_t x = cur[i], y = cur[i + 1];
      if (cur[i + 2] == x && ((x > 0) == (y > 0)) &&
          std::abs(std::abs(x) - std::abs(y)) == 1) {
        detail::Code next = cur;
        next[i] = y;
        next[i + 1] = x;
        next[i + 2] = y;
        if (offer(std::move(next))) return OracleVerdict::equal;
      }
    }

    // Insert a canceling pair anywhere, either orientation.
    if (len + 2 <= max_len) {
      for (int pos = 0; pos <= len; ++pos) {
        for (int k = 1; k <= n - 1; ++k) {
          for (int s : {+1, -1}) {
            detail::Code next;
            next.reserve(static_cast<std::size_t>(len) + 2);
            next.insert(next.end(), cur.begin(), cur.begin() + pos);
            next.push_back(static_cast<std::int8_t>(s * k));
            next.push_back(static_cast<std::int8_t>(-s * k));
            next.insert(next.end(), cur.begin() + pos, cur.end());
            if (offer(std::move(next))) return OracleVerdict::equal;
          }
        }
      }
    }
  }
  return OracleVerdict::distinct;
}

}  // namespace braidflow
