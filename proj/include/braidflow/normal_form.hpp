#pragma once
// Garside left normal form in B_n and the word problem built on it.
// A word is carried to Delta^p · A_1 · ... · A_k with simple factors A_i,
// each adjacent pair left-weighted; uniqueness of that form makes equality
// a structural comparison.

#include <string>
#include <vector>

#include "braidflow/braid_word.hpp"
#include "braidflow/permutation.hpp"

namespace braidflow {

struct NormalForm {
  int n_strands = 2;
  int delta_power = 0;
  // Simple (permutation) factors in left-greedy order; none is the identity
  // or the half twist.
  std::vector<Permutation> factors;
  friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

namespace detail {

// tau(A) = Delta A Delta^{-1}; permutation w0 ∘ pi_A ∘ w0.
inline Permutation delta_conjugate(const Permutation& a, const Permutation& w0) {
  return compose(w0, compose(a, w0));
}

// The pair (A, B) is left-weighted when every generator starting B also
// finishes A. Slides move any offending generator across the boundary:
// (A, B) -> (A sigma_t, sigma_t^{-1} B), strictly growing A.
inline bool slide_pair(Permutation& a, Permutation& b) {
  bool changed = false;
  while (true) {
    const Permutation a_inv = inverse(a);
    int t = 0;
    for (int i = 1; i < b.n(); ++i) {
      if (has_descent(b, i) && !has_descent(a_inv, i)) {
        t = i;
        break;
      }
    }
    if (t == 0) break;
    const Permutation st = transposition(b.n(), t);
    a = compose(st, a);
    b = compose(b, st);
    changed = true;
  }
  return changed;
}

}  // namespace detail

inline NormalForm left_normal_form(const BraidWord& w) {
  const int n = w.n_strands;
  const Permutation w0 = half_twist_perm(n);
  NormalForm nf;
  nf.n_strands = n;

  std::vector<Permutation> factors;
  factors.reserve(w.letters.size());
  for (const Letter& l : w.letters) {
    if (l.sign > 0) {
      factors.push_back(transposition(n, l.index));
    } else {
      // sigma_i^{-1} = Delta^{-1} · (Delta sigma_i^{-1}); pulling the
      // Delta^{-1} to the front conjugates every factor already collected.
      nf.delta_power -= 1;
      for (Permutation& a : factors) a = detail::delta_conjugate(a, w0);
      factors.push_back(compose(transposition(n, l.index), w0));
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Permutation> kept;
    kept.reserve(factors.size());
    for (Permutation& a : factors) {
      if (a.is_identity()) {
        changed = true;
      } else {
        kept.push_back(std::move(a));
      }
    }
    factors = std::move(kept);
    for (std::size_t j = 0; j + 1 < factors.size(); ++j)
      if (detail::slide_pair(factors[j], factors[j + 1])) changed = true;
  }

  // Stability pushes half-twist factors to the front; absorb them into the
  // Delta power.
  std::size_t lead = 0;
  while (lead < factors.size() && factors[lead] == w0) ++lead;
  nf.delta_power += static_cast<int>(lead);
  factors.erase(factors.begin(),
                factors.begin() + static_cast<std::ptrdiff_t>(lead));
  nf.factors = std::move(factors);
  return nf;
}

// Positive word for a simple factor: repeatedly peel the smallest descent.
inline BraidWord permutation_word(const Permutation& p0, int n_strands) {
  Permutation p = p0;
  BraidWord w;
  w.n_strands = n_strands;
  while (!p.is_identity()) {
    int t = 0;
    for (int i = 1; i < p.n(); ++i) {
      if (has_descent(p, i)) {
        t = i;
        break;
      }
    }
    w.letters.push_back({t, +1});
    p = compose(p, transposition(p.n(), t));
  }
  return w;
}

// Rebuilds a braid word from the normal form (Delta power, then factors).
inline BraidWord normal_form_word(const NormalForm& nf) {
  const int n = nf.n_strands;
  BraidWord out;
  out.n_strands = n;
  const BraidWord delta = permutation_word(half_twist_perm(n), n);
  if (nf.delta_power >= 0) {
    for (int k = 0; k < nf.delta_power; ++k) out = concat(out, delta);
  } else {
    const BraidWord delta_inv = inverse_word(delta);
    for (int k = 0; k < -nf.delta_power; ++k) out = concat(out, delta_inv);
  }
  for (const Permutation& f : nf.factors)
    out = concat(out, permutation_word(f, n));
  return out;
}

inline std::string normal_form_string(const NormalForm& nf) {
  std::string out = "D^" + std::to_string(nf.delta_power);
  for (const Permutation& f : nf.factors) {
    out += " | ";
    out += format_word(permutation_word(f, nf.n_strands));
  }
  return out;
}

inline bool words_equal(const BraidWord& w1, const BraidWord& w2) {
  if (w1.n_strands != w2.n_strands)
    throw InputError("words_equal requires matching strand counts");
  return left_normal_form(w1) == left_normal_form(w2);
}

// Endpoint permutation of the word read left to right: image(i) is the slot
// where the strand starting in slot i ends.
inline Permutation endpoint_permutation(const BraidWord& word) {
  Permutation p = Permutation::identity(word.n_strands);
  for (const Letter& l : word.letters)
    p = compose(transposition(word.n_strands, l.index), p);
  return p;
}

}  // namespace braidflow
