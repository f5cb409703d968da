#pragma once
// Permutations on {1..n} and the descent machinery used by the Garside
// normal form. Convention fixed project-wide: a braid word acts on strand
// positions left to right, so perm(u v) = perm(v) ∘ perm(u).

#include <numeric>
#include <vector>

#include "braidflow/errors.hpp"

namespace braidflow {

struct Permutation {
  // 1-based images: images[i-1] is where the strand starting at slot i ends.
  std::vector<int> images;

  int n() const { return static_cast<int>(images.size()); }
  int operator()(int i) const { return images[static_cast<std::size_t>(i - 1)]; }

  static Permutation identity(int n) {
    Permutation p;
    p.images.resize(static_cast<std::size_t>(n));
    std::iota(p.images.begin(), p.images.end(), 1);
    return p;
  }

  bool is_identity() const {
    for (int i = 1; i <= n(); ++i)
      if ((*this)(i) != i) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
};

inline void validate_bijection(const Permutation& p) {
  std::vector<char> seen(static_cast<std::size_t>(p.n()), 0);
  for (int v : p.images) {
    if (v < 1 || v > p.n() || seen[static_cast<std::size_t>(v - 1)])
      throw InputError("permutation images are not a bijection");
    seen[static_cast<std::size_t>(v - 1)] = 1;
  }
}

// (f ∘ g)(i) = f(g(i)).
inline Permutation compose(const Permutation& f, const Permutation& g) {
  Permutation out;
  out.images.resize(g.images.size());
  for (int i = 1; i <= g.n(); ++i)
    out.images[static_cast<std::size_t>(i - 1)] = f(g(i));
  return out;
}

inline Permutation inverse(const Permutation& p) {
  Permutation out;
  out.images.resize(p.images.size());
  for (int i = 1; i <= p.n(); ++i)
    out.images[static_cast<std::size_t>(p(i) - 1)] = i;
  return out;
}

// Adjacent transposition (k, k+1).
inline Permutation transposition(int n, int k) {
  Permutation p = Permutation::identity(n);
  p.images[static_cast<std::size_t>(k - 1)] = k + 1;
  p.images[static_cast<std::size_t>(k)] = k;
  return p;
}

// Permutation of the positive half twist: i -> n + 1 - i.
inline Permutation half_twist_perm(int n) {
  Permutation p;
  p.images.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i)
    p.images[static_cast<std::size_t>(i - 1)] = n + 1 - i;
  return p;
}

// Descent positions {i : p(i) > p(i+1)}. Under the composition convention
// above these are exactly the generators a simple braid can start with; the
// descents of the inverse are the generators it can end with.
inline std::vector<int> descents(const Permutation& p) {
  std::vector<int> out;
  for (int i = 1; i < p.n(); ++i)
    if (p(i) > p(i + 1)) out.push_back(i);
  return out;
}

inline bool has_descent(const Permutation& p, int i) { return p(i) > p(i + 1); }

inline int inversion_count(const Permutation& p) {
  int count = 0;
  for (int i = 1; i <= p.n(); ++i)
    for (int j = i + 1; j <= p.n(); ++j)
      if (p(i) > p(j)) ++count;
  return count;
}

}  // namespace braidflow
