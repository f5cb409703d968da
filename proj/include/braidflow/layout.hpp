#pragma once
// Strand layout on the circle: n marked points at rest positions (i-1)/n,
// generator centers halfway between neighbors, and the bump geometry sized
// so that the two strands a generator exchanges stay in the exact rotation
// core while every other strand sits in the pure shear zone.

#include <cmath>
#include <string>
#include <vector>

#include "braidflow/errors.hpp"
#include "braidflow/twist_map.hpp"

namespace braidflow {

struct StrandLayout {
  int n = 2;
  std::vector<double> positions;  // p_i = (i-1)/n
  std::vector<double> centers;    // c_k = (2k-1)/(2n), k = 1..n-1
  double delta = 0;               // half-gap between exchanged strands
  double eps = 0;                 // bump threshold, 0.6/n^2
  Annulus annulus;
  // Non-fatal geometry notes (e.g. bump support reaching the band edge).
  std::vector<std::string> warnings;
};

inline double circle_dist(double a, double b) {
  double d = std::abs(a - b);
  d -= std::floor(d);
  return std::min(d, 1 - d);
}

inline StrandLayout make_layout(int n, Annulus ann = {}) {
  if (n < 2) throw InputError("layout requires at least 2 strands");
  StrandLayout lay;
  lay.n = n;
  lay.annulus = ann;
  for (int i = 1; i <= n; ++i) lay.positions.push_back((i - 1) / static_cast<double>(n));
  for (int k = 1; k <= n - 1; ++k)
    lay.centers.push_back((2 * k - 1) / (2.0 * n));
  lay.delta = 1.0 / (2 * n);
  lay.eps = 0.6 / (n * n);

  // Exchanged pair inside the rotation core at every iterate.
  if (!(2 * lay.delta * lay.delta <= 0.95 * lay.eps))
    throw InputError(
        "layout invalid: exchanged strands leave the rotation core "
        "(2 delta^2 > 0.95 eps); use a smaller eps");
  // Spectators in the pure shear zone of every generator.
  for (int k = 1; k <= n - 1; ++k) {
    const double c = lay.centers[static_cast<std::size_t>(k - 1)];
    for (int j = 1; j <= n; ++j) {
      if (j == k || j == k + 1) continue;
      const double d = circle_dist(lay.positions[static_cast<std::size_t>(j - 1)], c);
      if (!(2 * d * d >= 2.1 * lay.eps))
        throw InputError(
            "layout invalid: spectator strand " + std::to_string(j) +
            " enters the bump of generator " + std::to_string(k) +
            "; use a smaller eps");
    }
  }
  // Nearest-translate uniqueness on the circle; the exact disjointness bound
  // is sqrt(2)/2, enforced with margin.
  if (!(std::sqrt(2 * lay.eps) <= 0.68))
    throw InputError(
        "layout invalid: bump support too wide for circle evaluation "
        "(sqrt(2 eps) > 0.68); use a smaller eps");
  // Bump support versus the band edge. Not fatal: the flow keeps marked
  // strands near y = 0, but maps of points near the edge may then violate
  // the boundary-preservation conditions; recorded for diagnostics.
  const double clearance = std::min(std::abs(ann.a_bound), ann.b_bound);
  if (!(std::sqrt(2 * lay.eps) <= 0.9 * clearance))
    lay.warnings.push_back(
        "bump support reaches the annulus boundary (sqrt(2 eps) > 0.9 min"
        "(|a|, b)); boundary invariance of the band edge is not certified");
  return lay;
}

}  // namespace braidflow
