#pragma once
// Dynamical analysis of a compiled schedule: the stroboscopic period map, an
// integer-matrix lower bound for the dilatation, and a curve-growth estimate
// of topological entropy.

#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include "braidflow/errors.hpp"
#include "braidflow/integrator.hpp"
#include "braidflow/normal_form.hpp"

namespace braidflow {

// ---------------------------------------------------------------------------
// Period map: the composition of every sub-step map in schedule order. It is
// the exact discrete counterpart of integrating the flow over one period.

class PoincareMap {
 public:
  explicit PoincareMap(Schedule sched) : sched_(std::move(sched)) {}

  MapPoint operator()(const MapPoint& z) const {
    MapPoint w = z;
    for (const Segment& seg : sched_.segments) {
      const GeneratorShape& shape =
          sched_.shapes[static_cast<std::size_t>(seg.index - 1)];
      w = seg.direction == SegmentDirection::forward
              ? map_forward_unchecked(shape, w)
              : map_backward_unchecked(shape, w);
    }
    return w;
  }

  const Schedule& schedule() const { return sched_; }

 private:
  Schedule sched_;
};

inline PoincareMap poincare_map(const Schedule& sched) {
  return PoincareMap(sched);
}

// ---------------------------------------------------------------------------
// Reduced Burau representation specialized at t = -1. The spectral radius of
// a word's matrix bounds the braid's topological entropy from below and is
// the exact dilatation for pseudo-Anosov three-strand braids.

struct DilatationBound {
  double value = 1.0;                          // spectral radius, always >= 1
  std::vector<std::vector<long long>> matrix;  // (n-1) x (n-1), exact
};

namespace detail {

// sigma_index^sign acts on the reduced basis e_1..e_{n-1} as
// I + sign * e_i (e_{i+1} - e_{i-1})^T with out-of-range basis vectors
// dropped; the two signs are exact inverses because e_i is orthogonal to
// e_{i+1} - e_{i-1}.
inline std::vector<std::vector<long long>> burau_generator(int n, int index,
                                                           int sign) {
  const int d = n - 1;
  std::vector<std::vector<long long>> m(
      static_cast<std::size_t>(d), std::vector<long long>(static_cast<std::size_t>(d), 0));
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  const std::size_t r = static_cast<std::size_t>(index - 1);
  if (index + 1 <= d) m[r][static_cast<std::size_t>(index)] += sign;
  if (index - 1 >= 1) m[r][static_cast<std::size_t>(index - 2)] -= sign;
  return m;
}

inline std::vector<std::vector<long long>> burau_multiply(
    const std::vector<std::vector<long long>>& a,
    const std::vector<std::vector<long long>>& b) {
  const std::size_t d = a.size();
  constexpr __int128 limit = 9'000'000'000'000'000'000LL;
  std::vector<std::vector<long long>> out(d, std::vector<long long>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      __int128 acc = 0;
      for (std::size_t k = 0; k < d; ++k)
        acc += static_cast<__int128>(a[i][k]) * b[k][j];
      if (acc > limit || acc < -limit)
        throw InputError(
            "dilatation matrix entries overflow 64-bit integers; "
            "the word is too long for an exact bound");
      out[i][j] = static_cast<long long>(acc);
    }
  return out;
}

// Spectral radius by normalized repeated squaring: with A_{k+1} = (A_k/s_k)^2
// and s_k the Frobenius norm, log rho = sum 2^{-k} log s_k; polynomial
// factors (Frobenius constant, Jordan blocks) die off as log(.)/2^k, far
// below 1e-10 after 60 squarings.
inline double spectral_radius(const std::vector<std::vector<long long>>& m) {
  const std::size_t d = m.size();
  std::vector<std::vector<double>> a(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a[i][j] = static_cast<double>(m[i][j]);
  double log_rho = 0.0;
  for (int k = 0; k <= 60; ++k) {
    double sq = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) sq += a[i][j] * a[i][j];
    const double fro = std::sqrt(sq);
    if (!(fro > 0)) return 0.0;
    log_rho += std::ldexp(std::log(fro), -k);
    if (k == 60) break;
    std::vector<std::vector<double>> next(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t l = 0; l < d; ++l) {
        const double v = a[i][l] / fro;
        if (v == 0) continue;
        for (std::size_t j = 0; j < d; ++j) next[i][j] += v * a[l][j] / fro;
      }
    a = std::move(next);
  }
  return std::exp(log_rho);
}

}  // namespace detail

inline DilatationBound burau_matrix(const BraidWord& word) {
  if (word.n_strands < 2)
    throw InputError("the reduced representation needs at least 2 strands");
  const int d = word.n_strands - 1;
  DilatationBound out;
  out.matrix.assign(static_cast<std::size_t>(d),
                    std::vector<long long>(static_cast<std::size_t>(d), 0));
  for (int i = 0; i < d; ++i)
    out.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  for (const Letter& l : word.letters)
    out.matrix = detail::burau_multiply(
        out.matrix, detail::burau_generator(word.n_strands, l.index, l.sign));
  out.value = std::max(1.0, detail::spectral_radius(out.matrix));
  return out;
}

// ---------------------------------------------------------------------------
// Curve-growth entropy estimate. A polyline joining the first two marked
// points is pushed through the period map; domain edges whose images exceed
// h_max are bisected (new midpoints are mapped exactly, keeping the polyline
// on the true image curve). The exponential growth rate of the total length
// estimates the topological entropy.

struct PolyCurve {
  std::vector<MapPoint> vertices;
};

struct EntropyReport {
  double entropy = 0.0;
  // lengths[k] is the total circle-metric length after k applications of the
  // period map; lengths[0] is the initial segment.
  std::vector<double> lengths;
};

namespace detail {

inline double edge_length(const MapPoint& a, const MapPoint& b) {
  return std::hypot(b.x_lift - a.x_lift, b.y - a.y);
}

struct CurveGrower {
  const PoincareMap& map;
  double h_max;
  long long budget;
  long long used = 0;

  MapPoint apply(const MapPoint& z) {
    if (++used > budget)
      throw BudgetError("entropy vertex budget exceeded; raise the budget or "
                        "lower the iteration count");
    return map(z);
  }

  // Emit the image of edge (a, b) at resolution h_max, excluding fa itself.
  // out is null on the final iteration, where only the length is needed.
  void refine(const MapPoint& a, const MapPoint& fa, const MapPoint& b,
              const MapPoint& fb, int depth, std::vector<MapPoint>* out,
              double& length) {
    const double len = edge_length(fa, fb);
    // Where the local stretch exceeds the floating-point resolution of the
    // domain, the edge cannot be subdivided further; the map is linear at
    // that scale, so the chord equals the arc and is accepted as is.
    const bool floor_hit = edge_length(a, b) <= 4e-14 * (1 + std::abs(a.x_lift));
    if (len <= h_max || floor_hit) {
      length += len;
      if (out) out->push_back(fb);
      return;
    }
    if (depth >= 60)
      throw NumericalError(
          "curve refinement failed to reach the target resolution");
    const MapPoint mid{0.5 * (a.x_lift + b.x_lift), 0.5 * (a.y + b.y)};
    const MapPoint fm = apply(mid);
    refine(a, fa, mid, fm, depth + 1, out, length);
    refine(mid, fm, b, fb, depth + 1, out, length);
  }

  // One application of the period map to the whole curve. Returns the image
  // length; fills image unless it is null.
  double grow(const std::vector<MapPoint>& domain,
              std::vector<MapPoint>* image) {
    double length = 0.0;
    MapPoint prev = domain.front();
    MapPoint fprev = apply(prev);
    if (image) image->push_back(fprev);
    for (std::size_t i = 1; i < domain.size(); ++i) {
      const MapPoint cur = domain[i];
      const MapPoint fcur = apply(cur);
      refine(prev, fprev, cur, fcur, 0, image, length);
      prev = cur;
      fprev = fcur;
    }
    return length;
  }
};

}  // namespace detail

inline EntropyReport entropy_estimate(const Schedule& sched, int iters,
                                      double h_max,
                                      long long budget = 2'000'000) {
  if (iters < 5) throw InputError("entropy estimation needs at least 5 iterations");
  if (!(h_max > 1e-4 && h_max <= 0.05))
    throw InputError("h_max must lie in (1e-4, 0.05]");
  if (budget <= 0) throw InputError("vertex budget must be positive");

  const PoincareMap map = poincare_map(sched);
  const std::vector<double>& pos = sched.layout.positions;
  const MapPoint p1{pos[0], 0.0};
  const MapPoint p2{pos[1], 0.0};

  // Initial straight segment, pre-refined to the target resolution.
  PolyCurve curve;
  const double span = p2.x_lift - p1.x_lift;
  const int nseg = std::max(1, static_cast<int>(std::ceil(std::abs(span) / h_max)));
  for (int j = 0; j <= nseg; ++j)
    curve.vertices.push_back({p1.x_lift + span * j / nseg, 0.0});

  EntropyReport rep;
  rep.lengths.push_back(std::abs(span));

  detail::CurveGrower grower{map, h_max, budget};
  for (int k = 1; k <= iters; ++k) {
    std::vector<MapPoint> image;
    const bool keep = k < iters;  // the final image is only measured
    if (keep) image.reserve(curve.vertices.size());
    const double length = grower.grow(curve.vertices, keep ? &image : nullptr);
    rep.lengths.push_back(length);
    if (keep) curve.vertices = std::move(image);
  }

  // Least-squares slope of log L_k over the trailing half of the iterations.
  const int fit = (iters + 1) / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = iters - fit + 1; k <= iters; ++k) {
    const double x = k;
    const double y = std::log(rep.lengths[static_cast<std::size_t>(k)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = fit * sxx - sx * sx;
  rep.entropy = fit < 2 ? 0.0 : (fit * sxy - sx * sy) / denom;
  return rep;
}

}  // namespace braidflow
