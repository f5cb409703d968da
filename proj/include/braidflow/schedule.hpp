#pragma once
// Time schedule for a braid word: one unit of time per letter, m = 2q equal
// sub-steps per letter, each sub-step realizing one application of the
// certified twist map for that letter's generator.  Negative letters reuse
// the positive letter's shape and run its flow time-reversed, so a single
// certified shape per generator index covers both signs.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "braidflow/braid_word.hpp"
#include "braidflow/certificates.hpp"
#include "braidflow/errors.hpp"
#include "braidflow/layout.hpp"
#include "braidflow/warp.hpp"

namespace braidflow {

enum class SegmentDirection { forward, reversed };

struct Segment {
  int letter = 0;    // 0-based position in the word
  int index = 0;     // generator index
  int sign = 1;      // letter sign; reversed direction iff -1
  int sub_step = 1;  // 1..m within the letter
  double t0 = 0;
  double t1 = 0;
  SegmentDirection direction = SegmentDirection::forward;
};

struct Schedule {
  BraidWord word;
  StrandLayout layout;
  WarpSpec warp;
  int q = 0;  // subdivision parameter after any escalation
  int m = 0;  // sub-steps per letter, 2q
  double period = 1;
  double trivial_coeff = 0;  // empty word: H = coeff * y^2
  double xi_scale = 1;
  std::vector<GeneratorShape> shapes;  // shapes[i-1] serves generator i
  std::vector<Segment> segments;
};

// All three shape certificates for one (q, eps, annulus, xi_scale) choice.
struct CertBundle {
  CertReport rho;
  TwistReport twist;
  FamilyTwistReport family;
  bool pass = false;
  std::string error;  // set when certification could not run at all
};

namespace detail {

// Certification is a pure function of (q, eps, annulus, xi_scale); repeated
// schedule builds (CLI invocations aside) share one verdict per key.
inline CertBundle certified_bundle(int q, double eps, Annulus ann,
                                   double xi_scale) {
  using Key = std::array<std::uint64_t, 5>;
  const Key key = {static_cast<std::uint64_t>(q),
                   std::bit_cast<std::uint64_t>(eps),
                   std::bit_cast<std::uint64_t>(ann.a_bound),
                   std::bit_cast<std::uint64_t>(ann.b_bound),
                   std::bit_cast<std::uint64_t>(xi_scale)};
  static std::map<Key, CertBundle> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  CertBundle bundle;
  try {
    const GeneratorShape shape = GeneratorShape::make(q, eps, 0.0, 1, xi_scale);
    bundle.rho = certify_rho(shape);
    if (bundle.rho.pass) {
      bundle.twist = certify_twist(shape, {}, ann);
      if (bundle.twist.pass)
        bundle.family =
            certify_family_twist(shape, default_family_t_grid(), {}, ann);
    }
    bundle.pass =
        bundle.rho.pass && bundle.twist.pass && bundle.family.pass;
  } catch (const InputError& e) {
    bundle.pass = false;
    bundle.error = e.what();
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, bundle);
  return bundle;
}

inline bool certified_shape_passes(int q, double eps, Annulus ann,
                                   double xi_scale) {
  return certified_bundle(q, eps, ann, xi_scale).pass;
}

}  // namespace detail

// Certificates for the shape a layout would use at subdivision q, without
// building a schedule. Memoized together with the schedule builder's checks.
inline CertBundle certify_shapes(int q, const StrandLayout& layout,
                                 double xi_scale = 1.0) {
  return detail::certified_bundle(q, layout.eps, layout.annulus, xi_scale);
}

// Assemble the schedule, escalating q (doubling, at most 3 times) until the
// shape certificates hold for the layout's eps and annulus.
inline Schedule build_schedule(const BraidWord& word, const StrandLayout& layout,
                               int q, WarpSpec warp = {},
                               double xi_scale = 1.0) {
  if (word.n_strands != layout.n)
    throw InputError("braid word and layout disagree on the strand count");
  for (const Letter& l : word.letters)
    if (l.index < 1 || l.index >= word.n_strands)
      throw InputError("braid word letter index out of range for the layout");
  if (warp.kind == WarpKind::literal_eq17 &&
      !(warp.eps_tilde > 0 && warp.eps_tilde < 0.25))
    throw InputError("literal warp buffer width must lie in (0, 0.25)");

  Schedule sched;
  sched.word = word;
  sched.layout = layout;
  sched.warp = warp;
  sched.xi_scale = xi_scale;

  if (word.letters.empty()) {
    sched.q = q;
    sched.m = 2 * q;
    sched.period = 1;
    return sched;
  }

  int q_final = -1;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const int q_try = q << attempt;
    if (detail::certified_shape_passes(q_try, layout.eps, layout.annulus,
                                       xi_scale)) {
      q_final = q_try;
      break;
    }
  }
  if (q_final < 0)
    throw CertificationError(
        "shape certification failed after 3 q-doubling escalations");

  sched.q = q_final;
  sched.m = 2 * q_final;
  for (int i = 1; i <= layout.n - 1; ++i)
    sched.shapes.push_back(GeneratorShape::make(
        q_final, layout.eps, layout.centers[static_cast<std::size_t>(i - 1)], 1,
        xi_scale));

  const int m = sched.m;
  for (std::size_t L = 0; L < word.letters.size(); ++L) {
    const Letter& letter = word.letters[L];
    for (int j = 1; j <= m; ++j) {
      Segment seg;
      seg.letter = static_cast<int>(L);
      seg.index = letter.index;
      seg.sign = letter.sign;
      seg.sub_step = j;
      seg.t0 = static_cast<double>(L) + static_cast<double>(j - 1) / m;
      seg.t1 = static_cast<double>(L) + static_cast<double>(j) / m;
      seg.direction = letter.sign < 0 ? SegmentDirection::reversed
                                      : SegmentDirection::forward;
      sched.segments.push_back(seg);
    }
  }
  sched.period = static_cast<double>(word.letters.size());
  return sched;
}

}  // namespace braidflow
