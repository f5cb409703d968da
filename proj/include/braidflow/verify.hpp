#pragma once
// End-to-end check: compile a braid word into a certified flow, trace the
// marked strands, read the crossings back off, and compare with the input in
// the braid group (canonical form equality, not letter equality).

#include <string>
#include <vector>

#include "braidflow/braid_word.hpp"
#include "braidflow/crossings.hpp"
#include "braidflow/errors.hpp"
#include "braidflow/integrator.hpp"
#include "braidflow/layout.hpp"
#include "braidflow/normal_form.hpp"
#include "braidflow/schedule.hpp"

namespace braidflow {

struct VerifyOpts {
  int q = 8;
  WarpSpec warp{};
  TraceMethod method = TraceMethod::isotopy;
  int samples_per_substep = 64;
  IntegratorOpts integrator{};
  int threads = 1;
  double xi_scale = 1.0;  // test hook, forwarded to the schedule build
};

// How a verification run ended when it did not run to completion.
enum class VerifyFailure { none, invalid_input, certificate, numerical };

struct VerificationReport {
  bool match = false;
  BraidWord input_word;
  BraidWord extracted_word;
  int q_used = 0;
  CertBundle certificates;
  double max_ode_map_error = -1;  // flow map fidelity over the marked points
  double min_separation = -1;
  std::string error;  // empty when the pipeline ran to completion
  VerifyFailure failure = VerifyFailure::none;
};

inline VerificationReport verify_braid(const BraidWord& word,
                                       const VerifyOpts& opts = {}) {
  VerificationReport rep;
  rep.input_word = word;
  rep.extracted_word.n_strands = word.n_strands;
  try {
    const StrandLayout layout = make_layout(word.n_strands);
    const Schedule sched =
        build_schedule(word, layout, opts.q, opts.warp, opts.xi_scale);
    rep.q_used = sched.q;
    if (!word.letters.empty())
      rep.certificates = detail::certified_bundle(
          sched.q, layout.eps, layout.annulus, opts.xi_scale);

    std::vector<MapPoint> marked;
    for (double p : layout.positions) marked.push_back({p, 0.0});
    rep.max_ode_map_error =
        flow_map_check(sched, marked, opts.integrator).max_error;

    const StrandSet strands = trace_strands(
        sched, opts.samples_per_substep, opts.method, opts.integrator,
        opts.threads);
    rep.min_separation = strands.min_separation;

    const std::vector<CrossingEvent> events = detect_crossings(strands);
    rep.extracted_word = word_from_crossings(events, word.n_strands);
    rep.match = words_equal(word, rep.extracted_word);
  } catch (const InputError& e) {
    rep.match = false;
    rep.error = e.what();
    rep.failure = VerifyFailure::invalid_input;
  } catch (const CertificationError& e) {
    rep.match = false;
    rep.error = e.what();
    rep.failure = VerifyFailure::certificate;
  } catch (const std::exception& e) {
    rep.match = false;
    rep.error = e.what();
    rep.failure = VerifyFailure::numerical;
  }
  return rep;
}

inline VerificationReport verify_braid(const BraidWord& word, int q,
                                       WarpSpec warp = {},
                                       TraceMethod method =
                                           TraceMethod::isotopy) {
  VerifyOpts opts;
  opts.q = q;
  opts.warp = warp;
  opts.method = method;
  return verify_braid(word, opts);
}

}  // namespace braidflow
