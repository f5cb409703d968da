#pragma once
// Serialization: schedule and report JSON, trajectory CSV (both directions).
// Output is byte-deterministic: keys appear in insertion order and every real
// is printed with 17 significant digits, which round-trips doubles exactly.
// (A hand-rolled emitter is used because off-the-shelf JSON writers choose
// shortest-round-trip formatting and cannot be pinned to 17 digits.)

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "braidflow/analysis.hpp"
#include "braidflow/errors.hpp"
#include "braidflow/integrator.hpp"
#include "braidflow/normal_form.hpp"
#include "braidflow/schedule.hpp"
#include "braidflow/verify.hpp"

namespace braidflow {

namespace detail {

inline std::string format_real(double v) {
  if (!std::isfinite(v))
    throw NumericalError("attempted to serialize a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

// Minimal streaming JSON emitter with two-space pretty printing.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& name) {
    separate();
    append_string(name);
    out_ += ": ";
    have_key_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return raw(detail::format_real(v)); }
  JsonWriter& value(int v) { return raw(std::to_string(v)); }
  JsonWriter& value(long v) { return raw(std::to_string(v)); }
  JsonWriter& value(long long v) { return raw(std::to_string(v)); }
  JsonWriter& value(bool v) { return raw(v ? "true" : "false"); }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(const std::string& v) {
    separate();
    append_string(v);
    return *this;
  }

  std::string str() const { return out_ + "\n"; }

 private:
  JsonWriter& open(char c) {
    separate();
    out_ += c;
    ++depth_;
    fresh_ = true;
    return *this;
  }

  JsonWriter& close(char c) {
    --depth_;
    if (!fresh_) {
      out_ += '\n';
      indent();
    }
    out_ += c;
    fresh_ = false;
    return *this;
  }

  JsonWriter& raw(const std::string& text) {
    separate();
    out_ += text;
    return *this;
  }

  // Comma/newline bookkeeping before an element (skipped right after a key).
  void separate() {
    if (have_key_) {
      have_key_ = false;
      return;
    }
    if (depth_ == 0) return;
    if (!fresh_) out_ += ',';
    out_ += '\n';
    indent();
    fresh_ = false;
  }

  void indent() { out_.append(static_cast<std::size_t>(2 * depth_), ' '); }

  void append_string(const std::string& s) {
    out_ += '"';
    for (const char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  int depth_ = 0;
  bool fresh_ = true;
  bool have_key_ = false;
};

namespace detail {

inline const char* warp_kind_name(WarpKind kind) {
  switch (kind) {
    case WarpKind::smooth_bump: return "smooth";
    case WarpKind::literal_eq17: return "eq17";
    case WarpKind::none: return "none";
  }
  return "unknown";
}

inline void emit_annulus(JsonWriter& w, const Annulus& ann) {
  w.begin_object();
  w.key("a_bound").value(ann.a_bound);
  w.key("b_bound").value(ann.b_bound);
  w.end_object();
}

inline void emit_real_array(JsonWriter& w, const std::vector<double>& xs) {
  w.begin_array();
  for (const double x : xs) w.value(x);
  w.end_array();
}

inline void emit_cert_report(JsonWriter& w, const CertReport& r) {
  w.begin_object();
  w.key("pass").value(r.pass);
  w.key("extremum").value(r.extremum);
  w.key("arg_extremum").value(r.arg_extremum);
  w.key("grid").value(r.grid_points);
  w.key("margin").value(r.margin);
  w.end_object();
}

inline void emit_twist_report(JsonWriter& w, const TwistReport& r) {
  w.begin_object();
  w.key("pass").value(r.pass);
  w.key("extremum").value(r.extremum);
  w.key("arg_extremum").begin_object();
  w.key("x").value(r.arg_x);
  w.key("y").value(r.arg_y);
  w.end_object();
  w.key("grid").begin_object();
  w.key("nx").value(r.grid.nx);
  w.key("ny").value(r.grid.ny);
  w.end_object();
  w.key("threshold").value(r.threshold);
  w.key("margin").value(r.margin);
  w.end_object();
}

inline void emit_family_report(JsonWriter& w, const FamilyTwistReport& r) {
  w.begin_object();
  w.key("pass").value(r.pass);
  w.key("extremum").value(r.extremum);
  w.key("arg_extremum").begin_object();
  w.key("t").value(r.arg_t);
  w.key("x").value(r.arg_x);
  w.key("y").value(r.arg_y);
  w.end_object();
  w.key("grid").begin_object();
  w.key("nx").value(r.grid.nx);
  w.key("ny").value(r.grid.ny);
  w.end_object();
  w.key("threshold").value(r.threshold);
  w.key("margin").value(r.margin);
  w.end_object();
}

inline void emit_cert_bundle(JsonWriter& w, const CertBundle& b) {
  w.begin_object();
  w.key("pass").value(b.pass);
  w.key("error").value(b.error);
  w.key("rho");
  emit_cert_report(w, b.rho);
  w.key("twist");
  emit_twist_report(w, b.twist);
  w.key("family");
  emit_family_report(w, b.family);
  w.end_object();
}

inline const char* failure_name(VerifyFailure f) {
  switch (f) {
    case VerifyFailure::none: return "none";
    case VerifyFailure::invalid_input: return "invalid_input";
    case VerifyFailure::certificate: return "certificate";
    case VerifyFailure::numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace detail

inline std::string schedule_json(const Schedule& sched) {
  JsonWriter w;
  w.begin_object();
  w.key("version").value(1);
  w.key("n").value(sched.layout.n);
  w.key("word").value(format_word(sched.word));
  w.key("q").value(sched.q);
  w.key("layout").begin_object();
  w.key("positions");
  detail::emit_real_array(w, sched.layout.positions);
  w.key("centers");
  detail::emit_real_array(w, sched.layout.centers);
  w.key("delta").value(sched.layout.delta);
  w.key("eps").value(sched.layout.eps);
  w.key("annulus");
  detail::emit_annulus(w, sched.layout.annulus);
  w.end_object();
  w.key("warp").begin_object();
  w.key("kind").value(detail::warp_kind_name(sched.warp.kind));
  w.key("eps_tilde").value(sched.warp.eps_tilde);
  w.end_object();
  w.key("period").value(sched.period);
  w.key("segments").begin_array();
  for (const Segment& s : sched.segments) {
    w.begin_object();
    w.key("letter").value(s.letter);
    w.key("index").value(s.index);
    w.key("sign").value(s.sign);
    w.key("t0").value(s.t0);
    w.key("t1").value(s.t1);
    w.key("sub_step").value(s.sub_step);
    w.key("direction")
        .value(s.direction == SegmentDirection::forward ? "forward"
                                                        : "reversed");
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

inline std::string verification_report_json(const VerificationReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.key("match").value(rep.match);
  w.key("input_word").value(format_word(rep.input_word));
  w.key("extracted_word").value(format_word(rep.extracted_word));
  w.key("normal_forms").begin_object();
  w.key("input").value(normal_form_string(left_normal_form(rep.input_word)));
  w.key("extracted")
      .value(normal_form_string(left_normal_form(rep.extracted_word)));
  w.end_object();
  w.key("certificates");
  detail::emit_cert_bundle(w, rep.certificates);
  w.key("diagnostics").begin_object();
  w.key("q_used").value(rep.q_used);
  w.key("max_ode_map_error").value(rep.max_ode_map_error);
  w.key("min_separation").value(rep.min_separation);
  w.key("failure").value(detail::failure_name(rep.failure));
  w.key("error").value(rep.error);
  w.end_object();
  w.end_object();
  return w.str();
}

inline std::string certify_report_json(int q, const StrandLayout& layout,
                                       const CertBundle& bundle) {
  JsonWriter w;
  w.begin_object();
  w.key("pass").value(bundle.pass);
  w.key("n").value(layout.n);
  w.key("q").value(q);
  w.key("eps").value(layout.eps);
  w.key("annulus");
  detail::emit_annulus(w, layout.annulus);
  w.key("certificates");
  detail::emit_cert_bundle(w, bundle);
  w.end_object();
  return w.str();
}

inline std::string entropy_report_json(const BraidWord& word, int iters,
                                       double h_max, const EntropyReport& rep,
                                       const DilatationBound& burau) {
  JsonWriter w;
  w.begin_object();
  w.key("word").value(format_word(word));
  w.key("iters").value(iters);
  w.key("h_max").value(h_max);
  w.key("lengths");
  detail::emit_real_array(w, rep.lengths);
  w.key("entropy").value(rep.entropy);
  w.key("burau_bound").value(burau.value);
  w.key("log_burau").value(std::log(burau.value));
  w.end_object();
  return w.str();
}

// ---------------------------------------------------------------------------
// Trajectory CSV: header "t,strand,x_lift,y"; one row per (time, strand),
// sorted by time then strand; strands are numbered from 1.

inline std::string trajectory_csv(const StrandSet& set) {
  std::string out = "t,strand,x_lift,y\n";
  const int n = set.layout.n;
  for (std::size_t ti = 0; ti < set.times.size(); ++ti) {
    for (int s = 1; s <= n; ++s) {
      const MapPoint& z = set.samples[static_cast<std::size_t>(s - 1)][ti];
      out += detail::format_real(set.times[ti]);
      out += ',';
      out += std::to_string(s);
      out += ',';
      out += detail::format_real(z.x_lift);
      out += ',';
      out += detail::format_real(z.y);
      out += '\n';
    }
  }
  return out;
}

// Parse a trajectory CSV back into a StrandSet. The layout is rebuilt from
// the strand count and the separation floor is recomputed from the samples.
inline StrandSet read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw InputError("trajectory CSV is empty");
  while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
    line.pop_back();
  if (line != "t,strand,x_lift,y")
    throw InputError("trajectory CSV must start with header t,strand,x_lift,y");

  struct Row {
    double t;
    int strand;
    double x;
    double y;
  };
  std::vector<Row> rows;
  int n = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    Row row;
    char trail = 0;
    const int got = std::sscanf(line.c_str(), "%lf,%d,%lf,%lf%c", &row.t,
                                &row.strand, &row.x, &row.y, &trail);
    if (got != 4 || !std::isfinite(row.t) || !std::isfinite(row.x) ||
        !std::isfinite(row.y))
      throw InputError("trajectory CSV line " + std::to_string(line_no) +
                       " is malformed");
    if (row.strand < 1)
      throw InputError("trajectory CSV line " + std::to_string(line_no) +
                       " has a non-positive strand id");
    n = std::max(n, row.strand);
    rows.push_back(row);
  }
  if (n < 2 || rows.empty())
    throw InputError("trajectory CSV holds fewer than 2 strands");
  if (rows.size() % static_cast<std::size_t>(n) != 0)
    throw InputError("trajectory CSV rows do not cover every strand at every "
                     "time");

  StrandSet set;
  set.layout = make_layout(n);
  const std::size_t nt = rows.size() / static_cast<std::size_t>(n);
  set.samples.assign(static_cast<std::size_t>(n), {});
  for (std::size_t ti = 0; ti < nt; ++ti) {
    const double t = rows[ti * static_cast<std::size_t>(n)].t;
    set.times.push_back(t);
    if (ti > 0 && !(t > set.times[ti - 1]))
      throw InputError("trajectory CSV times are not strictly increasing");
    for (int s = 1; s <= n; ++s) {
      const Row& row = rows[ti * static_cast<std::size_t>(n) +
                            static_cast<std::size_t>(s - 1)];
      if (row.strand != s || row.t != t)
        throw InputError("trajectory CSV rows are not sorted by time then "
                         "strand");
      set.samples[static_cast<std::size_t>(s - 1)].push_back({row.x, row.y});
    }
  }

  double min_sep = std::numeric_limits<double>::infinity();
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const MapPoint& a = set.samples[static_cast<std::size_t>(i)][ti];
        const MapPoint& b = set.samples[static_cast<std::size_t>(j)][ti];
        min_sep = std::min(
            min_sep, std::hypot(circle_dist(a.x_lift, b.x_lift), a.y - b.y));
      }
  set.min_separation = min_sep;
  return set;
}

}  // namespace braidflow
