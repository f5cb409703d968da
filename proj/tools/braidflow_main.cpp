// braidflow: compile braid words into certified annulus twist flows, trace
// and verify them, and report entropy and diagrams.
//
// Exit codes: 0 success/verified, 1 verification or certificate failure,
// 2 invalid input, 3 numerical failure or exhausted budget.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "braidflow/analysis.hpp"
#include "braidflow/io.hpp"
#include "braidflow/svg.hpp"
#include "braidflow/verify.hpp"

namespace {

using namespace braidflow;

struct CliConfig {
  int n = 0;
  std::string word_text;
  int q = 8;
  std::string warp_name = "smooth";
  std::string method_name = "isotopy";
  int iters = 14;
  double h_max = 0.01;
  int samples = 64;
  int threads = 1;
  long long budget = 40'000'000;
  long long seed = 0;
  std::string out_path;
  std::string input_path;  // diagram: trajectory CSV to read
  double xi_scale = 1.0;
};

WarpSpec warp_from_name(const std::string& name) {
  WarpSpec spec;
  if (name == "smooth") spec.kind = WarpKind::smooth_bump;
  else if (name == "eq17") spec.kind = WarpKind::literal_eq17;
  else if (name == "none") spec.kind = WarpKind::none;
  else throw InputError("unknown warp kind: " + name);
  return spec;
}

TraceMethod method_from_name(const std::string& name) {
  if (name == "ode") return TraceMethod::ode;
  if (name == "isotopy") return TraceMethod::isotopy;
  throw InputError("unknown trace method: " + name);
}

// Write to the -o path, or stdout when no path was given.
void deliver(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + out_path);
  out << content;
  if (!out) throw InputError("failed while writing: " + out_path);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + path.string());
  out << content;
  if (!out) throw InputError("failed while writing: " + path.string());
}

int run_verify(const CliConfig& cfg) {
  const BraidWord word = parse_word(cfg.word_text, cfg.n);
  VerifyOpts opts;
  opts.q = cfg.q;
  opts.warp = warp_from_name(cfg.warp_name);
  opts.method = method_from_name(cfg.method_name);
  opts.samples_per_substep = cfg.samples;
  opts.threads = cfg.threads;
  opts.xi_scale = cfg.xi_scale;
  const VerificationReport rep = verify_braid(word, opts);
  deliver(cfg.out_path, verification_report_json(rep));
  switch (rep.failure) {
    case VerifyFailure::invalid_input: return 2;
    case VerifyFailure::certificate: return 1;
    case VerifyFailure::numerical: return 3;
    case VerifyFailure::none: break;
  }
  return rep.match ? 0 : 1;
}

int run_certify(const CliConfig& cfg) {
  const StrandLayout layout = make_layout(cfg.n);
  const CertBundle bundle = certify_shapes(cfg.q, layout, cfg.xi_scale);
  deliver(cfg.out_path, certify_report_json(cfg.q, layout, bundle));
  return bundle.pass ? 0 : 1;
}

int run_trace(const CliConfig& cfg) {
  const BraidWord word = parse_word(cfg.word_text, cfg.n);
  const StrandLayout layout = make_layout(cfg.n);
  const Schedule sched = build_schedule(word, layout, cfg.q,
                                        warp_from_name(cfg.warp_name),
                                        cfg.xi_scale);
  const StrandSet set =
      trace_strands(sched, cfg.samples, method_from_name(cfg.method_name), {},
                    cfg.threads);
  const std::filesystem::path dir =
      cfg.out_path.empty() ? std::filesystem::path(".")
                           : std::filesystem::path(cfg.out_path);
  std::filesystem::create_directories(dir);
  write_file(dir / "schedule.json", schedule_json(sched));
  write_file(dir / "strands.csv", trajectory_csv(set));
  return 0;
}

int run_entropy(const CliConfig& cfg) {
  const BraidWord word = parse_word(cfg.word_text, cfg.n);
  const StrandLayout layout = make_layout(cfg.n);
  const Schedule sched = build_schedule(word, layout, cfg.q,
                                        warp_from_name(cfg.warp_name),
                                        cfg.xi_scale);
  const EntropyReport rep =
      entropy_estimate(sched, cfg.iters, cfg.h_max, cfg.budget);
  const DilatationBound burau = burau_matrix(word);
  deliver(cfg.out_path, entropy_report_json(word, cfg.iters, cfg.h_max, rep,
                                            burau));
  return 0;
}

int run_diagram(const CliConfig& cfg) {
  std::ifstream in(cfg.input_path, std::ios::binary);
  if (!in) throw InputError("cannot open trajectory CSV: " + cfg.input_path);
  const StrandSet set = read_trajectory_csv(in);
  const std::vector<CrossingEvent> events = detect_crossings(set);
  deliver(cfg.out_path, render_braid_svg(set, events));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliConfig cfg;
  CLI::App app{"compile braid words into certified annulus twist flows"};
  app.require_subcommand(1);

  const auto add_strands = [&](CLI::App* sub) {
    sub->add_option("-n,--strands", cfg.n, "number of strands (>= 2)")
        ->required();
  };
  const auto add_word = [&](CLI::App* sub) {
    sub->add_option("-w,--word", cfg.word_text,
                    "braid word, e.g. \"s1 s2^-1\" (empty for the trivial "
                    "braid)")
        ->required();
  };
  const auto add_shape = [&](CLI::App* sub) {
    sub->add_option("-q,--subdivision", cfg.q,
                    "half the number of twist-map sub-steps per letter")
        ->capture_default_str();
    sub->add_option("--xi-scale", cfg.xi_scale,
                    "scale the rotation amplitude (test hook)")
        ->group("");
  };
  const auto add_warp = [&](CLI::App* sub) {
    sub->add_option("--warp", cfg.warp_name,
                    "time warp joining sub-steps: smooth, eq17, or none")
        ->check(CLI::IsMember({"smooth", "eq17", "none"}))
        ->capture_default_str();
  };
  const auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method_name,
                    "trajectory generator: ode or isotopy")
        ->check(CLI::IsMember({"ode", "isotopy"}))
        ->capture_default_str();
  };
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--out", cfg.out_path, "output path (default stdout)");
    sub->add_option("--threads", cfg.threads, "worker thread bound")
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed,
                    "sampling seed (reserved; outputs are deterministic)")
        ->capture_default_str();
  };

  CLI::App* verify =
      app.add_subcommand("verify", "compile a word, re-extract it from the "
                                   "flow, and compare in the braid group");
  add_strands(verify);
  add_word(verify);
  add_shape(verify);
  add_warp(verify);
  add_method(verify);
  verify->add_option("--samples", cfg.samples,
                     "trace samples per twist-map sub-step")
      ->capture_default_str();
  add_common(verify);

  CLI::App* certify = app.add_subcommand(
      "certify", "evaluate the twist-map shape certificates for a layout");
  add_strands(certify);
  add_shape(certify);
  add_common(certify);

  CLI::App* trace = app.add_subcommand(
      "trace", "write the schedule JSON and strand trajectory CSV");
  add_strands(trace);
  add_word(trace);
  add_shape(trace);
  add_warp(trace);
  add_method(trace);
  trace->add_option("--samples", cfg.samples,
                    "trace samples per twist-map sub-step")
      ->capture_default_str();
  add_common(trace);

  CLI::App* entropy = app.add_subcommand(
      "entropy", "curve-growth entropy estimate with the dilatation bound");
  add_strands(entropy);
  add_word(entropy);
  add_shape(entropy);
  add_warp(entropy);
  entropy->add_option("--iters", cfg.iters, "period map iterations")
      ->capture_default_str();
  entropy->add_option("--h-max", cfg.h_max, "curve resolution")
      ->capture_default_str();
  entropy->add_option("--budget", cfg.budget,
                      "map application budget for curve refinement")
      ->capture_default_str();
  add_common(entropy);

  CLI::App* diagram = app.add_subcommand(
      "diagram", "render a traced trajectory CSV as a braid diagram SVG");
  diagram->add_option("csv", cfg.input_path, "trajectory CSV from trace")
      ->required();
  add_common(diagram);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(cfg);
    if (certify->parsed()) return run_certify(cfg);
    if (trace->parsed()) return run_trace(cfg);
    if (entropy->parsed()) return run_entropy(cfg);
    if (diagram->parsed()) return run_diagram(cfg);
  } catch (const InputError& e) {
    std::fprintf(stderr, "braidflow: invalid input: %s\n", e.what());
    return 2;
  } catch (const CertificationError& e) {
    std::fprintf(stderr, "braidflow: certificate failure: %s\n", e.what());
    return 1;
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "braidflow: budget exhausted: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "braidflow: numerical failure: %s\n", e.what());
    return 3;
  }
  return 2;
}
