#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>

#include "vrm/audit.hpp"
#include "vrm/engine.hpp"
#include "vrm/errors.hpp"
#include "vrm/generate.hpp"
#include "vrm/instance_io.hpp"
#include "vrm/report.hpp"
#include "vrm/trace_io.hpp"

namespace vrm::cli {
namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

Gamma parse_gamma(const std::string& text) {
  try {
    return Gamma(parse_rational(text));
  } catch (const ParseError& e) {
    throw ConfigError(std::string("--gamma: ") + e.what());
  }
}

Rational parse_param(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw ConfigError("--" + name + ": " + e.what());
  }
}

void print_tallies(std::ostream& out, const AuditReport& rep) {
  std::size_t width = 0;
  for (const auto& [name, t] : rep.checks) width = std::max(width, name.size());
  for (const auto& [name, t] : rep.checks) {
    out << name << std::string(width - name.size() + 2, ' ') << (t.ok() ? "ok  " : "FAIL") << "  "
        << t.checks << " checks, " << t.violations << " violations\n";
    for (const auto& msg : t.messages) out << "    " << msg << '\n';
  }
  if (!rep.error.empty()) out << "error: " << rep.error << '\n';
}

struct GenArgs {
  std::string family;
  int m = 0;
  std::uint64_t seed = 0;
  std::string output;
  std::optional<std::string> pos_range, horizon, spread, rate;
  std::optional<std::int64_t> resolution, factor;
  std::optional<int> clusters, levels;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  GenSpec spec;
  spec.family = parse_family(a.family);
  spec.m = a.m;
  spec.seed = a.seed;
  if (a.pos_range) spec.pos_range = parse_param("pos-range", *a.pos_range);
  if (a.horizon) spec.horizon = parse_param("horizon", *a.horizon);
  if (a.spread) spec.spread = parse_param("spread", *a.spread);
  if (a.rate) spec.rate = parse_param("rate", *a.rate);
  if (a.resolution) spec.resolution = *a.resolution;
  if (a.factor) spec.factor = *a.factor;
  if (a.clusters) spec.clusters = *a.clusters;
  if (a.levels) spec.levels = *a.levels;
  const Instance inst = generate(spec);
  if (a.output.empty() || a.output == "-") {
    out << write_instance(inst);
  } else {
    save_instance(inst, a.output);
  }
  return kOk;
}

struct RunArgs {
  std::string instance;
  std::string gamma = "3";
  std::string trace;
  bool verbose_trace = false;
  std::string solution;
  std::string opt = "auto";
  bool audit = false;
};

int cmd_run(const RunArgs& a, std::optional<int> digits, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const Gamma gamma = parse_gamma(a.gamma);
  ReportOptions ro;
  ro.opt = parse_opt_method(a.opt);
  ro.audit = a.audit;

  const auto start = std::chrono::steady_clock::now();
  EngineOptions eo;
  eo.record_phi = a.verbose_trace;
  const RunResult res = run(inst, gamma, eo);
  if (!a.trace.empty()) {
    std::ofstream t = open_output(a.trace);
    write_trace_jsonl(t, res.trace, a.verbose_trace, digits);
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!a.solution.empty()) open_output(a.solution) << write_solution(inst, res.solution, digits);

  const RunReport rep = report_run(inst, gamma, res, wall, ro);
  out << run_report_json(rep, digits);
  return rep.audit_ok && !*rep.audit_ok ? kViolation : kOk;
}

struct VerifyArgs {
  std::string suite = "small";
  std::uint64_t seed = 0;
  int count = 1000;
  std::string gamma = "3";
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const Suite suite = parse_suite(a.suite);
  if (a.count < 1) throw ConfigError("--count must be >= 1");
  const AuditReport rep = run_suite(suite, a.seed, a.count, parse_gamma(a.gamma), &err);
  print_tallies(out, rep);
  out << (rep.ok() ? "PASS" : "FAIL") << " (" << a.count << " instances, suite " << a.suite << ")\n";
  return rep.ok() ? kOk : kViolation;
}

struct CompareArgs {
  std::string instance;
  std::string gamma = "3";
  std::string opt = "auto";
};

int cmd_compare(const CompareArgs& a, std::optional<int> digits, std::ostream& out) {
  const Instance inst = load_instance(a.instance);
  const auto rows = compare_algorithms(inst, parse_gamma(a.gamma), parse_opt_method(a.opt));
  write_compare_table(out, rows, digits);
  out << "greedy: bipartite adaptation of the waiting-time rule (match once the two waits cover "
         "the distance)\n";
  return kOk;
}

struct ScalingArgs {
  std::string grid = "4,8,...,1024";
  int per_point = 20;
  std::uint64_t seed = 0;
  std::string output;
  std::vector<std::string> families;
};

int cmd_scaling(const ScalingArgs& a, std::optional<int> digits, std::ostream& out,
                std::ostream& err) {
  ScalingConfig cfg;
  cfg.m_grid = parse_m_grid(a.grid);
  cfg.per_point = a.per_point;
  cfg.seed = a.seed;
  if (!a.families.empty()) {
    cfg.families.clear();
    for (const auto& f : a.families) cfg.families.push_back(parse_family(f));
  }
  const auto rows = run_scaling(cfg, &err);
  if (a.output.empty() || a.output == "-") {
    write_scaling_csv(out, rows, digits);
  } else {
    std::ofstream f = open_output(a.output);
    write_scaling_csv(f, rows, digits);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online min-cost bipartite matching with delays on the line"};
  app.require_subcommand(1);
  std::optional<int> digits;
  app.add_option("--decimal-digits", digits, "Print rationals as decimals with D fractional digits")
      ->check(CLI::Range(0, 1000));

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance");
  g->add_option("--family", gen.family, "uniform, clustered, escalating_line or poisson")->required();
  g->add_option("--m", gen.m, "Number of requests (= servers)")->required();
  g->add_option("--seed", gen.seed, "PRNG seed");
  g->add_option("-o,--output", gen.output, "Output file (stdout if omitted)");
  g->add_option("--pos-range", gen.pos_range, "Positions are drawn from [0, R]");
  g->add_option("--horizon", gen.horizon, "Arrival window for uniform/clustered");
  g->add_option("--resolution", gen.resolution, "Grid resolution (values are multiples of 1/N)");
  g->add_option("--clusters", gen.clusters, "Cluster count (clustered)");
  g->add_option("--spread", gen.spread, "Cluster half-width (clustered)");
  g->add_option("--rate", gen.rate, "Arrival rate per role (poisson)");
  g->add_option("--factor", gen.factor, "Geometric spacing (escalating_line)");
  g->add_option("--levels", gen.levels, "Distinct positions per cluster (escalating_line)");

  RunArgs runa;
  auto* r = app.add_subcommand("run", "Run the online algorithm on an instance");
  r->add_option("--instance", runa.instance, "Instance JSON")->required();
  r->add_option("--gamma", runa.gamma, "Net-cost weight (rational > 1)");
  r->add_option("--trace", runa.trace, "Write the event trace as JSON lines");
  r->add_flag("--verbose-trace", runa.verbose_trace, "Include per-request phi snapshots in the trace");
  r->add_option("--solution", runa.solution, "Write the solution JSON");
  r->add_option("--opt", runa.opt, "auto, bruteforce or hungarian");
  r->add_flag("--audit", runa.audit, "Run the invariant audit as well");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Run the property suite on generated instances");
  v->add_option("--suite", ver.suite, "small (m <= 8) or full (m <= 16)");
  v->add_option("--seed", ver.seed, "Suite seed");
  v->add_option("--count", ver.count, "Number of instances");
  v->add_option("--gamma", ver.gamma, "Net-cost weight (rational > 1)");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Tabulate the online algorithm, greedy and OPT");
  c->add_option("--instance", cmp.instance, "Instance JSON")->required();
  c->add_option("--gamma", cmp.gamma, "Net-cost weight (rational > 1)");
  c->add_option("--opt", cmp.opt, "auto, bruteforce or hungarian");

  ScalingArgs sc;
  auto* s = app.add_subcommand("scaling", "Competitive-ratio sweep over m (gamma = 3)");
  s->add_option("--m-grid", sc.grid, "Comma list; '...' extends the leading progression");
  s->add_option("--per-point", sc.per_point, "Instances per (family, m)");
  s->add_option("--seed", sc.seed, "Sweep seed");
  s->add_option("-o,--output", sc.output, "CSV output (stdout if omitted)");
  s->add_option("--families", sc.families, "Subset of families")->delimiter(',');

  for (auto* sub : {g, r, v, c, s}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kBadInput;
  }

  try {
    if (g->parsed()) return cmd_gen(gen, out);
    if (r->parsed()) return cmd_run(runa, digits, out);
    if (v->parsed()) return cmd_verify(ver, out, err);
    if (c->parsed()) return cmd_compare(cmp, digits, out);
    if (s->parsed()) return cmd_scaling(sc, digits, out, err);
  } catch (const IoError& e) {
    err << e.what() << '\n';
    return kMissingFile;
  } catch (const CapacityError& e) {
    err << e.what() << '\n';
    return kTooLarge;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kViolation;
  } catch (const ParseError& e) {
    err << e.what() << '\n';
    return kBadInput;
  } catch (const ValidationError& e) {
    err << e.what() << '\n';
    return kBadInput;
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace vrm::cli
